//! Numerical fractional calculus on an interval: Riemann-Liouville, Caputo and
//! Hadamard operators, closed-form constants for Sobolev, Hardy,
//! Gagliardo-Nirenberg and Caffarelli-Kohn-Nirenberg type inequalities, and
//! pass/fail certificates checking them on sampled functions.

// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod corpus;
pub mod diffusion;
pub mod error;
pub mod exec;
pub mod grid;
pub mod ineq;
pub mod ops;
pub mod report;
pub mod special;

pub use corpus::{generate, parse_expr, sharpness_search, CorpusFn, CorpusKind, CorpusSpec, ExprAst};
pub use error::{Error, Result};
pub use exec::Exec;
pub use grid::{norm, uniform_grid, Grid, GridFn, NormKind};
pub use ineq::{sweep, validate_case, Certificate, Family, InequalityCase, Params};
pub use special::gamma_fn;
