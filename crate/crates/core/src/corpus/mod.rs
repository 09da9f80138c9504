//! Test functions: closed-form powers, seeded random polynomials vanishing at
//! `a`, user expressions, and a search for ratio-maximizing polynomials.

mod expr;
mod search;

pub use expr::{eval_expr, parse_expr, BinOp, ExprAst, Func};
pub use search::{sharpness_search, sharpness_search_with, SearchOptions, SharpnessResult};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{Grid, GridFn};
use crate::ineq::BOUNDARY_TOL;

/// A sampled test function with a stable identifier used in certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusFn {
    pub id: String,
    pub u: GridFn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusKind {
    /// `(t - a)^mu` for each exponent.
    Powers(Vec<f64>),
    /// `count` polynomials `(t - a) q(t)` of total degree `degree`.
    Polynomials {
        degree: usize,
        count: usize,
        seed: u64,
    },
    Expressions(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub grid: Grid,
    pub vanish_at_a: bool,
}

/// Coefficients in `[-1, 1]` of `count` polynomials of the given degree,
/// drawn from a ChaCha8 stream seeded with `seed`.
pub fn polynomial_coefficients(degree: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..degree).map(|_| rng.random_range(-1.0..=1.0)).collect()).collect()
}

/// `u(t) = (t - a) * sum_k c_k x^k` with `x = (t - a) / (b - a)`, so `u(a) = 0`
/// exactly and the total degree is `c.len()`.
pub fn vanishing_polynomial(grid: &Grid, coeffs: &[f64]) -> GridFn {
    let (a, len) = (grid.a(), grid.b() - grid.a());
    let mut u = grid.sample(|t| {
        let x = (t - a) / len;
        (t - a) * coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    });
    u.samples_mut()[0] = 0.0;
    u
}

fn fmt_coeffs(c: &[f64]) -> String {
    c.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(",")
}

pub(crate) fn polynomial_id(coeffs: &[f64]) -> String {
    format!("poly[{}]", fmt_coeffs(coeffs))
}

/// Sample the corpus described by `spec`. Output order follows the listed powers or
/// expressions (or generation order for polynomials) and is deterministic.
pub fn generate(spec: &CorpusSpec) -> Result<Vec<CorpusFn>> {
    generate_with(spec, Exec::default())
}

pub fn generate_with(spec: &CorpusSpec, exec: Exec) -> Result<Vec<CorpusFn>> {
    let grid = &spec.grid;
    let a = grid.a();
    match &spec.kind {
        CorpusKind::Powers(mus) => {
            if let Some(mu) = mus.iter().find(|&&mu| !mu.is_finite() || (spec.vanish_at_a && mu <= 0.0) || mu < 0.0) {
                return Err(Error::domain(format!(
                    "power exponent must be {}, got {mu}",
                    if spec.vanish_at_a { "> 0" } else { ">= 0" }
                )));
            }
            Ok(exec.map(mus, |&mu| {
                let mut u = grid.sample(|t| (t - a).powf(mu));
                if mu > 0.0 {
                    u.samples_mut()[0] = 0.0;
                }
                CorpusFn { id: format!("pow:{mu}"), u }
            }))
        }
        CorpusKind::Polynomials { degree, count, seed } => {
            if *degree == 0 {
                return Err(Error::domain("polynomial degree must be >= 1"));
            }
            let coeffs = polynomial_coefficients(*degree - 1, *count, *seed);
            let idx: Vec<usize> = (0..*count).collect();
            Ok(exec.map(&idx, |&k| CorpusFn {
                id: format!("poly:{degree},{seed}#{k}"),
                u: vanishing_polynomial(grid, &coeffs[k]),
            }))
        }
        CorpusKind::Expressions(texts) => {
            let parsed = texts.iter().map(|s| parse_expr(s)).collect::<Result<Vec<_>>>()?;
            let fns = exec.map(&parsed, |ast| grid.try_sample(|t| eval_expr(ast, t)));
            texts
                .iter()
                .zip(fns)
                .map(|(text, u)| {
                    let u = u?;
                    let u = if spec.vanish_at_a {
                        GridFn::vanishing_at_a(grid.clone(), u.into_samples(), BOUNDARY_TOL)?
                    } else {
                        u
                    };
                    Ok(CorpusFn { id: text.clone(), u })
                })
                .collect()
        }
    }
}
