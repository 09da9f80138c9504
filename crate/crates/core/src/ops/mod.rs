//! Fractional operators on grid functions.
//!
//! All left-sided operators are discretized by product integration with exact
//! kernel moments: the Riemann-Liouville integral integrates the
//! piecewise-linear interpolant of `u`, the Caputo derivative is the classical
//! L1 scheme (`I^(1-alpha)` applied to per-cell difference quotients). Orders
//! `alpha = 1` route to classical finite differences. Left-sided outputs at
//! `t = a` are 0 (integral over an empty interval, or the first-cell limit of
//! the L1 derivative).

mod hadamard;
mod matrix;
mod reference;
mod weights;

pub use hadamard::{hadamard_integral_direct, HadamardOperator, LogGrid, UnitOrder};
pub use matrix::{FracOrder, OperatorKind, OperatorMatrix};
pub use reference::{adaptive, reference_hadamard_integral, reference_integral};

use crate::error::Result;
use crate::exec::Exec;
use crate::grid::GridFn;

/// `I^alpha_{a+} u` at every node.
pub fn rl_integral(u: &GridFn, alpha: f64) -> Result<GridFn> {
    OperatorMatrix::rl_integral(u.grid(), alpha)?.apply(u)
}

/// Caputo derivative `d^alpha_{a+} u`, `0 < alpha <= 1`.
pub fn caputo_derivative(u: &GridFn, alpha: f64) -> Result<GridFn> {
    OperatorMatrix::caputo(u.grid(), alpha)?.apply(u)
}

/// Riemann-Liouville derivative `D^alpha_{a+} u = d^alpha (u - u(a)) + u(a) (t-a)^(-alpha) / Gamma(1-alpha)`.
///
/// On data with `u(a) = 0` the result is bit-identical to [`caputo_derivative`].
pub fn rl_derivative(u: &GridFn, alpha: f64) -> Result<GridFn> {
    let mut out = caputo_derivative(u, alpha)?;
    let ua = u.at_a();
    if ua != 0.0 && alpha < 1.0 {
        let bt = matrix::boundary_term(u.grid(), alpha);
        for (o, g) in out.samples_mut().iter_mut().zip(bt) {
            *o += ua * g;
        }
    }
    Ok(out)
}

/// Right Riemann-Liouville derivative
/// `D^alpha_{b-} f(t) = -(d/dt) 1/Gamma(1-alpha) int_t^b (s-t)^(-alpha) f(s) ds`,
/// evaluated as the left derivative of the reflected function, reflected back.
/// The reflection `t -> a + b - t` flips `d/dt`, so `alpha = 1` yields `-u'`.
pub fn right_rl_derivative(u: &GridFn, alpha: f64) -> Result<GridFn> {
    let reflected = reflect(u);
    let left = rl_derivative(&reflected, alpha)?;
    Ok(reflect(&left))
}

/// `t -> a + b - t` on samples.
pub fn reflect(u: &GridFn) -> GridFn {
    let samples: Vec<f64> = u.samples().iter().rev().copied().collect();
    GridFn::new(u.grid().reflected(), samples).expect("same length")
}

/// Hadamard integral `J^alpha_{a+} u` (requires `a > 0`).
pub fn hadamard_integral(u: &GridFn, alpha: f64) -> Result<GridFn> {
    HadamardOperator::integral(u.grid(), alpha)?.apply(u, Exec::default())
}

/// Hadamard derivative `D^alpha_{a+} u` (requires `a > 0`).
pub fn hadamard_derivative(u: &GridFn, alpha: f64, unit: UnitOrder) -> Result<GridFn> {
    HadamardOperator::derivative(u.grid(), alpha, unit)?.apply(u, Exec::default())
}

/// `d^alpha_{a+} d^beta_{a+} u`: the inner derivative of order `beta` first.
/// No order-addition shortcut; the composition is not commutative in general.
pub fn sequential_caputo(u: &GridFn, alpha: f64, beta: f64) -> Result<GridFn> {
    let outer = OperatorMatrix::caputo(u.grid(), alpha)?;
    let inner = caputo_derivative(u, beta)?;
    outer.apply(&inner)
}
