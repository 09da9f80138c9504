//! Hadamard operators via the substitution `tau = log(t / a)`, which maps
//! `J^alpha_{a+}` onto `I^alpha_{0+}` and `D^alpha_{a+}` onto the Caputo
//! derivative in `tau`.

use super::matrix::{OperatorKind, OperatorMatrix};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{Grid, GridFn};
use crate::special::{gamma_unchecked, lower_incomplete_gamma};

/// Companion grid, uniform in `tau = log(t / a)` on `[0, log(b / a)]`, with the
/// same number of cells as the `t` grid it accompanies.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGrid {
    a: f64,
    tau: Grid,
    t_nodes: Vec<f64>,
}

impl LogGrid {
    pub fn new(a: f64, b: f64, n: usize) -> Result<LogGrid> {
        if !(a > 0.0) {
            return Err(Error::domain(format!("Hadamard operators require a > 0, got a={a}")));
        }
        if !(a < b) {
            return Err(Error::domain(format!("grid requires a < b, got a={a}, b={b}")));
        }
        let tau = Grid::uniform(0.0, (b / a).ln(), n)?;
        let mut t_nodes: Vec<f64> = tau.nodes().iter().map(|&s| a * s.exp()).collect();
        t_nodes[0] = a;
        t_nodes[n] = b;
        Ok(LogGrid { a, tau, t_nodes })
    }

    pub fn companion(grid: &Grid) -> Result<LogGrid> {
        LogGrid::new(grid.a(), grid.b(), grid.n())
    }

    pub fn tau_grid(&self) -> &Grid {
        &self.tau
    }

    /// Nodes `a exp(tau_k)` in the original variable.
    pub fn t_nodes(&self) -> &[f64] {
        &self.t_nodes
    }

    /// Sample `f(t)` at the companion nodes; the result lives on the `tau` grid.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> GridFn {
        let samples = self.t_nodes.iter().map(|&t| f(t)).collect();
        GridFn::new(self.tau.clone(), samples).expect("one sample per node")
    }

    /// Linear resampling of a `t`-grid function onto the companion nodes.
    pub fn to_companion(&self, u: &GridFn) -> GridFn {
        self.sample(|t| u.interpolate(t))
    }

    /// Linear resampling (in `tau`) of a companion function back onto `target`.
    pub fn from_companion(&self, v: &GridFn, target: &Grid) -> GridFn {
        let mut out = target.sample(|t| v.interpolate((t / self.a).ln()));
        let vs = v.samples();
        let s = out.samples_mut();
        let n = s.len() - 1;
        // endpoints correspond exactly
        s[0] = vs[0];
        s[n] = vs[vs.len() - 1];
        out
    }
}

/// Whether a Hadamard derivative accepts `alpha = 1`, where it is `t u'(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitOrder {
    #[default]
    Reject,
    Limit,
}

/// A Hadamard operator assembled once for a `t` grid and reusable across functions.
#[derive(Debug, Clone)]
pub struct HadamardOperator {
    log_grid: LogGrid,
    matrix: OperatorMatrix,
}

impl HadamardOperator {
    pub fn integral(grid: &Grid, alpha: f64) -> Result<HadamardOperator> {
        let log_grid = LogGrid::companion(grid)?;
        let matrix = OperatorMatrix::rl_integral(log_grid.tau_grid(), alpha)?.with_kind(OperatorKind::HadamardIntegral);
        Ok(HadamardOperator { log_grid, matrix })
    }

    pub fn derivative(grid: &Grid, alpha: f64, unit: UnitOrder) -> Result<HadamardOperator> {
        let ok = match unit {
            UnitOrder::Reject => alpha > 0.0 && alpha < 1.0,
            UnitOrder::Limit => alpha > 0.0 && alpha <= 1.0,
        };
        if !ok {
            return Err(Error::domain(format!("Hadamard derivative order must lie in (0, 1), got {alpha}")));
        }
        let log_grid = LogGrid::companion(grid)?;
        let matrix = OperatorMatrix::caputo(log_grid.tau_grid(), alpha)?.with_kind(OperatorKind::HadamardDerivative);
        Ok(HadamardOperator { log_grid, matrix })
    }

    pub fn log_grid(&self) -> &LogGrid {
        &self.log_grid
    }

    /// The operator matrix acting on companion (`tau` grid) samples.
    pub fn companion_matrix(&self) -> &OperatorMatrix {
        &self.matrix
    }

    /// Apply to a function already sampled on the companion grid.
    pub fn apply_companion(&self, v: &GridFn, exec: Exec) -> Result<GridFn> {
        self.matrix.apply_with(v, exec)
    }

    /// Apply to a `t`-grid function: resample, apply in `tau`, resample back.
    pub fn apply(&self, u: &GridFn, exec: Exec) -> Result<GridFn> {
        if u.grid().a() != self.log_grid.a || u.grid().n() != self.log_grid.tau.n() {
            return Err(Error::domain("function grid does not match the operator's grid"));
        }
        let v = self.log_grid.to_companion(u);
        let w = self.matrix.apply_with(&v, exec)?;
        Ok(self.log_grid.from_companion(&w, u.grid()))
    }
}

/// Direct product integration of `J^alpha_{a+}` in the original variable on an
/// arbitrary increasing node set with `nodes[0] = a > 0`.
///
/// `u` is interpolated piecewise-linearly in `t`; the kernel moments
/// `int (log(t/s))^(alpha-1) ds/s` and `int (log(t/s))^(alpha-1) ds` are taken in
/// closed form (the latter through the lower incomplete gamma function).
pub fn hadamard_integral_direct(nodes: &[f64], samples: &[f64], alpha: f64) -> Result<Vec<f64>> {
    if nodes.len() != samples.len() || nodes.len() < 2 {
        return Err(Error::domain("need matching nodes and samples, at least two"));
    }
    if !(nodes[0] > 0.0) {
        return Err(Error::domain("Hadamard operators require a > 0"));
    }
    if !(alpha > 0.0) {
        return Err(Error::domain(format!("integral order must be > 0, got {alpha}")));
    }
    let g = gamma_unchecked(alpha);
    let mut out = vec![0.0; nodes.len()];
    let mut v = vec![0.0; nodes.len()];
    let mut vpow = vec![0.0; nodes.len()];
    let mut lig = vec![0.0; nodes.len()];
    for i in 1..nodes.len() {
        let t = nodes[i];
        for j in 0..=i {
            v[j] = if j == i { 0.0 } else { (t / nodes[j]).ln() };
            vpow[j] = v[j].powf(alpha);
            lig[j] = lower_incomplete_gamma(alpha, v[j]);
        }
        let mut acc = 0.0;
        for j in 0..i {
            let m0 = (vpow[j] - vpow[j + 1]) / alpha;
            let m1 = t * (lig[j] - lig[j + 1]);
            let slope = (samples[j + 1] - samples[j]) / (nodes[j + 1] - nodes[j]);
            acc += samples[j] * m0 + slope * (m1 - nodes[j] * m0);
        }
        out[i] = acc / g;
    }
    Ok(out)
}
