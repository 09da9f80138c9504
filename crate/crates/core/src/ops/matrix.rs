use serde::{Deserialize, Serialize};

use super::weights::{pow_diff1, pow_diff2};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{Grid, GridFn};
use crate::special::gamma_unchecked;

/// Which fractional operator an [`OperatorMatrix`] realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    RlIntegral,
    RlDerivative,
    Caputo,
    HadamardIntegral,
    HadamardDerivative,
    RightRlDerivative,
}

impl OperatorKind {
    pub fn is_derivative(self) -> bool {
        !matches!(self, OperatorKind::RlIntegral | OperatorKind::HadamardIntegral)
    }
}

/// Fractional order. Integrals accept any `alpha > 0`; derivatives `0 < alpha <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn integral(alpha: f64) -> Result<FracOrder> {
        if alpha > 0.0 && alpha.is_finite() {
            Ok(FracOrder(alpha))
        } else {
            Err(Error::domain(format!("integral order must be > 0, got {alpha}")))
        }
    }

    pub fn derivative(alpha: f64) -> Result<FracOrder> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(FracOrder(alpha))
        } else {
            Err(Error::domain(format!("derivative order must lie in (0, 1], got {alpha}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// One sparse row: weights for columns `start..start + w.len()`.
#[derive(Debug, Clone, PartialEq)]
struct Row {
    start: usize,
    w: Vec<f64>,
}

impl Row {
    fn dot(&self, u: &[f64]) -> f64 {
        self.w.iter().zip(&u[self.start..]).map(|(w, u)| w * u).sum()
    }
}

/// Quadrature weight matrix realizing a fractional operator on a grid.
///
/// Left-sided fractional kinds are lower triangular. The classical `alpha = 1`
/// derivative is a banded finite-difference stencil. Right-sided kinds are stored
/// as the left-sided matrix of the reflected problem and applied as
/// reverse / apply / reverse.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    grid: Grid,
    order: f64,
    kind: OperatorKind,
    reflected: bool,
    rows: Vec<Row>,
}

impl OperatorMatrix {
    /// Product-trapezoid weights for `I^alpha_{a+}`: the piecewise-linear
    /// interpolant of `u` is integrated exactly against `(t - s)^(alpha - 1)`.
    pub fn rl_integral(grid: &Grid, alpha: f64) -> Result<OperatorMatrix> {
        let alpha = FracOrder::integral(alpha)?.value();
        let n = grid.n();
        let s = alpha + 1.0;
        let scale = grid.h().powf(alpha) / gamma_unchecked(alpha + 2.0);
        let interior: Vec<f64> = (0..n).map(|k| if k == 0 { 0.0 } else { scale * pow_diff2(s, k) }).collect();
        let mut rows = Vec::with_capacity(n + 1);
        rows.push(Row { start: 0, w: vec![0.0] });
        for m in 1..=n {
            let mf = m as f64;
            let mut w = Vec::with_capacity(m + 1);
            // (m-1)^(a+1) - (m-1-a) m^a, written to limit cancellation
            let first = mf.powf(alpha) * ((mf - 1.0) * (alpha * (-1.0 / mf).ln_1p()).exp_m1() + alpha);
            w.push(scale * first);
            for j in 1..m {
                w.push(interior[m - j]);
            }
            w.push(scale);
            rows.push(Row { start: 0, w });
        }
        Ok(OperatorMatrix { grid: grid.clone(), order: alpha, kind: OperatorKind::RlIntegral, reflected: false, rows })
    }

    /// Classical L1 weights for the Caputo derivative, valid for `0 < alpha <= 1`.
    ///
    /// At `alpha = 1` this degenerates to backward differences; use
    /// [`OperatorMatrix::caputo`] for the routed central-difference variant.
    pub fn caputo_l1(grid: &Grid, alpha: f64) -> Result<OperatorMatrix> {
        let alpha = FracOrder::derivative(alpha)?.value();
        let n = grid.n();
        let sigma = 1.0 - alpha;
        let scale = grid.h().powf(-alpha) / gamma_unchecked(2.0 - alpha);
        // b_k = (k+1)^sigma - k^sigma; coefficient of u_{m-k} is b_k - b_{k-1}
        let b: Vec<f64> = (0..n).map(|k| pow_diff1(sigma, k)).collect();
        let d: Vec<f64> = (0..n).map(|k| if k == 0 { 0.0 } else { scale * pow_diff2(sigma, k) }).collect();
        let mut rows = Vec::with_capacity(n + 1);
        rows.push(Row { start: 0, w: vec![0.0] });
        for m in 1..=n {
            let mut w = Vec::with_capacity(m + 1);
            w.push(-scale * b[m - 1]);
            for j in 1..m {
                w.push(d[m - j]);
            }
            w.push(scale * b[0]);
            rows.push(Row { start: 0, w });
        }
        Ok(OperatorMatrix { grid: grid.clone(), order: alpha, kind: OperatorKind::Caputo, reflected: false, rows })
    }

    /// Caputo derivative: L1 weights for `alpha < 1`, second-order finite
    /// differences (central inside, one-sided at the ends) for `alpha = 1`.
    pub fn caputo(grid: &Grid, alpha: f64) -> Result<OperatorMatrix> {
        let alpha = FracOrder::derivative(alpha)?.value();
        if alpha < 1.0 {
            return OperatorMatrix::caputo_l1(grid, alpha);
        }
        Ok(OperatorMatrix {
            grid: grid.clone(),
            order: 1.0,
            kind: OperatorKind::Caputo,
            reflected: false,
            rows: first_derivative_rows(grid),
        })
    }

    /// Riemann-Liouville derivative as a matrix: the Caputo weights plus the
    /// boundary term `u(a) (t - a)^(-alpha) / Gamma(1 - alpha)` in column 0.
    /// At `t = a` the boundary term is replaced by its mean over the first cell.
    pub fn rl_derivative(grid: &Grid, alpha: f64) -> Result<OperatorMatrix> {
        let mut m = OperatorMatrix::caputo(grid, alpha)?;
        m.kind = OperatorKind::RlDerivative;
        if alpha < 1.0 {
            let bt = boundary_term(grid, alpha);
            for (row, g) in m.rows.iter_mut().zip(bt) {
                debug_assert_eq!(row.start, 0);
                row.w[0] += g;
            }
        }
        Ok(m)
    }

    /// `D^alpha_{b-}` by reflection of the left Riemann-Liouville derivative.
    pub fn right_rl_derivative(grid: &Grid, alpha: f64) -> Result<OperatorMatrix> {
        let mut m = OperatorMatrix::rl_derivative(&grid.reflected(), alpha)?;
        m.kind = OperatorKind::RightRlDerivative;
        m.reflected = true;
        Ok(m)
    }

    pub(crate) fn with_kind(mut self, kind: OperatorKind) -> OperatorMatrix {
        self.kind = kind;
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Matrix entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let n = self.grid.n();
        let (i, j) = if self.reflected { (n - i, n - j) } else { (i, j) };
        let row = &self.rows[i];
        if j < row.start {
            return 0.0;
        }
        row.w.get(j - row.start).copied().unwrap_or(0.0)
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n1 = self.dim();
        (0..n1).map(|i| (0..n1).map(|j| self.entry(i, j)).collect()).collect()
    }

    pub fn apply(&self, u: &GridFn) -> Result<GridFn> {
        self.apply_with(u, Exec::default())
    }

    pub fn apply_with(&self, u: &GridFn, exec: Exec) -> Result<GridFn> {
        if u.grid() != &self.grid {
            return Err(Error::domain("operator and function live on different grids"));
        }
        let out = self.apply_slice(u.samples(), exec);
        GridFn::new(self.grid.clone(), out)
    }

    pub(crate) fn apply_slice(&self, u: &[f64], exec: Exec) -> Vec<f64> {
        debug_assert_eq!(u.len(), self.rows.len());
        let mut out = vec![0.0; u.len()];
        if self.reflected {
            let rev: Vec<f64> = u.iter().rev().copied().collect();
            exec.fill(&mut out, |i| self.rows[i].dot(&rev));
            out.reverse();
        } else {
            exec.fill(&mut out, |i| self.rows[i].dot(u));
        }
        out
    }
}

/// `(t_i - a)^(-alpha) / Gamma(1 - alpha)` at nodes `i >= 1`, first-cell mean at `i = 0`.
pub(crate) fn boundary_term(grid: &Grid, alpha: f64) -> Vec<f64> {
    let g1 = gamma_unchecked(1.0 - alpha);
    let g2 = gamma_unchecked(2.0 - alpha);
    let a = grid.a();
    grid.nodes()
        .iter()
        .enumerate()
        .map(|(i, &t)| if i == 0 { grid.h().powf(-alpha) / g2 } else { (t - a).powf(-alpha) / g1 })
        .collect()
}

fn first_derivative_rows(grid: &Grid) -> Vec<Row> {
    let n = grid.n();
    let inv2h = 0.5 / grid.h();
    let mut rows = Vec::with_capacity(n + 1);
    rows.push(Row { start: 0, w: vec![-3.0 * inv2h, 4.0 * inv2h, -inv2h] });
    for i in 1..n {
        rows.push(Row { start: i - 1, w: vec![-inv2h, 0.0, inv2h] });
    }
    rows.push(Row { start: n - 2, w: vec![inv2h, -4.0 * inv2h, 3.0 * inv2h] });
    rows
}
