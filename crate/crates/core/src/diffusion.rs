//! Space-fractional diffusion `u_t + D^alpha_{b-} d^alpha_{a+} u = 0` with
//! `u(a) = 0`, discretized variationally, and a check of its energy decay.
//!
//! With `D` the L1 Caputo matrix and `Q` the trapezoid weights, the stiffness
//! matrix is `K = D^T Q D` restricted to the unknowns `u_1, ..., u_n`, so that
//! `u^T K u` is the discrete `||d^alpha u||_2^2` exactly. Time stepping is
//! implicit Euler with the trapezoid mass diagonal `M`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{Grid, GridFn};
use crate::ops::OperatorMatrix;
use crate::special::gamma_unchecked;

/// Stiffness and mass for the unknowns `u_1..u_n` (node 0 is pinned to zero).
#[derive(Debug, Clone, PartialEq)]
pub struct Stiffness {
    grid: Grid,
    k: DMatrix<f64>,
    mass: DVector<f64>,
}

fn check_order(alpha: f64) -> Result<()> {
    if alpha > 0.5 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("diffusion order must lie in (1/2, 1], got {alpha}")))
    }
}

/// `K_jl = sum_i q_i D_ij D_il`, computed on the upper triangle and mirrored.
fn gram(grid: &Grid, d: impl Fn(usize, usize) -> f64, bandwidth: Option<usize>) -> Stiffness {
    let n = grid.n();
    let q = grid.trapezoid_weights();
    let mut k = DMatrix::zeros(n, n);
    for j in 1..=n {
        for l in j..=n {
            if bandwidth.is_some_and(|w| l - j > w) {
                break;
            }
            let start = l;
            let end = bandwidth.map_or(n, |w| (j + w).min(n));
            let mut acc = 0.0;
            for (i, &w) in q.iter().enumerate().take(end + 1).skip(start) {
                acc += w * d(i, j) * d(i, l);
            }
            k[(j - 1, l - 1)] = acc;
            k[(l - 1, j - 1)] = acc;
        }
    }
    let mass = DVector::from_iterator(n, q[1..].iter().copied());
    Stiffness { grid: grid.clone(), k, mass }
}

/// Variational stiffness from the L1 Caputo matrix. At `alpha = 1` the L1
/// weights are backward differences.
pub fn assemble_stiffness(grid: &Grid, alpha: f64) -> Result<Stiffness> {
    check_order(alpha)?;
    let d = OperatorMatrix::caputo_l1(grid, alpha)?;
    Ok(gram(grid, |i, j| d.entry(i, j), None))
}

/// The classical heat-equation stiffness `sum_i q_i ((u_i - u_(i-1)) / h)^2`,
/// assembled directly as a tridiagonal matrix.
pub fn assemble_classical_stiffness(grid: &Grid) -> Stiffness {
    let inv_h = 1.0 / grid.h();
    let d = |i: usize, j: usize| {
        if j == i {
            inv_h
        } else if j + 1 == i {
            -inv_h
        } else {
            0.0
        }
    };
    gram(grid, d, Some(1))
}

impl Stiffness {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `n x n` stiffness over the unknowns `u_1..u_n`.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.k
    }

    /// Trapezoid weights of the unknowns.
    pub fn mass(&self) -> &DVector<f64> {
        &self.mass
    }

    fn unknowns(&self, u: &GridFn) -> Result<DVector<f64>> {
        if u.grid() != &self.grid {
            return Err(Error::domain("function is not sampled on the stiffness grid"));
        }
        Ok(DVector::from_column_slice(&u.samples()[1..]))
    }

    fn to_grid_fn(&self, x: &DVector<f64>) -> GridFn {
        let mut samples = Vec::with_capacity(x.len() + 1);
        samples.push(0.0);
        samples.extend(x.iter().copied());
        GridFn::new(self.grid.clone(), samples).expect("one sample per node")
    }

    /// `u^T K u` over the unknowns.
    pub fn quadratic_form(&self, u: &GridFn) -> Result<f64> {
        let x = self.unknowns(u)?;
        Ok(x.dot(&(&self.k * &x)))
    }

    /// `K u` as a grid function with zero at `a`.
    pub fn apply(&self, u: &GridFn) -> Result<GridFn> {
        let x = self.unknowns(u)?;
        Ok(self.to_grid_fn(&(&self.k * x)))
    }

    /// Discrete `||u||_2^2` with the trapezoid weights (`u(a)` contributes nothing).
    pub fn energy(&self, u: &GridFn) -> Result<f64> {
        let x = self.unknowns(u)?;
        Ok(x.iter().zip(self.mass.iter()).map(|(v, m)| m * v * v).sum())
    }
}

/// Implicit Euler with a fixed step: `(M + dt K)` is factored once.
#[derive(Debug, Clone)]
pub struct ImplicitEuler<'a> {
    stiffness: &'a Stiffness,
    factor: Cholesky<f64, Dyn>,
    dt: f64,
}

impl<'a> ImplicitEuler<'a> {
    pub fn new(stiffness: &'a Stiffness, dt: f64) -> Result<ImplicitEuler<'a>> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::domain(format!("time step must be positive, got {dt}")));
        }
        let mut a = stiffness.k.scale(dt);
        for (i, m) in stiffness.mass.iter().enumerate() {
            a[(i, i)] += m;
        }
        let factor = a.cholesky().ok_or_else(|| Error::Solve("M + dt K is not positive definite".into()))?;
        Ok(ImplicitEuler { stiffness, factor, dt })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&self, u: &GridFn) -> Result<GridFn> {
        let x = self.stiffness.unknowns(u)?;
        let rhs = x.component_mul(&self.stiffness.mass);
        let next = self.factor.solve(&rhs);
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Solve("non-finite solution".into()));
        }
        Ok(self.stiffness.to_grid_fn(&next))
    }
}

/// One implicit Euler step `(M + dt K) u_new = M u`.
pub fn step(u: &GridFn, stiffness: &Stiffness, dt: f64) -> Result<GridFn> {
    ImplicitEuler::new(stiffness, dt)?.step(u)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionProblem {
    pub grid: Grid,
    pub alpha: f64,
    pub u0: GridFn,
    pub t_final: f64,
    pub dt: f64,
}

impl DiffusionProblem {
    pub fn validate(&self) -> Result<()> {
        check_order(self.alpha)?;
        if self.u0.grid() != &self.grid {
            return Err(Error::domain("initial data is not sampled on the problem grid"));
        }
        if self.u0.at_a() != 0.0 {
            return Err(Error::Hypothesis(format!("u0(a) = {:e}, must be exactly zero", self.u0.at_a())));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::domain(format!("time step must be positive, got {}", self.dt)));
        }
        if !(self.t_final >= self.dt && self.t_final.is_finite()) {
            return Err(Error::domain(format!("final time {} must be at least dt = {}", self.t_final, self.dt)));
        }
        Ok(())
    }

    /// `(2 alpha - 1) Gamma(alpha)^2 / (b - a)^(2 alpha)`.
    pub fn lambda(&self) -> f64 {
        decay_rate(&self.grid, self.alpha)
    }
}

pub fn decay_rate(grid: &Grid, alpha: f64) -> f64 {
    let g = gamma_unchecked(alpha);
    (2.0 * alpha - 1.0) * g * g / (grid.b() - grid.a()).powf(2.0 * alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyTrace {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub lambda: f64,
}

impl EnergyTrace {
    /// `I(0) exp(-2 lambda t)` at each recorded time.
    pub fn bound(&self) -> Vec<f64> {
        let i0 = self.energy.first().copied().unwrap_or(0.0);
        self.times.iter().map(|t| i0 * (-2.0 * self.lambda * t).exp()).collect()
    }
}

/// Integrate to `t_final` with steps of `dt` (the last one shortened if `dt`
/// does not divide `t_final`), recording `I(t_k)` after every step.
pub fn run(problem: &DiffusionProblem) -> Result<EnergyTrace> {
    problem.validate()?;
    let stiffness = assemble_stiffness(&problem.grid, problem.alpha)?;
    run_with(problem, &stiffness)
}

/// [`run`] with a pre-assembled stiffness matrix.
pub fn run_with(problem: &DiffusionProblem, stiffness: &Stiffness) -> Result<EnergyTrace> {
    problem.validate()?;
    let (t_final, dt) = (problem.t_final, problem.dt);
    let full = ((t_final / dt) * (1.0 + 1e-12)).floor() as usize;
    let rest = t_final - full as f64 * dt;
    let mut times = vec![0.0];
    let mut energy = vec![stiffness.energy(&problem.u0)?];
    let stepper = ImplicitEuler::new(stiffness, dt)?;
    let mut u = problem.u0.clone();
    for k in 1..=full {
        u = stepper.step(&u)?;
        times.push(k as f64 * dt);
        energy.push(stiffness.energy(&u)?);
    }
    if rest > 1e-12 * t_final {
        u = step(&u, stiffness, rest)?;
        times.push(t_final);
        energy.push(stiffness.energy(&u)?);
    }
    Ok(EnergyTrace { times, energy, lambda: problem.lambda() })
}

/// Independent runs, possibly concurrent; results keep the input order.
pub fn run_many(problems: &[DiffusionProblem], exec: Exec) -> Vec<Result<EnergyTrace>> {
    exec.map(problems, run)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AprioriReport {
    /// Indices `k` with `I_k > I_(k-1) (1 + slack)`.
    pub monotone_violations: Vec<usize>,
    /// Largest `(I_k - I_(k-1)) / I_(k-1)` over the trace (0 if never increasing).
    pub max_increase: f64,
    /// Indices `k` with `I_k > I_0 exp(-2 lambda t_k) (1 + tol_exp)`.
    pub bound_violations: Vec<usize>,
    /// Largest `I_k / (I_0 exp(-2 lambda t_k)) - 1` over the trace.
    pub max_bound_excess: f64,
}

impl AprioriReport {
    pub fn monotone(&self) -> bool {
        self.monotone_violations.is_empty()
    }

    pub fn bound_holds(&self) -> bool {
        self.bound_violations.is_empty()
    }
}

pub const MONOTONE_SLACK: f64 = 1e-12;
pub const EXP_TOL: f64 = 0.05;

/// Check non-increase of `I` and the exponential bound with the default slacks.
pub fn check_apriori(trace: &EnergyTrace) -> AprioriReport {
    check_apriori_with(trace, MONOTONE_SLACK, EXP_TOL)
}

pub fn check_apriori_with(trace: &EnergyTrace, slack: f64, tol_exp: f64) -> AprioriReport {
    let e = &trace.energy;
    let mut monotone_violations = Vec::new();
    let mut max_increase = 0.0f64;
    for k in 1..e.len() {
        if e[k] > e[k - 1] * (1.0 + slack) {
            monotone_violations.push(k);
        }
        if e[k] > e[k - 1] {
            let rel = if e[k - 1] > 0.0 { (e[k] - e[k - 1]) / e[k - 1] } else { f64::INFINITY };
            max_increase = max_increase.max(rel);
        }
    }
    let mut bound_violations = Vec::new();
    let mut max_bound_excess = f64::NEG_INFINITY;
    for (k, (&ek, bk)) in e.iter().zip(trace.bound()).enumerate() {
        let excess = if bk > 0.0 {
            ek / bk - 1.0
        } else if ek > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        max_bound_excess = max_bound_excess.max(excess);
        if ek > bk * (1.0 + tol_exp) {
            bound_violations.push(k);
        }
    }
    AprioriReport { monotone_violations, max_increase, bound_violations, max_bound_excess }
}
