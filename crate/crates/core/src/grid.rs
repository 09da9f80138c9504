//! Uniform grids on `[a, b]`, sampled functions and discrete norms.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Uniform partition `a = t_0 < t_1 < ... < t_n = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    nodes: Arc<[f64]>,
}

/// `uniform_grid(a, b, n)`: `n` subintervals of width `(b - a) / n`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Result<Grid> {
    Grid::uniform(a, b, n)
}

impl Grid {
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Grid> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::domain("grid endpoints must be finite"));
        }
        if a >= b {
            return Err(Error::domain(format!("grid requires a < b, got a={a}, b={b}")));
        }
        if n < 2 {
            return Err(Error::domain(format!("grid requires n >= 2, got {n}")));
        }
        let h = (b - a) / n as f64;
        let mut nodes: Vec<f64> = (0..=n).map(|i| a + i as f64 * h).collect();
        nodes[n] = b;
        Grid::from_nodes(a, b, nodes)
    }

    fn from_nodes(a: f64, b: f64, nodes: Vec<f64>) -> Result<Grid> {
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("grid nodes are not strictly increasing"));
        }
        Ok(Grid { a, b, nodes: nodes.into() })
    }

    /// Halve every cell. Even-indexed nodes of the result are the nodes of `self`.
    pub fn refine(&self) -> Grid {
        let n = self.n();
        let mut nodes = Vec::with_capacity(2 * n + 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(self.b);
        Grid { a: self.a, b: self.b, nodes: nodes.into() }
    }

    /// Every other node; `None` when `n` is odd or the result would have fewer than 2 cells.
    pub fn coarsen(&self) -> Option<Grid> {
        let n = self.n();
        if !n.is_multiple_of(2) || n < 4 {
            return None;
        }
        let nodes: Vec<f64> = self.nodes.iter().step_by(2).copied().collect();
        Some(Grid { a: self.a, b: self.b, nodes: nodes.into() })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of subintervals.
    pub fn n(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n() as f64
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// The same partition traversed from `b` to `a`, expressed on `[a, b]` via
    /// `t -> a + b - t`. Uniform grids are invariant under this map up to rounding,
    /// so the reflected grid reuses the node set.
    pub fn reflected(&self) -> Grid {
        self.clone()
    }

    /// Sample `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> GridFn {
        GridFn { grid: self.clone(), samples: self.nodes.iter().map(|&t| f(t)).collect() }
    }

    /// Sample a fallible function at every node.
    pub fn try_sample<E>(&self, f: impl Fn(f64) -> std::result::Result<f64, E>) -> std::result::Result<GridFn, E> {
        let samples = self.nodes.iter().map(|&t| f(t)).collect::<std::result::Result<Vec<_>, E>>()?;
        Ok(GridFn { grid: self.clone(), samples })
    }

    /// Composite trapezoid weights.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let h = self.h();
        let mut w = vec![h; self.len()];
        w[0] = 0.5 * h;
        w[self.n()] = 0.5 * h;
        w
    }

    /// Index `j` of the cell `[t_j, t_{j+1}]` containing `t` (clamped to the grid).
    pub fn locate(&self, t: f64) -> usize {
        let n = self.n();
        if t <= self.a {
            return 0;
        }
        if t >= self.b {
            return n - 1;
        }
        let j = ((t - self.a) / self.h()).floor() as usize;
        let mut j = j.min(n - 1);
        // correct for rounding in the division
        while j > 0 && t < self.nodes[j] {
            j -= 1;
        }
        while j + 1 < n && t >= self.nodes[j + 1] {
            j += 1;
        }
        j
    }
}

/// Real-valued function sampled on the nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    grid: Grid,
    samples: Vec<f64>,
}

impl GridFn {
    pub fn new(grid: Grid, samples: Vec<f64>) -> Result<GridFn> {
        if samples.len() != grid.len() {
            return Err(Error::domain(format!("expected {} samples, got {}", grid.len(), samples.len())));
        }
        Ok(GridFn { grid, samples })
    }

    /// Samples with `u(a)` forced to exactly zero; fails if `|u(a)| > tol`.
    pub fn vanishing_at_a(grid: Grid, mut samples: Vec<f64>, tol: f64) -> Result<GridFn> {
        if samples.first().is_some_and(|u0| u0.abs() > tol) {
            return Err(Error::Hypothesis(format!("|u(a)| = {:e} exceeds {tol:e}", samples[0].abs())));
        }
        if let Some(u0) = samples.first_mut() {
            *u0 = 0.0;
        }
        GridFn::new(grid, samples)
    }

    pub fn zeros(grid: &Grid) -> GridFn {
        GridFn { grid: grid.clone(), samples: vec![0.0; grid.len()] }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub(crate) fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn at_a(&self) -> f64 {
        self.samples[0]
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> GridFn {
        let samples = self.grid.nodes().iter().zip(&self.samples).map(|(&t, &u)| f(t, u)).collect();
        GridFn { grid: self.grid.clone(), samples }
    }

    pub fn scale(&self, c: f64) -> GridFn {
        self.map(|_, u| c * u)
    }

    /// Pointwise `self + c * other`; grids must match.
    pub fn axpy(&self, c: f64, other: &GridFn) -> Result<GridFn> {
        self.check_same_grid(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(u, v)| u + c * v).collect();
        Ok(GridFn { grid: self.grid.clone(), samples })
    }

    pub(crate) fn check_same_grid(&self, other: &GridFn) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::domain("grid functions live on different grids"));
        }
        Ok(())
    }

    /// Restriction to the coarsened grid (every other sample).
    pub fn coarsen(&self) -> Option<GridFn> {
        let grid = self.grid.coarsen()?;
        let samples = self.samples.iter().step_by(2).copied().collect();
        Some(GridFn { grid, samples })
    }

    /// Piecewise-linear interpolant evaluated at `t` (clamped to `[a, b]`).
    pub fn interpolate(&self, t: f64) -> f64 {
        let j = self.grid.locate(t);
        let nodes = self.grid.nodes();
        let (t0, t1) = (nodes[j], nodes[j + 1]);
        let t = t.clamp(t0, t1);
        let w = (t - t0) / (t1 - t0);
        (1.0 - w) * self.samples[j] + w * self.samples[j + 1]
    }

    /// Linear resampling onto another grid.
    pub fn resample(&self, target: &Grid) -> GridFn {
        target.sample(|t| self.interpolate(t))
    }

    pub fn sup_abs_diff(&self, other: &GridFn) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self.samples.iter().zip(&other.samples).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max))
    }

    pub fn norm(&self, kind: NormKind) -> Result<f64> {
        norm(self, kind)
    }
}

/// Which norm to take of a [`GridFn`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    /// `(int |u|^p dx)^(1/p)`
    Lp(f64),
    /// `(int |x^gamma u|^p dx)^(1/p)`, requires `a > 0`
    WeightedLp(f64, f64),
    /// `(int |u|^p dx/x)^(1/p)`, requires `a > 0`
    LogWeightedLp(f64),
    /// max over nodes of `|u|`
    Sup,
}

/// Discrete norm by composite trapezoid on nodal values of `|u|^p * weight`.
pub fn norm(u: &GridFn, kind: NormKind) -> Result<f64> {
    let grid = u.grid();
    let p = match kind {
        NormKind::Sup => return Ok(u.samples.iter().fold(0.0, |m, v| f64::max(m, v.abs()))),
        NormKind::Lp(p) | NormKind::WeightedLp(p, _) | NormKind::LogWeightedLp(p) => p,
    };
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("norm exponent must satisfy 1 <= p < inf, got {p}")));
    }
    if !matches!(kind, NormKind::Lp(_)) && grid.a() <= 0.0 {
        return Err(Error::domain(format!("weighted norm requires a > 0, got a={}", grid.a())));
    }
    let weight = |t: f64| match kind {
        NormKind::WeightedLp(_, gamma) => t.powf(gamma * p),
        NormKind::LogWeightedLp(_) => 1.0 / t,
        _ => 1.0,
    };
    let w = grid.trapezoid_weights();
    let integral: f64 =
        grid.nodes().iter().zip(&u.samples).zip(&w).map(|((&t, &v), &wq)| wq * v.abs().powf(p) * weight(t)).sum();
    Ok(integral.powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn uniform_nodes() {
        let g = uniform_grid(0.0, 1.0, 4).unwrap();
        assert_eq!(g.nodes(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = uniform_grid(1.0, E, 2).unwrap();
        assert_eq!(g.nodes()[0], 1.0);
        assert_eq!(g.nodes()[2], E);
        assert!((g.nodes()[1] - (1.0 + E) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(uniform_grid(1.0, 0.0, 4), Err(Error::Domain(_))));
        assert!(matches!(uniform_grid(0.0, 1.0, 1), Err(Error::Domain(_))));
        assert!(matches!(uniform_grid(0.0, 0.0, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn refine_shares_nodes() {
        let g = uniform_grid(0.0, 1.0, 4).unwrap();
        let r = g.refine();
        assert_eq!(r.n(), 8);
        for (i, &t) in g.nodes().iter().enumerate() {
            assert_eq!(r.nodes()[2 * i].to_bits(), t.to_bits());
        }
        assert_eq!(r.nodes()[1], 0.5 * (g.nodes()[0] + g.nodes()[1]));
        let g2 = uniform_grid(-1.0, 3.0, 2).unwrap();
        assert_eq!(g2.refine().refine().n(), 8);
        assert_eq!(r.coarsen().unwrap(), g);
    }

    #[test]
    fn basic_norms() {
        let g = uniform_grid(0.0, 1.0, 16).unwrap();
        let one = g.sample(|_| 1.0);
        assert!((one.norm(NormKind::Lp(2.0)).unwrap() - 1.0).abs() < 1e-15);
        let t = g.sample(|t| t);
        assert_eq!(t.norm(NormKind::Sup).unwrap(), 1.0);

        let g = uniform_grid(1.0, E, 2048).unwrap();
        let one = g.sample(|_| 1.0);
        // int_1^e dx/x = 1
        assert!((one.norm(NormKind::LogWeightedLp(2.0)).unwrap() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn weighted_norm_matches_quadrature_value() {
        // sqrt(int_1^2 (1 - 1/x)^2 dx) = sqrt(1.5 - 2 ln 2)
        let exact = (1.5 - 2.0 * 2f64.ln()).sqrt();
        assert!((exact - 0.337203).abs() < 1e-6);
        let g = uniform_grid(1.0, 2.0, 1024).unwrap();
        let u = g.sample(|t| t - 1.0);
        let v = u.norm(NormKind::WeightedLp(2.0, -1.0)).unwrap();
        assert!((v - exact).abs() < 1e-6, "{v}");
    }

    #[test]
    fn weighted_norms_need_positive_a() {
        let g = uniform_grid(0.0, 1.0, 8).unwrap();
        let u = g.sample(|t| t);
        assert!(matches!(u.norm(NormKind::LogWeightedLp(2.0)), Err(Error::Domain(_))));
        assert!(matches!(u.norm(NormKind::WeightedLp(2.0, 1.0)), Err(Error::Domain(_))));
        assert!(matches!(u.norm(NormKind::Lp(0.5)), Err(Error::Domain(_))));
    }

    #[test]
    fn trapezoid_norm_converges_at_second_order() {
        let f = |t: f64| (3.0 * t).sin() + t * t;
        let mut diffs = Vec::new();
        let mut g = uniform_grid(0.0, 1.0, 16).unwrap();
        for _ in 0..5 {
            let fine = g.refine();
            let d =
                (g.sample(f).norm(NormKind::Lp(2.0)).unwrap() - fine.sample(f).norm(NormKind::Lp(2.0)).unwrap()).abs();
            diffs.push(d);
            g = fine;
        }
        for w in diffs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 1.8, "order {order}");
        }
    }

    #[test]
    fn locate_and_interpolate() {
        let g = uniform_grid(0.0, 1.0, 10).unwrap();
        let u = g.sample(|t| 2.0 * t + 1.0);
        for &t in &[0.0, 0.05, 0.1, 0.33, 0.999, 1.0] {
            assert!((u.interpolate(t) - (2.0 * t + 1.0)).abs() < 1e-14);
        }
        assert_eq!(g.locate(0.35), 3);
        assert_eq!(g.locate(1.0), 9);
    }

    #[test]
    fn vanishing_constructor() {
        let g = uniform_grid(0.0, 1.0, 4).unwrap();
        let u = GridFn::vanishing_at_a(g.clone(), vec![1e-14, 1.0, 2.0, 3.0, 4.0], 1e-10).unwrap();
        assert_eq!(u.at_a(), 0.0);
        assert!(GridFn::vanishing_at_a(g.clone(), vec![1e-3, 1.0, 2.0, 3.0, 4.0], 1e-10).is_err());
        assert!(GridFn::new(g, vec![0.0; 3]).is_err());
    }
}
