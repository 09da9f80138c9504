//! High-accuracy oracle for weakly singular integrals, independent of the
//! product-integration matrices.
//!
//! The substitution `s = t - (t - a) v^(1/alpha)` turns
//! `int_a^t (t - s)^(alpha - 1) f(s) ds` into
//! `(t - a)^alpha / alpha * int_0^1 f(t - (t - a) v^(1/alpha)) dv`,
//! which has no kernel singularity; the remaining integral is computed by
//! adaptive Gauss-Legendre bisection.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const ABS_TOL: f64 = 1e-12;
const MAX_INTERVALS: usize = 4000;

/// `int_a^t (t - s)^(alpha - 1) f(s) ds` (no `1 / Gamma(alpha)` factor).
pub fn reference_integral(f: &dyn Fn(f64) -> f64, a: f64, t: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::domain(format!("reference integral needs alpha > 0, got {alpha}")));
    }
    if !(a < t) {
        return Err(Error::domain(format!("reference integral needs a < t, got a={a}, t={t}")));
    }
    let len = t - a;
    let g = |v: f64| f(t - len * v.powf(1.0 / alpha));
    let scale = len.powf(alpha) / alpha;
    Ok(scale * adaptive(&g, 0.0, 1.0, ABS_TOL / scale.max(1e-300))?)
}

/// `int_a^t (log(t/s))^(alpha - 1) f(s) ds / s` (no `1 / Gamma(alpha)` factor), `a > 0`.
pub fn reference_hadamard_integral(f: &dyn Fn(f64) -> f64, a: f64, t: f64, alpha: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain("Hadamard reference integral needs a > 0"));
    }
    if !(alpha > 0.0) || !(a < t) {
        return Err(Error::domain("Hadamard reference integral needs alpha > 0 and a < t"));
    }
    let big_l = (t / a).ln();
    let g = |v: f64| f(t * (-big_l * v.powf(1.0 / alpha)).exp());
    let scale = big_l.powf(alpha) / alpha;
    Ok(scale * adaptive(&g, 0.0, 1.0, ABS_TOL / scale.max(1e-300))?)
}

/// Adaptive quadrature of a smooth integrand on `[lo, hi]` to absolute tolerance `tol`.
pub fn adaptive(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let mut heap = BinaryHeap::new();
    let first = Panel::new(f, lo, hi);
    let mut total = first.value;
    let mut err = first.error;
    heap.push(first);
    let mut evals = 1;
    loop {
        if !(total.is_finite() && err.is_finite()) {
            return Err(Error::Convergence { tol, estimate: f64::INFINITY, evals: evals * (LOW + HIGH) });
        }
        if err <= tol {
            break;
        }
        if evals >= MAX_INTERVALS {
            return Err(Error::Convergence { tol, estimate: err, evals: evals * (LOW + HIGH) });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        let left = Panel::new(f, worst.lo, mid);
        let right = Panel::new(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        evals += 2;
        // guard against drift in the running sums
        if evals % 256 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok(heap.iter().map(|p| p.value).sum())
}

const LOW: usize = 15;
const HIGH: usize = 30;

struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl Panel {
    fn new(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Panel {
        let coarse = gauss(f, lo, hi, rule(LOW));
        let fine = gauss(f, lo, hi, rule(HIGH));
        Panel { lo, hi, value: fine, error: (fine - coarse).abs() }
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, (x, w): &(Vec<f64>, Vec<f64>)) -> f64 {
    let c = 0.5 * (lo + hi);
    let r = 0.5 * (hi - lo);
    r * x.iter().zip(w).map(|(xi, wi)| wi * f(c + r * xi)).sum::<f64>()
}

fn rule(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static LOW_RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static HIGH_RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    match n {
        LOW => LOW_RULE.get_or_init(|| gauss_legendre(LOW)),
        HIGH => HIGH_RULE.get_or_init(|| gauss_legendre(HIGH)),
        _ => unreachable!("only two rules are used"),
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}
