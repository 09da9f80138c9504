use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{polynomial_id, vanishing_polynomial};
use crate::error::Result;
use crate::exec::Exec;
use crate::grid::Grid;
use crate::ineq::{validate_case, Certificate, Evaluator, InequalityCase, TolerancePolicy};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub n: usize,
    /// Total degree of the searched polynomials `(t - a) q(t)`.
    pub degree: usize,
    pub initial_step: f64,
    /// A step shrinking below this triggers a random restart.
    pub min_step: f64,
    pub policy: TolerancePolicy,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { n: 512, degree: 4, initial_step: 0.5, min_step: 1e-3, policy: TolerancePolicy::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessResult {
    pub certificate: Certificate,
    pub coefficients: Vec<f64>,
    /// Objective evaluations beyond the initial iterate.
    pub evaluations: usize,
}

/// [`sharpness_search_with`] using [`SearchOptions::default`].
pub fn sharpness_search(case: &InequalityCase, budget: usize, seed: u64) -> Result<SharpnessResult> {
    sharpness_search_with(case, budget, seed, &SearchOptions::default())
}

fn normalize(c: &mut [f64]) {
    let m = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m > 0.0 {
        c.iter_mut().for_each(|v| *v /= m);
    }
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let mut c: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
    normalize(&mut c);
    c
}

/// Coordinate search over the coefficients `c` of `u = (t - a) sum c_k x^k`,
/// `x = (t - a) / (b - a)`, maximizing the certificate ratio, with step halving
/// and random restarts. The sequence of trial points depends only on `seed`
/// and `options`, so a larger budget never finds a worse best point. Budget 0
/// returns the certificate of the initial iterate.
pub fn sharpness_search_with(
    case: &InequalityCase,
    budget: usize,
    seed: u64,
    options: &SearchOptions,
) -> Result<SharpnessResult> {
    let v = validate_case(case)?;
    let grid = Grid::uniform(case.a, case.b, options.n)?;
    let ev = Evaluator::new(&v, &grid, options.policy)?;
    let dim = options.degree.max(1);
    let eval = |c: &[f64]| ev.evaluate(&polynomial_id(c), &vanishing_polynomial(&grid, c), Exec::default());
    let score = |r: &Result<Certificate>| match r {
        Ok(cert) if !cert.ratio.is_nan() => cert.ratio,
        _ => f64::NEG_INFINITY,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = random_point(&mut rng, dim);
    let first = eval(&c);
    let mut cur = score(&first);
    let mut best = (first, c.clone());
    let mut used = 0;
    let mut step = options.initial_step;
    'search: while used < budget {
        let mut improved = false;
        for k in 0..dim {
            for sign in [1.0, -1.0] {
                if used >= budget {
                    break 'search;
                }
                let mut trial = c.clone();
                trial[k] += sign * step;
                normalize(&mut trial);
                let r = eval(&trial);
                used += 1;
                let s = score(&r);
                if s > score(&best.0) || best.0.is_err() && r.is_ok() {
                    best = (r, trial.clone());
                }
                if s > cur {
                    c = trial;
                    cur = s;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < options.min_step && used < budget {
                c = random_point(&mut rng, dim);
                let r = eval(&c);
                used += 1;
                cur = score(&r);
                if cur > score(&best.0) {
                    best = (r, c.clone());
                }
                step = options.initial_step;
            }
        }
    }
    let (cert, coefficients) = best;
    Ok(SharpnessResult { certificate: cert?, coefficients, evaluations: used })
}
