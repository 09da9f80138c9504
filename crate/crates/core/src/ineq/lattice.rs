use super::{Family, InequalityCase, Params};

fn cases(family: Family, intervals: &[(f64, f64)], params: Vec<Params>) -> Vec<InequalityCase> {
    intervals.iter().flat_map(|&(a, b)| params.iter().map(move |p| InequalityCase::new(family, a, b, *p))).collect()
}

fn grid2(xs: &[f64], ys: &[f64], f: impl Fn(f64, f64) -> Params) -> Vec<Params> {
    xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).map(|(x, y)| f(x, y)).collect()
}

fn gn_params(with_beta: Option<f64>, alpha: f64, p: f64, q: f64, s: f64) -> Params {
    let gamma = 1.0 / (s / q + (1.0 - s) / p);
    let base = Params::default().alpha(alpha).p(p).q(q).s(s).gamma(gamma);
    match with_beta {
        Some(beta) => base.beta(beta),
        None => base,
    }
}

/// CKN parameters with `r` and `c` solved from the two defining relations.
fn ckn_params(alpha: f64, p: f64, q: f64, delta: f64, d: f64, e: f64) -> Params {
    let r = 1.0 / (delta / p + (1.0 - delta) / q);
    let c = delta * (d - 1.0) + e * (1.0 - delta);
    Params::default().alpha(alpha).p(p).q(q).r(r).delta(delta).c(c).d(d).e(e)
}

/// A lattice of at least twelve valid cases for `family`, spanning orders,
/// exponents, weights and intervals.
pub fn reference_lattice(family: Family) -> Vec<InequalityCase> {
    use Family::*;
    let alpha_p = |alphas: &[f64], ps: &[f64]| grid2(alphas, ps, |a, p| Params::default().alpha(a).p(p));
    match family {
        PoincareSobolev => cases(family, &[(0.0, 1.0), (0.0, 2.0)], alpha_p(&[0.6, 0.75, 1.0], &[2.0, 3.0])),
        PoincareSobolevLq => {
            let mut ps = Vec::new();
            for theta in [1.5, 2.0, 4.0] {
                ps.extend(grid2(&[0.75, 1.0], &[2.0, 3.0], |a, p| Params::default().alpha(a).p(p).theta(theta)));
            }
            cases(family, &[(0.0, 1.0), (0.0, 2.0)], ps)
        }
        SobolevBeta => {
            let mut ps = Vec::new();
            for (p, pairs) in [
                (2.0, &[(0.0, 0.6), (0.0, 0.8), (0.0, 1.0), (0.25, 0.8), (0.25, 1.0), (0.4, 1.0)][..]),
                (4.0, &[(0.0, 0.5), (0.0, 1.0), (0.25, 0.6), (0.25, 1.0), (0.5, 0.8), (0.5, 1.0)][..]),
            ] {
                ps.extend(pairs.iter().map(|&(beta, alpha)| Params::default().alpha(alpha).beta(beta).p(p)));
            }
            cases(family, &[(0.0, 1.0), (0.0, 2.0)], ps)
        }
        Hardy | Uncertainty => cases(family, &[(1.0, 2.0), (0.5, 1.5)], alpha_p(&[0.6, 0.8, 1.0], &[2.0, 3.0])),
        HadPoincareSobolev | HadHardy | HadUncertainty => {
            cases(family, &[(1.0, 2.0), (1.0, std::f64::consts::E)], alpha_p(&[0.6, 0.8, 1.0], &[2.0, 3.0]))
        }
        WeightedHardy | HadWeightedHardy => {
            let mut ps = Vec::new();
            for gamma in [-1.0, 0.5, 1.0] {
                ps.extend(grid2(&[0.75, 1.0], &[2.0, 3.0], |a, p| Params::default().alpha(a).p(p).gamma(gamma)));
            }
            cases(family, &[(1.0, 2.0)], ps)
        }
        GagliardoNirenberg | HadGn => {
            let mut ps = Vec::new();
            for q in [2.0, 3.0] {
                for alpha in [0.75, 1.0] {
                    ps.extend(grid2(&[2.0, 4.0], &[0.25, 0.75], |p, s| gn_params(None, alpha, p, q, s)));
                }
            }
            let interval = if family == HadGn { (1.0, 2.0) } else { (0.0, 1.0) };
            cases(family, &[interval], ps)
        }
        SeqGn => {
            let mut ps = grid2(&[0.1, 0.25], &[0.6, 0.75], |alpha, beta| gn_params(Some(beta), alpha, 2.0, 2.0, 0.25));
            ps.extend(grid2(&[0.1, 0.25], &[0.6, 0.75], |alpha, beta| gn_params(Some(beta), alpha, 2.0, 2.0, 0.75)));
            ps.extend(grid2(&[0.1, 0.2], &[0.5, 0.7], |alpha, beta| gn_params(Some(beta), alpha, 2.0, 3.0, 0.5)));
            cases(family, &[(0.0, 1.0)], ps)
        }
        SeqPoincareSobolev | SeqHardy => {
            let mut ps =
                grid2(&[0.6, 0.75], &[0.1, 0.25], |alpha, beta| Params::default().alpha(alpha).beta(beta).p(2.0));
            ps.extend(grid2(&[0.7, 0.75], &[0.1, 0.25], |alpha, beta| {
                Params::default().alpha(alpha).beta(beta).p(3.0)
            }));
            let intervals: &[(f64, f64)] =
                if family == SeqHardy { &[(1.0, 2.0), (0.5, 1.5)] } else { &[(0.0, 1.0), (0.0, 2.0)] };
            cases(family, intervals, ps)
        }
        Ckn | HadCkn => {
            let mut ps = Vec::new();
            for (p, q) in [(2.0, 2.0), (3.0, 2.0)] {
                for alpha in [0.6, 0.8] {
                    for delta in [0.0, 0.5, 1.0] {
                        ps.push(ckn_params(alpha, p, q, delta, 1.0, 0.0));
                    }
                }
            }
            ps.push(ckn_params(0.8, 2.0, 2.0, 0.5, 0.75, 0.5));
            ps.push(ckn_params(0.8, 2.0, 3.0, 0.5, 1.5, -0.5));
            cases(family, &[(1.0, 2.0)], ps)
        }
    }
}
