use super::validate::{validate_case, ValidatedCase};
use super::{Family, Field, InequalityCase};
use crate::error::Result;
use crate::special::gamma_unchecked;

/// `D(alpha, p) = ((alpha p - 1)/(p - 1))^((p-1)/p) Gamma(alpha)`.
pub(crate) fn d_factor(alpha: f64, p: f64) -> f64 {
    ((alpha * p - 1.0) / (p - 1.0)).powf((p - 1.0) / p) * gamma_unchecked(alpha)
}

fn ps(alpha: f64, p: f64, a: f64, b: f64) -> f64 {
    (b - a).powf(alpha - 1.0 / p) / d_factor(alpha, p)
}

fn weighted_hardy(alpha: f64, p: f64, gamma: f64, a: f64, b: f64) -> f64 {
    let g = gamma.abs();
    a.powf(-g - 1.0) * b.powf(g) * (b - a).powf(alpha) / d_factor(alpha, p)
}

fn had_ps(alpha: f64, p: f64, a: f64, b: f64) -> f64 {
    (b / a).ln().abs().powf(alpha - 1.0 / p) / d_factor(alpha, p)
}

fn had_weighted_hardy(alpha: f64, p: f64, gamma: f64, a: f64, b: f64) -> f64 {
    let g = gamma.abs();
    a.powf(-g - 1.0) * b.powf(g) * (b - a).powf(1.0 / p) * had_ps(alpha, p, a, b)
}

/// `(alpha q - beta q - q + 1)^(1/q) Gamma(alpha - beta)` with `q` conjugate to `p`.
fn sobolev_beta_denominator(alpha: f64, beta: f64, p: f64) -> f64 {
    let q = p / (p - 1.0);
    (alpha * q - beta * q - q + 1.0).powf(1.0 / q) * gamma_unchecked(alpha - beta)
}

pub(crate) fn constant_of(v: &ValidatedCase) -> f64 {
    let c = v.case();
    let (a, b) = (c.a, c.b);
    let get = |f: Field| v.val(f);
    match c.family {
        Family::PoincareSobolev => ps(get(Field::Alpha), get(Field::P), a, b),
        Family::PoincareSobolevLq => ps(get(Field::Alpha), get(Field::P), a, b) * (b - a).powf(1.0 / get(Field::Theta)),
        Family::SobolevBeta => {
            let (alpha, beta, p) = (get(Field::Alpha), get(Field::Beta), get(Field::P));
            (b - a).powf(alpha - beta - 1.0 / p) / sobolev_beta_denominator(alpha, beta, p)
        }
        Family::Hardy | Family::Uncertainty => weighted_hardy(get(Field::Alpha), get(Field::P), 0.0, a, b),
        Family::WeightedHardy => weighted_hardy(get(Field::Alpha), get(Field::P), get(Field::Gamma), a, b),
        // Holder, then the L^q Poincare-Sobolev bound with exponent q on both sides
        Family::GagliardoNirenberg => {
            let (alpha, q) = (get(Field::Alpha), get(Field::Q));
            ((b - a).powf(alpha) / d_factor(alpha, q)).powf(get(Field::S))
        }
        // Holder, then weighted Hardy with gamma = -d on the delta factor
        Family::Ckn => {
            let delta = get(Field::Delta);
            if delta == 0.0 {
                1.0
            } else {
                weighted_hardy(get(Field::Alpha), get(Field::P), -get(Field::D), a, b).powf(delta)
            }
        }
        Family::SeqPoincareSobolev => ps(get(Field::Alpha), get(Field::P), a, b),
        Family::SeqHardy => weighted_hardy(get(Field::Alpha), get(Field::P), 0.0, a, b),
        // Holder, then sequential Poincare-Sobolev in L^q for the outer order beta
        Family::SeqGn => {
            let (beta, q) = (get(Field::Beta), get(Field::Q));
            ((b - a).powf(beta) / d_factor(beta, q)).powf(get(Field::S))
        }
        Family::HadPoincareSobolev => had_ps(get(Field::Alpha), get(Field::P), a, b),
        Family::HadHardy | Family::HadUncertainty => had_weighted_hardy(get(Field::Alpha), get(Field::P), 0.0, a, b),
        Family::HadWeightedHardy => had_weighted_hardy(get(Field::Alpha), get(Field::P), get(Field::Gamma), a, b),
        // Holder, then the L^theta Hadamard Poincare-Sobolev remark with theta = p = q
        Family::HadGn => {
            let (alpha, q) = (get(Field::Alpha), get(Field::Q));
            ((b - a).powf(1.0 / q) * had_ps(alpha, q, a, b)).powf(get(Field::S))
        }
        Family::HadCkn => {
            let delta = get(Field::Delta);
            if delta == 0.0 {
                1.0
            } else {
                had_weighted_hardy(get(Field::Alpha), get(Field::P), -get(Field::D), a, b).powf(delta)
            }
        }
    }
}

/// Closed-form constant of a case (validating it first).
///
/// `SobolevBeta` uses the exponent `alpha - beta - 1/p` reached at the end of
/// its Holder argument; [`sobolev_beta_statement_constant`] gives the variant
/// with the additional `+ 1/q`.
pub fn constant(case: &InequalityCase) -> Result<f64> {
    Ok(constant_of(&validate_case(case)?))
}

/// `(b-a)^(alpha-beta-1/p+1/q) / ((alpha q - beta q - q + 1)^(1/q) Gamma(alpha-beta))`.
pub fn sobolev_beta_statement_constant(case: &InequalityCase) -> Result<f64> {
    let v = validate_case(case)?;
    if v.family() != Family::SobolevBeta {
        return Err(crate::Error::param(format!("family {} has no statement variant", v.family())));
    }
    let q = v.conjugate();
    Ok(constant_of(&v) * (case.b - case.a).powf(1.0 / q))
}
