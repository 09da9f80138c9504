//! Euler gamma and the lower incomplete gamma function.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};

// Lanczos approximation, r = 10.900511, coefficients from Pugh (2004), as in statrs.
const LANCZOS_R: f64 = 10.900511;
#[allow(clippy::excessive_precision)]
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;

/// Euler gamma for `x > 0`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("gamma requires finite x > 0, got {x}")));
    }
    Ok(gamma_unchecked(x))
}

/// Lanczos gamma without the domain check; callers guarantee `x > 0`.
pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    let s = LANCZOS_DK.iter().enumerate().skip(1).fold(LANCZOS_DK[0], |s, (i, &dk)| s + dk / (x + i as f64 - 1.0));
    s * TWO_SQRT_E_OVER_PI * ((x - 0.5 + LANCZOS_R) / E).powf(x - 0.5)
}

/// Unregularized lower incomplete gamma `int_0^x v^(s-1) e^(-v) dv` for `s > 0`, `x >= 0`.
///
/// Power series; intended for the moderate arguments (`x` up to a few tens)
/// produced by `log(b/a)` on bounded intervals.
pub fn lower_incomplete_gamma(s: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut term = 1.0 / s;
    let mut sum = term;
    let mut k = 1.0;
    while k < 1000.0 {
        term *= x / (s + k);
        sum += term;
        if term.abs() < sum.abs() * 1e-17 {
            break;
        }
        k += 1.0;
    }
    sum * (s * x.ln() - x).exp()
}
