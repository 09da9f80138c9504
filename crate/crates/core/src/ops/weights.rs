//! Accurate finite differences of `k^s` used by the product-integration weights.
//!
//! The naive forms lose roughly `log10(k)` (first difference) and `2 log10(k)`
//! (second difference) digits to cancellation at large `k`.

/// `(k + 1)^s - k^s` for `k >= 0`.
pub(crate) fn pow_diff1(s: f64, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let k = k as f64;
    k.powf(s) * (s * (1.0 / k).ln_1p()).exp_m1()
}

/// `(k + 1)^s - 2 k^s + (k - 1)^s` for `k >= 1`.
pub(crate) fn pow_diff2(s: f64, k: usize) -> f64 {
    debug_assert!(k >= 1);
    if k == 1 {
        // 0^s taken as its limit 0, also at s = 0
        return 2.0f64.powf(s) - 2.0;
    }
    if k < 4 {
        let kf = k as f64;
        return (kf + 1.0).powf(s) - 2.0 * kf.powf(s) + (kf - 1.0).powf(s);
    }
    // k^s * 2 * sum_{m >= 1} binom(s, 2m) k^(-2m)
    let kf = k as f64;
    let inv2 = 1.0 / (kf * kf);
    let mut binom = 1.0; // binom(s, j), advanced two steps per term
    let mut j = 0.0;
    let mut xpow = 1.0;
    let mut sum = 0.0;
    for _ in 0..64 {
        binom *= (s - j) / (j + 1.0);
        binom *= (s - j - 1.0) / (j + 2.0);
        j += 2.0;
        xpow *= inv2;
        let term = binom * xpow;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    2.0 * kf.powf(s) * sum
}
