//! Inequality families, their hypotheses, explicit constants and numerical
//! certificates.
//!
//! Notation used below: `q = p / (p - 1)` is the conjugate exponent and
//! `D(alpha, p) = ((alpha p - 1) / (p - 1))^((p - 1) / p) Gamma(alpha)`, which equals
//! `(alpha q - q + 1)^(1/q) Gamma(alpha)`. `D` is finite and positive exactly when
//! `alpha > 1/p`.

mod certificate;
mod constant;
mod lattice;
mod validate;

#[cfg(test)]
mod tests;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use certificate::{
    embedding_certificate, evaluate_sides, sweep, Certificate, Evaluator, SweepOptions, TolerancePolicy, BOUNDARY_TOL,
};
pub use constant::{constant, sobolev_beta_statement_constant};
pub use lattice::reference_lattice;
pub use validate::{validate_case, ValidatedCase};

/// One inequality statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `||u||_inf <= C ||d^alpha u||_p`
    PoincareSobolev,
    /// `||u||_theta <= C ||d^alpha u||_p`
    PoincareSobolevLq,
    /// `||d^beta u||_inf <= C ||d^alpha u||_p`
    SobolevBeta,
    /// `||u / x||_p <= C ||d^alpha u||_p`
    Hardy,
    /// `||u / x^(gamma+1)||_p <= C ||d^alpha u / x^gamma||_p`
    WeightedHardy,
    /// `||u||_gamma <= C ||d^alpha u||_q^s ||u||_p^(1-s)`
    GagliardoNirenberg,
    /// `||x^c u||_r <= C ||x^d d^alpha u||_p^delta ||x^e u||_q^(1-delta)`
    Ckn,
    /// `||d^beta u||_inf <= C ||d^alpha d^beta u||_p`
    SeqPoincareSobolev,
    /// `||d^beta u / x||_p <= C ||d^alpha d^beta u||_p`
    SeqHardy,
    /// `||d^alpha u||_gamma <= C ||d^beta d^alpha u||_q^s ||d^alpha u||_p^(1-s)`
    SeqGn,
    /// `||u||_inf <= C ||D^alpha u||_{L^p(dx/x)}` with the Hadamard derivative
    HadPoincareSobolev,
    /// `||u / x||_p <= C ||D^alpha u||_{L^p(dx/x)}`
    HadHardy,
    /// `||u / x^(gamma+1)||_p <= C ||D^alpha u / x^gamma||_{L^p(dx/x)}`
    HadWeightedHardy,
    /// `||u||_gamma <= C ||D^alpha u||_{L^q(dx/x)}^s ||u||_p^(1-s)`
    HadGn,
    /// `||x^c u||_r <= C ||x^d D^alpha u||_{L^p(dx/x)}^delta ||x^e u||_q^(1-delta)`
    HadCkn,
    /// `||u||_2^2 <= C ||d^alpha u||_p ||x u||_q`
    Uncertainty,
    /// `||u||_2^2 <= C ||D^alpha u||_{L^p(dx/x)} ||x u||_q`
    HadUncertainty,
}

impl Family {
    pub const ALL: [Family; 17] = [
        Family::PoincareSobolev,
        Family::PoincareSobolevLq,
        Family::SobolevBeta,
        Family::Hardy,
        Family::WeightedHardy,
        Family::GagliardoNirenberg,
        Family::Ckn,
        Family::SeqPoincareSobolev,
        Family::SeqHardy,
        Family::SeqGn,
        Family::HadPoincareSobolev,
        Family::HadHardy,
        Family::HadWeightedHardy,
        Family::HadGn,
        Family::HadCkn,
        Family::Uncertainty,
        Family::HadUncertainty,
    ];

    /// The kebab-case name used in reports and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Family::PoincareSobolev => "poincare-sobolev",
            Family::PoincareSobolevLq => "poincare-sobolev-lq",
            Family::SobolevBeta => "sobolev-beta",
            Family::Hardy => "hardy",
            Family::WeightedHardy => "weighted-hardy",
            Family::GagliardoNirenberg => "gagliardo-nirenberg",
            Family::Ckn => "ckn",
            Family::SeqPoincareSobolev => "seq-poincare-sobolev",
            Family::SeqHardy => "seq-hardy",
            Family::SeqGn => "seq-gn",
            Family::HadPoincareSobolev => "had-poincare-sobolev",
            Family::HadHardy => "had-hardy",
            Family::HadWeightedHardy => "had-weighted-hardy",
            Family::HadGn => "had-gn",
            Family::HadCkn => "had-ckn",
            Family::Uncertainty => "uncertainty",
            Family::HadUncertainty => "had-uncertainty",
        }
    }

    /// Parameters the family reads; every other field must be absent.
    pub fn fields(self) -> &'static [Field] {
        use Field::*;
        match self {
            Family::PoincareSobolev | Family::Hardy | Family::Uncertainty => &[Alpha, P],
            Family::HadPoincareSobolev | Family::HadHardy | Family::HadUncertainty => &[Alpha, P],
            Family::PoincareSobolevLq => &[Alpha, P, Theta],
            Family::SobolevBeta | Family::SeqPoincareSobolev | Family::SeqHardy => &[Alpha, Beta, P],
            Family::WeightedHardy | Family::HadWeightedHardy => &[Alpha, P, Gamma],
            Family::GagliardoNirenberg | Family::HadGn => &[Alpha, P, Q, S, Gamma],
            Family::SeqGn => &[Alpha, Beta, P, Q, S, Gamma],
            Family::Ckn | Family::HadCkn => &[Alpha, P, Q, R, Delta, C, D, E],
        }
    }

    pub fn is_hadamard(self) -> bool {
        matches!(
            self,
            Family::HadPoincareSobolev
                | Family::HadHardy
                | Family::HadWeightedHardy
                | Family::HadGn
                | Family::HadCkn
                | Family::HadUncertainty
        )
    }

    pub fn is_sequential(self) -> bool {
        matches!(self, Family::SeqPoincareSobolev | Family::SeqHardy | Family::SeqGn)
    }

    /// Whether the statement assumes `u(a) = 0` (the sequential families and
    /// `SobolevBeta` constrain derivatives instead).
    pub fn requires_vanishing(self) -> bool {
        !matches!(self, Family::SobolevBeta | Family::SeqPoincareSobolev | Family::SeqHardy | Family::SeqGn)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Family, String> {
        Family::ALL.iter().copied().find(|f| f.name() == s).ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// Names of the optional parameters of an [`InequalityCase`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Alpha,
    Beta,
    P,
    Q,
    R,
    S,
    Delta,
    Gamma,
    C,
    D,
    E,
    Theta,
}

impl Field {
    pub const ALL: [Field; 12] = [
        Field::Alpha,
        Field::Beta,
        Field::P,
        Field::Q,
        Field::R,
        Field::S,
        Field::Delta,
        Field::Gamma,
        Field::C,
        Field::D,
        Field::E,
        Field::Theta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Field::Alpha => "alpha",
            Field::Beta => "beta",
            Field::P => "p",
            Field::Q => "q",
            Field::R => "r",
            Field::S => "s",
            Field::Delta => "delta",
            Field::Gamma => "gamma",
            Field::C => "c",
            Field::D => "d",
            Field::E => "e",
            Field::Theta => "theta",
        }
    }

    pub fn get(self, p: &Params) -> Option<f64> {
        match self {
            Field::Alpha => p.alpha,
            Field::Beta => p.beta,
            Field::P => p.p,
            Field::Q => p.q,
            Field::R => p.r,
            Field::S => p.s,
            Field::Delta => p.delta,
            Field::Gamma => p.gamma,
            Field::C => p.c,
            Field::D => p.d,
            Field::E => p.e,
            Field::Theta => p.theta,
        }
    }

    pub fn set(self, p: &mut Params, v: Option<f64>) {
        let slot = match self {
            Field::Alpha => &mut p.alpha,
            Field::Beta => &mut p.beta,
            Field::P => &mut p.p,
            Field::Q => &mut p.q,
            Field::R => &mut p.r,
            Field::S => &mut p.s,
            Field::Delta => &mut p.delta,
            Field::Gamma => &mut p.gamma,
            Field::C => &mut p.c,
            Field::D => &mut p.d,
            Field::E => &mut p.e,
            Field::Theta => &mut p.theta,
        };
        *slot = v;
    }
}

/// Theorem parameters. `gamma` is the weight power for the weighted Hardy
/// families and the output exponent for the Gagliardo-Nirenberg families;
/// `theta` is the output exponent of the `L^theta` variant of Poincare-Sobolev.
/// Where a theorem uses the conjugate `q = p/(p-1)` only `p` is stored.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

macro_rules! setters {
    ($($name:ident),*) => {
        impl Params {
            $(
                pub fn $name(mut self, v: f64) -> Params {
                    self.$name = Some(v);
                    self
                }
            )*
        }
    };
}

setters!(alpha, beta, p, q, r, s, delta, gamma, c, d, e, theta);

/// A fully parameterized instance of one family on `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCase {
    pub family: Family,
    pub a: f64,
    pub b: f64,
    pub params: Params,
}

impl InequalityCase {
    pub fn new(family: Family, a: f64, b: f64, params: Params) -> InequalityCase {
        InequalityCase { family, a, b, params }
    }
}
