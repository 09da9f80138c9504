use super::{Family, Field, InequalityCase};
use crate::error::{Error, Result};

/// An [`InequalityCase`] whose hypotheses have been checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidatedCase {
    case: InequalityCase,
}

impl ValidatedCase {
    pub fn case(&self) -> &InequalityCase {
        &self.case
    }

    pub fn family(&self) -> Family {
        self.case.family
    }

    /// Value of an active field.
    pub(crate) fn val(&self, f: Field) -> f64 {
        f.get(&self.case.params).expect("validated field present")
    }

    /// `q = p / (p - 1)` for the families that derive it from `p`.
    pub(crate) fn conjugate(&self) -> f64 {
        let p = self.val(Field::P);
        p / (p - 1.0)
    }
}

fn clause(ok: bool, name: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::param(name))
    }
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0)
}

/// Check the active-field set and every hypothesis of the case's theorem.
/// Errors name the first violated clause.
pub fn validate_case(case: &InequalityCase) -> Result<ValidatedCase> {
    let fam = case.family;
    let active = fam.fields();
    for f in Field::ALL {
        match (active.contains(&f), f.get(&case.params)) {
            (true, None) => return Err(Error::param(format!("{} required", f.name()))),
            (false, Some(_)) => return Err(Error::param(format!("{} not used by {}", f.name(), fam))),
            (true, Some(v)) if !v.is_finite() => return Err(Error::param(format!("{} finite", f.name()))),
            _ => {}
        }
    }
    let (a, b) = (case.a, case.b);
    clause(a.is_finite() && b.is_finite() && a < b, "a<b")?;
    let v = ValidatedCase { case: *case };
    let get = |f: Field| v.val(f);
    let needs_positive_a = !matches!(
        fam,
        Family::PoincareSobolev
            | Family::PoincareSobolevLq
            | Family::SobolevBeta
            | Family::GagliardoNirenberg
            | Family::SeqPoincareSobolev
            | Family::SeqGn
    );
    if needs_positive_a {
        clause(a > 0.0, "a>0")?;
    }

    match fam {
        Family::PoincareSobolev
        | Family::Hardy
        | Family::Uncertainty
        | Family::HadPoincareSobolev
        | Family::HadHardy
        | Family::HadUncertainty => {
            let (alpha, p) = (get(Field::Alpha), get(Field::P));
            clause(p > 1.0, "p>1")?;
            clause(alpha > 1.0 / p && alpha <= 1.0, "α∈(1/p,1]")?;
        }
        Family::PoincareSobolevLq => {
            let (alpha, p, theta) = (get(Field::Alpha), get(Field::P), get(Field::Theta));
            clause(p > 1.0, "p>1")?;
            clause(alpha > 1.0 / p && alpha <= 1.0, "α∈(1/p,1]")?;
            clause(theta > 1.0, "θ∈(1,∞)")?;
        }
        Family::WeightedHardy | Family::HadWeightedHardy => {
            let (alpha, p) = (get(Field::Alpha), get(Field::P));
            clause(p > 1.0, "p>1")?;
            clause(alpha > 1.0 / p && alpha <= 1.0, "α∈(1/p,1]")?;
        }
        Family::SobolevBeta => {
            let (alpha, beta, p) = (get(Field::Alpha), get(Field::Beta), get(Field::P));
            clause(p > 1.0, "p>1")?;
            clause((0.0..1.0).contains(&beta), "β∈[0,1)")?;
            clause(alpha > beta + 1.0 / p && alpha <= 1.0, "α∈(β+1/p,1]")?;
        }
        Family::GagliardoNirenberg | Family::HadGn => {
            let (alpha, p, q) = (get(Field::Alpha), get(Field::P), get(Field::Q));
            clause(p >= 1.0 && q >= 1.0, "1≤p,q<∞")?;
            clause(alpha > 1.0 / q && alpha <= 1.0, "α∈(1/q,1]")?;
            gn_relation(get(Field::S), get(Field::Gamma), p, q)?;
        }
        Family::SeqGn => {
            let (alpha, beta, p, q) = (get(Field::Alpha), get(Field::Beta), get(Field::P), get(Field::Q));
            clause(p >= 1.0 && q >= 1.0, "1≤p,q<∞")?;
            clause(alpha > 0.0 && alpha < 1.0, "α∈(0,1)")?;
            clause(beta > 1.0 / q && beta < 1.0, "β∈(1/q,1)")?;
            gn_relation(get(Field::S), get(Field::Gamma), p, q)?;
        }
        Family::SeqPoincareSobolev | Family::SeqHardy => {
            let (alpha, beta, p) = (get(Field::Alpha), get(Field::Beta), get(Field::P));
            clause(p > 1.0, "p>1")?;
            let q = p / (p - 1.0);
            clause(alpha > 1.0 / q && alpha < 1.0, "α∈(1/q,1)")?;
            // the constant (alpha q - q + 1)^(1/q) needs alpha > 1/p as well
            clause(alpha > 1.0 / p, "α∈(1/p,1)")?;
            clause(beta > 0.0 && beta < 1.0, "β∈(0,1)")?;
        }
        Family::Ckn | Family::HadCkn => {
            let (alpha, p, q, r) = (get(Field::Alpha), get(Field::P), get(Field::Q), get(Field::R));
            let (delta, c, d, e) = (get(Field::Delta), get(Field::C), get(Field::D), get(Field::E));
            clause(p > 1.0 && q > 1.0, "1<p,q<∞")?;
            clause(r > 0.0, "0<r<∞")?;
            clause(alpha > 1.0 - 1.0 / q && alpha < 1.0, "α∈(1−1/q,1)")?;
            clause(p + q >= r, "p+q≥r")?;
            clause((0.0..=1.0).contains(&delta), "δ∈[0,1]")?;
            clause(delta >= (r - q) / r && delta <= p / r, "δ∈[(r−q)/r,p/r]")?;
            clause(close(delta / p + (1.0 - delta) / q, 1.0 / r), "δ/p+(1−δ)/q=1/r")?;
            clause(close(c, delta * (d - 1.0) + e * (1.0 - delta)), "c=δ(d−1)+e(1−δ)")?;
            clause(1.0 + (d - 1.0) * p > 0.0, "1+(d−1)p>0")?;
            if delta > 0.0 {
                // the weighted Hardy step needs its own order hypothesis
                clause(alpha > 1.0 / p, "α∈(1/p,1]")?;
            }
        }
    }
    Ok(v)
}

fn gn_relation(s: f64, gamma: f64, p: f64, q: f64) -> Result<()> {
    clause((0.0..=1.0).contains(&s), "s∈[0,1]")?;
    clause(close(gamma * s / q + gamma * (1.0 - s) / p, 1.0), "γs/q+γ(1−s)/p=1")
}
