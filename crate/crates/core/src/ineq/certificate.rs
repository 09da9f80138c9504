use serde::{Deserialize, Serialize};

use super::constant::constant_of;
use super::validate::{validate_case, ValidatedCase};
use super::{Family, Field, InequalityCase, Params};
use crate::corpus::CorpusFn;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{Grid, GridFn, NormKind};
use crate::ops::{HadamardOperator, OperatorMatrix, UnitOrder};

/// Absolute threshold for the numerical boundary hypotheses (`u(a) = 0` and its
/// sequential analogues).
pub const BOUNDARY_TOL: f64 = 1e-10;

/// `disc_tol = floor + |ratio(n) - ratio(n/2)|`, the second term only when
/// `richardson` is set and the grid can be halved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    pub floor: f64,
    pub richardson: bool,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy { floor: 1e-6, richardson: true }
    }
}

/// Evaluated inequality for one (case, function) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub case: InequalityCase,
    pub function: String,
    pub lhs: f64,
    pub rhs_norm_product: f64,
    pub constant: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub disc_tol: f64,
    pub pass: bool,
    pub grid_n: usize,
}

#[derive(Debug, Clone)]
enum Deriv {
    Caputo(OperatorMatrix),
    Hadamard(HadamardOperator),
}

impl Deriv {
    fn apply(&self, u: &GridFn, exec: Exec) -> Result<GridFn> {
        match self {
            Deriv::Caputo(m) => m.apply_with(u, exec),
            Deriv::Hadamard(h) => h.apply(u, exec),
        }
    }
}

/// Operators a family needs on one grid. For sequential families `first` is the
/// inner derivative and `second` the outer one; for `SobolevBeta` `second` is the
/// order-`beta` derivative on the left side.
#[derive(Debug, Clone)]
struct Ops {
    grid: Grid,
    first: Deriv,
    second: Option<OperatorMatrix>,
}

impl Ops {
    fn build(v: &ValidatedCase, grid: &Grid) -> Result<Ops> {
        let get = |f: Field| v.val(f);
        let caputo = |order: f64| OperatorMatrix::caputo(grid, order);
        let (first, second) = match v.family() {
            f if f.is_hadamard() => {
                (Deriv::Hadamard(HadamardOperator::derivative(grid, get(Field::Alpha), UnitOrder::Limit)?), None)
            }
            Family::SobolevBeta => {
                let beta = get(Field::Beta);
                let second = if beta > 0.0 { Some(caputo(beta)?) } else { None };
                (Deriv::Caputo(caputo(get(Field::Alpha))?), second)
            }
            Family::SeqPoincareSobolev | Family::SeqHardy => {
                (Deriv::Caputo(caputo(get(Field::Beta))?), Some(caputo(get(Field::Alpha))?))
            }
            Family::SeqGn => (Deriv::Caputo(caputo(get(Field::Alpha))?), Some(caputo(get(Field::Beta))?)),
            _ => (Deriv::Caputo(caputo(get(Field::Alpha))?), None),
        };
        Ok(Ops { grid: grid.clone(), first, second })
    }

    fn second(&self, w: &GridFn, exec: Exec) -> Result<GridFn> {
        self.second.as_ref().expect("family builds a second operator").apply_with(w, exec)
    }
}

fn vanishing(value: f64, what: &str) -> Result<()> {
    if value.abs() <= BOUNDARY_TOL {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!("{what} = {value:e} at t = a, must vanish")))
    }
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs == 0.0 {
        if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        lhs / rhs
    }
}

/// Left side and right-side norm product (without the constant).
fn sides(v: &ValidatedCase, ops: &Ops, u: &GridFn, embedding: bool, exec: Exec) -> Result<(f64, f64)> {
    use NormKind::*;
    let get = |f: Field| v.val(f);
    let fam = v.family();
    if fam.requires_vanishing() || embedding {
        vanishing(u.at_a(), "u")?;
    }
    let sides = match fam {
        Family::PoincareSobolev => (u.norm(Sup)?, ops.first.apply(u, exec)?.norm(Lp(get(Field::P)))?),
        Family::PoincareSobolevLq => {
            (u.norm(Lp(get(Field::Theta)))?, ops.first.apply(u, exec)?.norm(Lp(get(Field::P)))?)
        }
        Family::SobolevBeta => {
            let lower = match ops.second {
                Some(ref m) => m.apply_with(u, exec)?,
                None => {
                    let ua = u.at_a();
                    u.map(|_, y| y - ua)
                }
            };
            let lhs_kind = if embedding { Lp(2.0) } else { Sup };
            (lower.norm(lhs_kind)?, ops.first.apply(u, exec)?.norm(Lp(get(Field::P)))?)
        }
        Family::Hardy => (u.norm(WeightedLp(get(Field::P), -1.0))?, ops.first.apply(u, exec)?.norm(Lp(get(Field::P)))?),
        Family::WeightedHardy => {
            let (p, gamma) = (get(Field::P), get(Field::Gamma));
            (u.norm(WeightedLp(p, -gamma - 1.0))?, ops.first.apply(u, exec)?.norm(WeightedLp(p, -gamma))?)
        }
        Family::GagliardoNirenberg | Family::HadGn => {
            let (p, q, s) = (get(Field::P), get(Field::Q), get(Field::S));
            let du = ops.first.apply(u, exec)?;
            let d_kind = if fam.is_hadamard() { LogWeightedLp(q) } else { Lp(q) };
            let prod = du.norm(d_kind)?.powf(s) * u.norm(Lp(p))?.powf(1.0 - s);
            (u.norm(Lp(get(Field::Gamma)))?, prod)
        }
        Family::Ckn | Family::HadCkn => {
            let (p, q, r, delta) = (get(Field::P), get(Field::Q), get(Field::R), get(Field::Delta));
            let (c, d, e) = (get(Field::C), get(Field::D), get(Field::E));
            let du = ops.first.apply(u, exec)?;
            // ||x^d D u||_{L^p(dx/x)} = ||x^(d - 1/p) D u||_p
            let d_kind = if fam.is_hadamard() { WeightedLp(p, d - 1.0 / p) } else { WeightedLp(p, d) };
            let prod = du.norm(d_kind)?.powf(delta) * u.norm(WeightedLp(q, e))?.powf(1.0 - delta);
            (u.norm(WeightedLp(r, c))?, prod)
        }
        Family::SeqPoincareSobolev | Family::SeqHardy => {
            let inner = ops.first.apply(u, exec)?;
            vanishing(inner.at_a(), "inner derivative")?;
            let outer = ops.second(&inner, exec)?;
            let p = get(Field::P);
            let lhs = if fam == Family::SeqHardy { inner.norm(WeightedLp(p, -1.0))? } else { inner.norm(Sup)? };
            (lhs, outer.norm(Lp(p))?)
        }
        Family::SeqGn => {
            let (p, q, s) = (get(Field::P), get(Field::Q), get(Field::S));
            let inner = ops.first.apply(u, exec)?;
            vanishing(inner.at_a(), "inner derivative")?;
            let outer = ops.second(&inner, exec)?;
            let prod = outer.norm(Lp(q))?.powf(s) * inner.norm(Lp(p))?.powf(1.0 - s);
            (inner.norm(Lp(get(Field::Gamma)))?, prod)
        }
        Family::HadPoincareSobolev => (u.norm(Sup)?, ops.first.apply(u, exec)?.norm(LogWeightedLp(get(Field::P)))?),
        Family::HadHardy => {
            let p = get(Field::P);
            (u.norm(WeightedLp(p, -1.0))?, ops.first.apply(u, exec)?.norm(LogWeightedLp(p))?)
        }
        Family::HadWeightedHardy => {
            let (p, gamma) = (get(Field::P), get(Field::Gamma));
            // ||D u / x^gamma||_{L^p(dx/x)} = ||x^(-gamma - 1/p) D u||_p
            (u.norm(WeightedLp(p, -gamma - 1.0))?, ops.first.apply(u, exec)?.norm(WeightedLp(p, -gamma - 1.0 / p))?)
        }
        Family::Uncertainty | Family::HadUncertainty => {
            let p = get(Field::P);
            let q = v.conjugate();
            let du = ops.first.apply(u, exec)?;
            let d_kind = if fam.is_hadamard() { LogWeightedLp(p) } else { Lp(p) };
            (u.norm(Lp(2.0))?.powi(2), du.norm(d_kind)? * u.norm(WeightedLp(q, 1.0))?)
        }
    };
    if !(sides.0.is_finite() && sides.1.is_finite()) {
        return Err(Error::domain(format!("non-finite norms (lhs {}, rhs {})", sides.0, sides.1)));
    }
    Ok(sides)
}

/// A case prepared for one grid: operators are assembled once (on the grid
/// and on its every-other-node coarsening) and reused for every function.
#[derive(Debug, Clone)]
pub struct Evaluator {
    case: ValidatedCase,
    constant: f64,
    policy: TolerancePolicy,
    embedding: bool,
    fine: Ops,
    coarse: Option<Ops>,
}

impl Evaluator {
    pub fn new(case: &ValidatedCase, grid: &Grid, policy: TolerancePolicy) -> Result<Evaluator> {
        if grid.a() != case.case().a || grid.b() != case.case().b {
            return Err(Error::domain("grid endpoints differ from the case's interval"));
        }
        let fine = Ops::build(case, grid)?;
        let coarse = match (policy.richardson, grid.coarsen()) {
            (true, Some(g)) => Some(Ops::build(case, &g)?),
            _ => None,
        };
        Ok(Evaluator { case: *case, constant: constant_of(case), policy, embedding: false, fine, coarse })
    }

    pub fn grid(&self) -> &Grid {
        &self.fine.grid
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn evaluate(&self, function: &str, u: &GridFn, exec: Exec) -> Result<Certificate> {
        if u.grid() != &self.fine.grid {
            return Err(Error::domain("function is not sampled on the evaluator's grid"));
        }
        let (lhs, prod) = sides(&self.case, &self.fine, u, self.embedding, exec)?;
        let rhs = self.constant * prod;
        let r = ratio(lhs, rhs);
        let mut disc_tol = self.policy.floor;
        if let (Some(ops), Some(uc)) = (&self.coarse, u.coarsen()) {
            let (lc, pc) = sides(&self.case, ops, &uc, self.embedding, exec)?;
            let rc = ratio(lc, self.constant * pc);
            if r.is_finite() && rc.is_finite() {
                disc_tol += (r - rc).abs();
            }
        }
        Ok(Certificate {
            case: *self.case.case(),
            function: function.to_string(),
            lhs,
            rhs_norm_product: prod,
            constant: self.constant,
            rhs,
            ratio: r,
            disc_tol,
            pass: r <= 1.0 + disc_tol,
            grid_n: u.grid().n(),
        })
    }
}

/// Validate `case` and certify it on `u` with the default tolerance policy.
pub fn evaluate_sides(case: &InequalityCase, function: &str, u: &GridFn) -> Result<Certificate> {
    let v = validate_case(case)?;
    Evaluator::new(&v, u.grid(), TolerancePolicy::default())?.evaluate(function, u, Exec::default())
}

/// Certificate for the embedding `H^hi -> H^lo` (`lo < hi`):
/// `||d^lo u||_2 <= C_SobolevBeta(hi, lo, p = 2) (b - a)^(1/2) ||d^hi u||_2`,
/// the Sobolev-beta bound followed by `||.||_2 <= (b - a)^(1/2) ||.||_inf`.
/// The returned certificate's case is the underlying `SobolevBeta` case.
pub fn embedding_certificate(
    lo: f64,
    hi: f64,
    function: &str,
    u: &GridFn,
    policy: TolerancePolicy,
) -> Result<Certificate> {
    let grid = u.grid();
    let case =
        InequalityCase::new(Family::SobolevBeta, grid.a(), grid.b(), Params::default().alpha(hi).beta(lo).p(2.0));
    let v = validate_case(&case)?;
    let mut ev = Evaluator::new(&v, grid, policy)?;
    ev.embedding = true;
    ev.constant *= (grid.b() - grid.a()).sqrt();
    ev.evaluate(function, u, Exec::default())
}

/// Sweep options: execution policy over cells and the tolerance policy.
#[derive(Debug, Clone, Copy, Default)]
pub struct SweepOptions {
    pub exec: Exec,
    pub policy: TolerancePolicy,
}

/// Evaluate every (case, function) pair, lattice-major and corpus-minor: entry
/// `i * corpus.len() + j` belongs to `lattice[i]` and `corpus[j]`. A case that
/// fails validation (or belongs to another family) yields an error in each of its
/// cells without affecting the others.
pub fn sweep(
    family: Family,
    lattice: &[InequalityCase],
    corpus: &[CorpusFn],
    opts: &SweepOptions,
) -> Vec<Result<Certificate>> {
    let Some(first) = corpus.first() else {
        return Vec::new();
    };
    let grid = first.u.grid().clone();
    let prepare = |case: &InequalityCase| -> Result<(ValidatedCase, Evaluator)> {
        if case.family != family {
            return Err(Error::param(format!("case family {} in a {} sweep", case.family, family)));
        }
        let v = validate_case(case)?;
        let ev = Evaluator::new(&v, &grid, opts.policy)?;
        Ok((v, ev))
    };
    let prepared = opts.exec.map(lattice, prepare);
    let cells: Vec<(usize, usize)> = (0..lattice.len()).flat_map(|i| (0..corpus.len()).map(move |j| (i, j))).collect();
    opts.exec.map(&cells, |&(i, j)| {
        let (v, ev) = prepared[i].as_ref().map_err(Clone::clone)?;
        let f = &corpus[j];
        if f.u.grid() == ev.grid() {
            ev.evaluate(&f.id, &f.u, Exec::Sequential)
        } else {
            Evaluator::new(v, f.u.grid(), opts.policy)?.evaluate(&f.id, &f.u, Exec::Sequential)
        }
    })
}
