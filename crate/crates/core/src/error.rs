use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An inequality case violates one of its theorem's hypotheses.
    #[error("parameter error: violated clause `{clause}`")]
    Param { clause: String },

    /// The sampled function does not satisfy the boundary hypothesis of a family.
    #[error("hypothesis error: {0}")]
    Hypothesis(String),

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e}) within {evals} evaluations")]
    Convergence { tol: f64, estimate: f64, evals: usize },

    #[error("parse error at offset {offset}: expected one of {}", expected.join(", "))]
    Parse { offset: usize, expected: Vec<String> },

    #[error("evaluation error: {0}")]
    Eval(String),

    #[error("linear solve failed: {0}")]
    Solve(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn param(clause: impl Into<String>) -> Self {
        Error::Param { clause: clause.into() }
    }
}
