use thiserror::Error;

/// Errors raised by the numerical routines and the tests built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("root is not bracketed: g({lo}) = {g_lo}, g({hi}) = {g_hi}")]
    NotBracketed { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("{op} exhausted its iteration budget of {budget}")]
    IterationBudget { op: &'static str, budget: usize },

    #[error("quadrature did not converge after {evaluations} evaluations (best estimate {estimate}, error bound {abs_error})")]
    Quadrature { estimate: f64, abs_error: f64, evaluations: usize },

    #[error("{op}: no solution within the search budget ({detail})")]
    SearchBudget { op: &'static str, detail: String },

    #[error("fixture data: {0}")]
    Fixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain { op, detail: detail.into() }
}
