use thiserror::Error;

use crate::montecarlo::Decision;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid transition matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("chain not irreducible: support graph is not strongly connected")]
    NotIrreducible,

    #[error("chain not reversible (max detailed-balance deviation {deviation:.3e})")]
    NotReversible { deviation: f64 },

    #[error("symmetric eigensolver did not converge (residual {residual:.3e})")]
    EigensolverFailure { residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("stationary distribution has zero mass at state {0}")]
    ZeroStationaryMass(usize),

    #[error("enumeration budget exceeded: {outcomes} outcomes > {budget}")]
    BudgetExceeded { outcomes: f64, budget: u64 },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("observed state {state} has zero likelihood under one hypothesis (forced decision {decision:?})")]
    SupportViolation { state: usize, decision: Decision },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
