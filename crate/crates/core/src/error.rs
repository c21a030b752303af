use thiserror::Error;

use crate::lab::SearchTrace;
use crate::network::ActivationKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid input box: {0}")]
    InvalidBox(String),

    #[error("{what}: expected dimension {expected}, got {got}")]
    DimensionMismatch { what: String, expected: usize, got: usize },

    #[error("invalid multiplier: {0}")]
    InvalidMultiplier(String),

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("activation `{}` is not supported here", .0.name())]
    UnsupportedActivation(ActivationKind),

    #[error("coefficient matrix of {0} is not symmetric")]
    NonSymmetric(String),

    #[error("matrix is not symmetric (asymmetry {0:.3e})")]
    NotSymmetricMatrix(f64),

    #[error("SDP is infeasible: {0}")]
    Infeasible(String),

    #[error("SDP solve failed: {0}")]
    SolverFailed(String),

    #[error("T0_r entry {index} = {value:.3e} is too small to invert")]
    SingularRecovery { index: usize, value: f64 },

    #[error("empty sample set")]
    EmptySample,

    #[error("architecture search found no feasible reduced network in {} iteration(s)", .0.records.len())]
    SearchExhausted(Box<SearchTrace>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
