use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("history tree budget exceeded: requires {required} nodes, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },

    #[error("matrix game solve failed: certified exploitability {exploitability:e} exceeds tolerance {tolerance:e}")]
    SolveFailed { exploitability: f64, tolerance: f64 },

    #[error(
        "all models have zero posterior weight; the data is inconsistent with every \
         candidate (realizability violated or data corrupted)"
    )]
    RealizabilityViolation,

    #[error("generator gave up after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },

    #[error("malformed trajectory: {0}")]
    MalformedTrajectory(String),

    #[error("missing round data: {0}")]
    MissingRoundData(String),

    #[error("serialization error: {0}")]
    Serialization(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
