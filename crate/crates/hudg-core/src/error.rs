use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coincident points where distinct points are required")]
    CoincidentPoints,

    #[error("point lies on or outside the model disk (norm {norm})")]
    OutsideModelDisk { norm: f64 },

    #[error("half-plane coordinate requires y > 0 (got {y})")]
    InvalidHalfPlane { y: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("work budget exceeded: {context}")]
    BudgetExceeded {
        context: String,
        /// Best independent set found before the budget ran out, if any.
        partial: Option<Vec<usize>>,
    },

    #[error("instance too large for exhaustive search: {n} > {max}")]
    TooLarge { n: usize, max: usize },

    #[error("geometry audit failed: {0}")]
    AuditFailure(String),

    #[error("rejection sampling budget exhausted after {attempts} attempts")]
    SamplingExhausted { attempts: u64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
