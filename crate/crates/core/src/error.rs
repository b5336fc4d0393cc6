use thiserror::Error;

/// Everything that can go wrong between a parameter point and a correlation
/// report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// The Gaussian limit is singular at the critical field h = 1.
    #[error("singular point: {0}")]
    SingularPoint(String),

    #[error("non-physical state: {0}")]
    NonPhysical(String),

    #[error("argument outside the domain of {function}: {value}")]
    Domain { function: &'static str, value: f64 },

    #[error("conditional-variance branches disagree at their crossover: {first} vs {second}")]
    BranchDisagreement { first: f64, second: f64 },

    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("invalid sweep specification: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
