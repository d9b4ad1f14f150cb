use thiserror::Error;

/// Errors produced by state construction, protocol simulation and tomography.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state vector is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max deviation from U†U = I is {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    NonUnitTrace(f64),

    #[error("matrix has a negative eigenvalue ({0:.3e})")]
    NotPositiveSemidefinite(f64),

    #[error("impossible outcome: projection probability is zero")]
    ImpossibleOutcome,

    #[error("parameter {name} = {value} is outside {range}")]
    ParameterRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("measurement set is not informationally complete (rank {rank}, need {needed})")]
    NotInformationallyComplete { rank: usize, needed: usize },

    #[error("count record has zero total counts")]
    EmptyCountRecord,

    #[error("count file: {0}")]
    CountFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
