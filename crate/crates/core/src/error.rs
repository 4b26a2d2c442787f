use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |A - A^H| = {0:e})")]
    NotHermitian(f64),

    #[error("not a density operator: {0}")]
    NotDensity(String),

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("overlap {0} outside [0, 1]")]
    OverlapOutOfRange(f64),

    #[error("states are identical (overlap 1) and cannot be distinguished")]
    IndistinguishableEnsemble,

    #[error("error probability {p} below the Helstrom bound {bound}")]
    InformationBoundExceeded { p: f64, bound: f64 },

    #[error("objective returned a non-finite value at {0}")]
    NonFinite(f64),

    #[error("rank-deficient columns (pivot norm {0:e})")]
    RankDeficient(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
