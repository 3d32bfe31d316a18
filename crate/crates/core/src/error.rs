use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quartic coefficient must be positive, got {0}")]
    NonConfining(f64),

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("trace stationarity condition has no positive root")]
    NoPositiveRoot,

    #[error("eigen-iteration did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("state index {index} is not representable with a basis of {n_basis} functions")]
    BasisTooSmall { index: usize, n_basis: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("scaled coordinate {0} is outside the stable range of the Hermite recurrence")]
    OverflowGuard(f64),

    #[error("density is not normalized (integral = {0})")]
    NotNormalized(f64),

    #[error("gamma sweep found fewer than two transitions (found {0})")]
    NoTransitionsFound(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
