use thiserror::Error;

/// Errors raised by grid construction, builders and solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid control: {0}")]
    InvalidControl(String),

    #[error("non-finite input sample at index {index}")]
    NonFinite { index: usize },

    #[error("integration overflow at x = {x}")]
    Overflow { x: f64 },

    #[error("Hamiltonian class violation: {0}")]
    ClassViolation(String),

    #[error("nonpositive coefficient {value} at x = {x}")]
    NonPositive { x: f64, value: f64 },

    #[error("degenerate partition: adjacent vectors {left} and {right} are parallel")]
    DegeneratePartition { left: usize, right: usize },

    #[error("invalid Jacobi data: {0}")]
    InvalidJacobi(String),

    #[error("rotation angle jumps by {jump} between x = {x0} and x = {x1}; grid too coarse")]
    AngleJump { x0: f64, x1: f64, jump: f64 },

    #[error("vanishing trace at x = {x}")]
    VanishingTrace { x: f64 },

    #[error("singular coefficient at x = {x}")]
    SingularCoefficient { x: f64 },

    #[error("CFL violation: dt = {dt} exceeds the stable bound {bound}")]
    Cfl { dt: f64, bound: f64 },

    #[error("truncation too short: x_max = {x_max} is below the required {required}")]
    Truncation { x_max: f64, required: f64 },

    #[error("singular tridiagonal system at time step {step}")]
    SingularSystem { step: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
