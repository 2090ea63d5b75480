use thiserror::Error;

/// Errors produced by the interval model library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid interval: lower {lower} > upper {upper}")]
    InvalidInterval { lower: f64, upper: f64 },

    #[error("non-finite value: {0}")]
    NonFinite(&'static str),

    #[error("empty combination")]
    EmptyCombination,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("hit count {count} exceeds sample size {n}")]
    InvalidCount { count: usize, n: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },

    #[error("invalid parameters: {0}")]
    InvalidTheta(String),

    #[error("invalid covariance: {0}")]
    InvalidCovariance(String),

    #[error("correlation {0} outside [-1, 1]")]
    InvalidCorrelation(f64),

    #[error("sigma2 must be non-negative, got {0}")]
    NegativeVariance(f64),

    #[error("approximation invalid: P(eta<0) too large ({0:.3e})")]
    ApproximationInvalid(f64),

    #[error("quadrature did not converge: achieved error estimate {achieved:.3e} > tolerance {tolerance:.3e}")]
    QuadratureNonConvergence { achieved: f64, tolerance: f64 },

    #[error("degenerate lengths: mean length {0} is not positive")]
    DegenerateLengths(f64),

    #[error("zero variance input")]
    ZeroVariance,

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("quadrature order must be at least 2, got {0}")]
    InvalidOrder(usize),

    #[error("invalid weight constant {0}")]
    InvalidWeight(f64),

    #[error("hit cache does not match quadrature rule nodes")]
    FingerprintMismatch,

    #[error("region/data mismatch: contrast is not finite at the initial point")]
    RegionDataMismatch,

    #[error("finite-difference step leaves the parameter space in component {0}")]
    GradientStep(usize),

    #[error("matrix C is singular (condition number {0:.3e})")]
    SingularC(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Io(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("no observations")]
    NoObservations,
}

pub type Result<T> = std::result::Result<T, Error>;
