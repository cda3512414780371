use thiserror::Error;

/// Errors raised by the engine. Numerical failures carry enough context to
/// locate the offending sample.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("metric is singular or not positive definite at {point:?}")]
    SingularMetric { point: Vec<f64> },
    #[error("point {point:?} is outside the admissible domain")]
    OutOfDomain { point: Vec<f64> },
    #[error("induced metric on the surface is degenerate at parameter {param:?}")]
    DegenerateInducedMetric { param: Vec<f64> },
    #[error("lapse is not positive at {point:?} (u = {value})")]
    LapseNonPositive { point: Vec<f64>, value: f64 },
    #[error("Lambda is not constant: spread {spread:e} exceeds tolerance {tol:e}")]
    LambdaNotConstant { spread: f64, tol: f64 },
    #[error("triple has no boundary")]
    NoBoundary,
    #[error("operation needs dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("surface gravity must be normalised to 1 (got {kappa})")]
    GravityNotNormalized { kappa: f64 },
    #[error("gradient of the lapse vanishes at {point:?}")]
    CriticalPoint { point: Vec<f64> },
    #[error("boundary extrapolation failed: {0}")]
    ExtrapolationFailed(String),
    #[error("trajectory left the domain at t = {t} near {point:?}")]
    LeftDomain { t: f64, point: Vec<f64> },
    #[error("ODE step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("focal point of the flowed surface at t = {t}")]
    FocalPoint { t: f64 },
    #[error("distance estimation failed: {0}")]
    DistanceEstimationFailed(String),
    #[error("target curvature {kappa} is not below 1/(m-1) = {limit}")]
    KappaTooLarge { kappa: f64, limit: f64 },
    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error("perturbed metric is degenerate at {point:?}")]
    MetricDegenerate { point: Vec<f64> },
    #[error("unknown catalog entry '{0}'")]
    UnknownEntry(String),
    #[error("unknown check '{0}'")]
    UnknownCheck(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("cannot parse scenario: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
