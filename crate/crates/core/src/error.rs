use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point:?} is excluded from the chart domain ({reason})")]
    PointExcluded { point: Vec<f64>, reason: String },
    #[error("non-finite value encountered while evaluating {what}")]
    NonFiniteValue { what: String },
    #[error("metric is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    SingularMetric { min_eigenvalue: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("sign violation: {0}")]
    SignViolation(String),
    #[error("critical point: |grad f| = {grad_norm:e}")]
    CriticalPoint { grad_norm: f64 },
    #[error("scalar curvature is not the constant 2*epsilon: {0}")]
    NonconstantScalar(String),
    #[error("J is not almost Hermitian: {0}")]
    NotAlmostHermitian(String),
    #[error("unknown entry `{0}`")]
    UnknownEntry(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("incompatible space/solution pair: {0}")]
    IncompatiblePair(String),
    #[error("warping function not positive ({0:e})")]
    NonPositiveWarp(f64),
    #[error("case mismatch: {0}")]
    CaseMismatch(String),
    #[error("division by zero: {0}")]
    ZeroDivision(String),
    #[error("sign mismatch: {0}")]
    SignMismatch(String),
    #[error("radicand negative ({value:e}) at t = {t}")]
    RadicandNegative { t: f64, value: f64 },
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("monotonicity violated: {0}")]
    MonotonicityViolated(String),
    #[error("profile crosses zero near t = {t}")]
    ZeroCrossing { t: f64 },
    #[error("symmetric part of the derivation vanishes")]
    ZeroSymmetricPart,
    #[error("domain exhausted: accepted {accepted} of {requested} requested points")]
    DomainExhausted { accepted: usize, requested: usize },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
