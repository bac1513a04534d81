use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),
    #[error("gamma function overflows at x = {0}")]
    Overflow(f64),
    #[error("argument out of domain for {what}: {value}")]
    Domain { what: &'static str, value: f64 },
    #[error("finite-difference step underflows at lambda = {0}")]
    StepUnderflow(f64),
    #[error("function is not positive at {at} (value {value})")]
    NonPositiveValue { at: f64, value: f64 },
    #[error("function returned a non-finite value at {0}")]
    NonFinite(f64),
    #[error("quadrature did not converge: estimate {estimate}, error {error}")]
    QuadratureNonConvergence { estimate: f64, error: f64 },
    #[error("oscillatory quadrature did not converge after {panels} panels (estimate {estimate})")]
    OscillatoryNonConvergence { panels: usize, estimate: f64 },
    #[error("H vanishes at lambda = {0}; the tail prediction divides by zero")]
    DegenerateH(f64),
    #[error("g vanishes at u = {0}; the exponent is purely quadratic there")]
    DegenerateG(f64),
    #[error("index {index} outside the allowed range {allowed}")]
    IndexOutOfRange { index: f64, allowed: &'static str },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("process {0} is not declared unimodal")]
    NotUnimodal(String),
    #[error("no regular-variation index declared for {quantity} {regime}")]
    MissingRegVar { quantity: &'static str, regime: &'static str },
    #[error("laplace inversion unstable: {primary} vs {secondary}")]
    InversionInstability { primary: f64, secondary: f64 },
    #[error("exp(-t psi(u)) u^(d-1) is not integrable; density at the origin does not exist")]
    NonIntegrable,
    #[error("tail {0} is below the precision floor 1e-12")]
    PrecisionFloor(f64),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown process {0}")]
    UnknownProcess(String),
    #[error("invalid parameter {name}: {reason}")]
    BadParam { name: String, reason: String },
    #[error("no oracle available: {0}")]
    NoOracle(String),
}
