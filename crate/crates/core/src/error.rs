use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole on the frequency grid at z = {z_re:+.6} {z_im:+.6}i")]
    PoleOnGrid { z_re: f64, z_im: f64 },
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },
    #[error("not proper: {0}")]
    NotProper(String),
    #[error("invalid: {0}")]
    Invalid(String),
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("unknown label `{label}` at {pointer}")]
    UnknownLabel { label: String, pointer: String },
    #[error("no disconnecting set exists: {0}")]
    NoCutExists(String),
    #[error("matrix singular at omega = {omega:.6}")]
    SingularAtFrequency { omega: f64 },
    #[error("disconnecting-set violation: max |T31| = {max:.3e}")]
    StructuralViolation { max: f64 },
    #[error("Riccati iteration did not converge after {iterations} iterations")]
    RiccatiDivergence { iterations: usize },
    #[error("noise spectrum not boundedly invertible: {0}")]
    NoiseSingular(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("simulation blew up at sample {sample}")]
    NumericalBlowup { sample: usize },
    #[error("order mismatch: {0}")]
    OrderMismatch(String),
    #[error("estimation did not converge: {0}")]
    NonConvergence(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
