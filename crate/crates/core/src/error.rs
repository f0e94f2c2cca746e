use thiserror::Error;

/// Errors raised by the exact-computation engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("arity {n} exceeds the cap {cap} for {what}")]
    ArityOverCap { n: usize, cap: usize, what: &'static str },

    #[error("arity must be at least 1")]
    ZeroArity,

    #[error("size {size} out of range for arity {n} (max {max})")]
    SizeOutOfRange { n: usize, size: u64, max: u64 },

    #[error("depth {depth} exceeds cap {cap}; use the implicit evaluator")]
    DepthOverCap { depth: u32, cap: u32 },

    #[error("invalid lex spec: numerator {k} exceeds 2^{m}")]
    InvalidLexSpec { m: u32, k: u64 },

    #[error("coordinate {index} out of range 1..={n}")]
    CoordinateOutOfRange { index: usize, n: usize },

    #[error("invalid coordinate set: {0}")]
    InvalidCoordSet(String),

    #[error("base point is nonzero on the section coordinates")]
    BasePointNotZeroOnSection,

    #[error("crossover probability {alpha} not allowed here: {reason}")]
    InvalidAlpha { alpha: f64, reason: &'static str },

    #[error("invalid chord interval: {0}")]
    InvalidInterval(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("posterior entry {value} lies outside [0,1] beyond rounding slack")]
    PosteriorOutOfRange { value: f64 },

    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
