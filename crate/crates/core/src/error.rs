use thiserror::Error;

/// Errors raised by the homology engine.
///
/// Each variant corresponds to one failure class of the public API; the CLI
/// maps them onto exit codes (see [`Error::exit_code`]).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("composition of maps is nonzero: {0}")]
    CompositionNonzero(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("truncation too tight: {0}")]
    TruncationTooTight(String),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("{divisor} does not divide {dividend}")]
    NotDivisible { divisor: String, dividend: String },
    #[error("bound too small: {0}")]
    BoundTooSmall(String),
    #[error("degree outside the certified range: {0}")]
    Range(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported filtration: {0}")]
    UnsupportedFiltration(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("empty range: {0}")]
    RangeEmpty(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams(_)
            | Error::InvalidModulus(_)
            | Error::NotDivisible { .. }
            | Error::DimensionMismatch(_) => 2,
            Error::TruncationTooTight(_)
            | Error::BoundTooSmall(_)
            | Error::Range(_)
            | Error::OutOfRange(_)
            | Error::RangeEmpty(_) => 3,
            Error::Parse(_) | Error::InvalidAlgebra(_) | Error::UnsupportedFiltration(_) => 4,
            Error::CompositionNonzero(_) | Error::NotAChainMap(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
