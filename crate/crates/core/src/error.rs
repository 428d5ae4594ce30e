use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("modulus is reducible over F_2")]
    ReducibleModulus,
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("field size {0} is outside the supported range (q <= 2^20)")]
    FieldSize(u64),
    #[error("extension fields are only supported in characteristic 2 (got p = {0})")]
    UnsupportedExtension(u32),
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("element {value} is not a canonical element of F_{q}")]
    ForeignElement { value: u32, q: u32 },
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("function has a pole at evaluation point {0}")]
    Pole(String),
    #[error("evaluation rows have rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("{what}: enumeration size {size} exceeds guard {limit}")]
    Guard {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("share vector is not in the span of the scheme")]
    InconsistentShares,
    #[error("config: {0}")]
    Config(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard { .. })
    }
}
