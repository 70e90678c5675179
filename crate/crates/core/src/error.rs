use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {p}^{b} exceeds 2^31")]
    ModulusTooLarge { p: u64, b: u32 },

    #[error("ring parameters p={p} b={b} m={m} are out of range (need p^(bm) <= 2^31, b, m >= 1)")]
    ParameterTooLarge { p: u64, b: u32, m: usize },

    #[error("entry {value} is not reduced modulo {modulus}")]
    EntryOutOfRange { value: u64, modulus: u64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operands live over different rings")]
    RingMismatch,

    #[error("no solution to {lhs}*u = {rhs} (mod {modulus})")]
    NoSolution { lhs: u64, rhs: u64, modulus: u64 },

    #[error("set has {cardinality} elements, above the enumeration limit {limit}")]
    LimitExceeded { cardinality: BigUint, limit: u64 },

    #[error("submodule is not contained in the ambient module")]
    NotSubmodule,

    #[error("trace form is singular")]
    SingularTraceForm,

    #[error("invalid defining polynomial: {0}")]
    HPolyInvalid(String),

    #[error("cannot puncture to {keep} of {n} coordinate pairs")]
    InvalidPuncture { keep: usize, n: usize },

    #[error("{requested} pairs do not fit into {capacity} slots")]
    CapacityExceeded { requested: usize, capacity: usize },

    #[error("target {index} is zero")]
    ZeroTarget { index: usize },

    #[error("quotient rank {0} is odd")]
    OddRank(usize),

    #[error("extension does not match the decomposition: {0}")]
    MismatchedExtension(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("Hilbert space dimension {dim} exceeds the cap {cap}")]
    DimensionTooLarge { dim: u128, cap: usize },

    #[error("averaged stabilizer is not a projector: {0}")]
    NonProjector(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("value {value} at line {line}, column {column} is outside [0, {bound})")]
    Range {
        line: usize,
        column: usize,
        value: u64,
        bound: u64,
    },

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag used in JSON error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::ModulusTooLarge { .. } => "ModulusTooLarge",
            Error::ParameterTooLarge { .. } => "ParameterTooLarge",
            Error::EntryOutOfRange { .. } => "EntryOutOfRange",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::RingMismatch => "RingMismatch",
            Error::NoSolution { .. } => "NoSolution",
            Error::LimitExceeded { .. } => "LimitExceeded",
            Error::NotSubmodule => "NotSubmodule",
            Error::SingularTraceForm => "SingularTraceForm",
            Error::HPolyInvalid(_) => "HPolyInvalid",
            Error::InvalidPuncture { .. } => "InvalidPuncture",
            Error::CapacityExceeded { .. } => "CapacityExceeded",
            Error::ZeroTarget { .. } => "ZeroTarget",
            Error::OddRank(_) => "OddRank",
            Error::MismatchedExtension(_) => "MismatchedExtension",
            Error::InternalInvariantViolation(_) => "InternalInvariantViolation",
            Error::DimensionTooLarge { .. } => "DimensionTooLarge",
            Error::NonProjector(_) => "NonProjector",
            Error::Parse { .. } => "ParseError",
            Error::Range { .. } => "RangeError",
            Error::Io(_) => "Io",
        }
    }

    /// Errors caused by a configured size cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::LimitExceeded { .. } | Error::DimensionTooLarge { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
