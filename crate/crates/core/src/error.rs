use thiserror::Error;

/// Errors raised by the workbench.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid field specification: {0}")]
    InvalidField(String),

    #[error("modulus {0:?} is reducible over F_{1}")]
    ReducibleModulus(Vec<u32>, u32),

    #[error("enumeration of {size} items exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u64 },

    #[error("invalid polynomial system: {0}")]
    InvalidSystem(String),

    #[error("malformed system file: {0}")]
    Parse(String),

    #[error("dimension estimate inconclusive: slices say {slices}, growth says {growth}")]
    InconclusiveDimension { slices: i32, growth: i32 },

    #[error("the variety is empty")]
    EmptyVariety,

    #[error("recombination failed at stage {stage}: {reason}")]
    RecombinationFailed { stage: usize, reason: String },

    #[error("recombination output failed verification: {0}")]
    RecombinationUnverified(String),

    #[error("series precondition violated: {0}")]
    Series(String),

    #[error("no rational function of degree <= {0} matches the series")]
    NoPadeSolution(usize),

    #[error("rational function of degree <= {degree} fails validation at coefficient {index}")]
    PadeValidation { degree: usize, index: usize },

    #[error("inclusion-exclusion identity failed at m = {m}")]
    IdentityMismatch { m: u32 },

    #[error("precision failure: {0}")]
    Precision(String),

    #[error("Newton iteration stagnated after {0} steps")]
    NewtonStagnation(usize),

    #[error("splitting product computed to degree {have}, matrix needs {need}")]
    InsufficientSplittingDegree { have: usize, need: usize },

    #[error("requested {requested} Fredholm coefficients from only {traces} traces")]
    FredholmRange { requested: usize, traces: usize },

    #[error("weight enumeration exhausted the box of size {0} without a witness")]
    WeightBoxExhausted(u32),

    #[error("closed-form weight bound {closed} exceeds the enumerated minimum {enumerated}")]
    WeightBoundViolated { closed: String, enumerated: u32 },

    #[error("index out of range: {0}")]
    Range(String),
}

pub type Result<T> = std::result::Result<T, Error>;
