use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A defining integer is outside the range the computation accepts.
    #[error("{0}")]
    InvalidParameter(String),

    /// The inputs are well formed but a theorem the computation relies on
    /// does not cover them.
    #[error("theorem hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("gcd(0, 0) is undefined")]
    ZeroGcd,

    #[error("({0}, {1}) is not a coprime pair")]
    NotCoprime(u64, u64),

    #[error("({0}, {1}) is an endpoint of the chain and has no parents or neighbours")]
    Endpoint(u64, u64),

    #[error("({0}, {1}) is not an intermediate divisor of this chain")]
    NotInChain(u64, u64),

    #[error("index {index} outside [{lo}, {hi}]")]
    IndexOutOfRange { index: i64, lo: i64, hi: i64 },

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error("enumeration needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("reduction mod {p} is singular at {point:?}")]
    SingularReduction { p: u64, point: Vec<u64> },

    #[error("singularity is not isolated: Milnor algebra does not vanish in degree {degree}")]
    NonIsolated { degree: u32 },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
