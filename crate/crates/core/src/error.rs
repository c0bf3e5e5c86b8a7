use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("Genocchi number G_{0} is not an integer")]
    NonIntegral(usize),

    #[error("B_{index} has p = {p} in its denominator ((p-1) divides {index})")]
    StaudtClausenPole { index: usize, p: u32 },

    #[error("field of order {p}^{degree} exceeds the size bound {bound}")]
    SizeExceeded { p: u32, degree: usize, bound: u64 },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("inadmissible point: a denominator vanishes")]
    InadmissiblePoint,

    #[error("index {index} out of range (maximum {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("unknown catalog id `{0}`")]
    UnknownId(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("budget exceeded for {what}: needs {needed}, budget {budget}")]
    BudgetExceeded { what: String, needed: u128, budget: u128 },

    #[error("degenerate argument {0}: constant 0 or 1")]
    DegenerateArgument(String),

    #[error("weight {n} exceeds the configured depth {depth}")]
    DepthExceeded { n: usize, depth: usize },

    #[error("singular parameter choice at level {level}: {reason}")]
    SingularChoice { level: usize, reason: String },

    #[error("no ordering of the outcomes avoids a division by zero mod {0}")]
    NoAdmissibleOrdering(u32),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
