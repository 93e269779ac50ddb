use thiserror::Error;

/// Errors raised by the arithmetic, coefficient, resonator and engine layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("factor table limit {limit} needs {bytes} bytes, over the {budget}-byte budget")]
    TableTooLarge { limit: u64, bytes: u64, budget: u64 },

    #[error("factor table limit must be at least 2, got {0}")]
    TableTooSmall(u64),

    #[error("{n} exceeds the factor table limit {limit}")]
    BeyondTable { n: u64, limit: u64 },

    #[error("argument must be positive")]
    ZeroArgument,

    #[error("discriminant must be nonzero")]
    ZeroDiscriminant,

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("epsilon {0} is out of range")]
    EpsilonOutOfRange(f64),

    #[error("range {lo}..={hi} is empty")]
    EmptyRange { lo: u64, hi: u64 },

    #[error("no fundamental discriminants with {lo} <= |d| <= {hi}")]
    EmptyFamily { lo: u64, hi: u64 },

    #[error("coefficient function has no value at prime {p} (stored limit {limit})")]
    PrimeBeyondLimit { p: u64, limit: u64 },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("phase for prime {p} is not finite")]
    NonFinitePhase { p: u64 },

    #[error("phase file line {line}: {msg}")]
    PhaseParse { line: usize, msg: String },

    #[error("resonator length must be at least 16, got {0}")]
    ResonatorTooShort(f64),

    #[error("resonator window holds {0} primes, at most 64 supported")]
    TooManyWindowPrimes(usize),

    #[error("resonator support would exceed the cap of {cap} entries")]
    SupportTooLarge { cap: usize },

    #[error("invalid support entry {key}: {msg}")]
    InvalidSupport { key: u64, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
