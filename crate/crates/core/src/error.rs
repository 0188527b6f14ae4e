use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mixed scalar modes in one computation")]
    MixedMode,
    #[error("constant term must be 1, got {0}")]
    ConstantTermNotOne(String),
    #[error("no local data for prime {0}")]
    MissingPrime(u64),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("P_max mismatch: {0} vs {1}")]
    PmaxMismatch(u64, u64),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("twist value at prime {0} is zero")]
    ZeroTwist(u64),
    #[error("prime {0} is ramified; dual data must be supplied explicitly")]
    RamifiedContragredient(u64),
    #[error("no central-character value supplied at ramified prime {0}")]
    MissingCentralValue(u64),
    #[error("not divisible, remainder {0}")]
    NotDivisible(String),
    #[error("unsupported local shape: {0}")]
    UnsupportedShape(String),
    #[error("partition must satisfy l1 >= l2 >= l3 >= 0: ({0}, {1}, {2})")]
    BadPartition(i64, i64, i64),
    #[error("shape too large for tableau enumeration (l1 = {0} > 12)")]
    ShapeTooLarge(u32),
    #[error("character is not primitive (modulus {modulus}, conductor {conductor})")]
    NotPrimitive { modulus: u64, conductor: u64 },
    #[error("averaging window violated: {0}")]
    WindowViolation(String),
    #[error("Gauss sum vanishes")]
    ZeroGaussSum,
    #[error("pole at s = 1")]
    Pole,
    #[error("singular matrix")]
    Singular,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("cannot parse `{0}`")]
    Parse(String),
}

impl Error {
    pub(crate) fn parse(token: &str) -> Self {
        Error::Parse(token.to_string())
    }
}
