use thiserror::Error;

/// Errors raised by the arithmetic and character machinery.
///
/// Variants fall in two families: domain errors (the input violates a
/// mathematical precondition) and integrity errors (a value that theory
/// guarantees to be integral or exact came out otherwise, which means a bug).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime set must contain odd primes only, got {0}")]
    EvenPrime(u64),
    #[error("prime set entries must be distinct and nonempty")]
    BadPrimeSet,
    #[error("{value} is not a unit modulo {prime}")]
    NotUnit { value: String, prime: u64 },
    #[error("p-adic logarithm needs an argument congruent to 1 mod {0}")]
    LogDomain(u64),
    #[error("supersingular reduction at {prime}: a_{prime} = {trace} vanishes mod {prime}")]
    Supersingular { prime: u64, trace: i64 },
    #[error("curve has bad reduction at {0}")]
    BadReduction(u64),
    #[error("curve is singular (discriminant 0)")]
    SingularCurve,
    #[error("{value} has negative {prime}-adic valuation")]
    NotIntegral { value: String, prime: u64 },
    #[error("cyclotomic order {m} is not coprime to {prime}")]
    Ramified { m: u64, prime: u64 },
    #[error("precision exhausted: needed {needed} digits, have {available}")]
    Precision { needed: u32, available: u32 },
    #[error("truncation order {0} is too small")]
    Truncation(usize),
    #[error("series is not invertible under composition: {0}")]
    NotInvertible(String),
    #[error("not a character: {0}")]
    NotCharacter(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("affine formula hit a non-invertible denominator; use the formal-group path")]
    UseFormalParameter,
    #[error("point does not reduce to the identity mod {0}")]
    NotInFormalGroup(u64),
    #[error("prime {0} exceeds the naive point counting budget")]
    CountingBudget(u64),
    #[error("integrality failure: {0}")]
    Integrity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
