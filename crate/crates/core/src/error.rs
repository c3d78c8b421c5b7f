use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("surface degree {0} is outside 1..=8")]
    SurfaceDegree(i64),
    #[error("surface degree mismatch: {0} vs {1}")]
    DegreeMismatch(u8, u8),
    #[error("coefficient vector has length {got}, expected {expected}")]
    CoeffLength { expected: usize, got: usize },
    #[error("D_ab requires a, b not both even (got a={0}, b={1})")]
    InvalidParity(i64, i64),
    #[error("class is not a root: {0}")]
    NotARoot(String),
    #[error("pullback must go to a strictly smaller degree ({from} -> {to})")]
    Pullback { from: u8, to: u8 },
    #[error("class has nonzero anticanonical degree {0}; project first")]
    NonzeroDegree(i64),
    #[error("vector is not in the E8 lattice: {0}")]
    NotInLattice(String),
    #[error("rank must be nonzero")]
    ZeroRank,
    #[error("class is not exceptional-consistent: chi = {num}/{den} is not integral")]
    NotExceptional { num: i64, den: i64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("gcd(d, r) must be 1 (got d={0}, r={1})")]
    NotCoprime(i64, i64),
    #[error("rank must be positive (got {0})")]
    NonPositiveRank(i64),
    #[error("order index k={0} is outside 5..=9")]
    OrderIndex(i64),
    #[error("norm must be negative (got {0})")]
    NonNegativeNorm(i64),
    #[error("inductive step failed: {0}")]
    InductiveStep(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
}
