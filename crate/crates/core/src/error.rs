use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live over different fields")]
    DescriptorMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be monic of positive degree")]
    NotMonic,
    #[error("modulus is reducible over its base field")]
    Reducible,
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("zero element has no norm")]
    ZeroElement,
    #[error("factorization unsupported: {0}")]
    UnsupportedFactorization(String),
    #[error("tower unsupported: {0}")]
    UnsupportedTower(String),
    #[error("no canonical class available: {0}")]
    UnsupportedField(String),
    #[error("unsupported place: {0}")]
    UnsupportedPlace(String),
    #[error("symbol entries must be nonzero")]
    ZeroEntry,
    #[error("weight mismatch: expected {expected}, found {found}")]
    WeightMismatch { expected: usize, found: usize },
    #[error("cyclic differences must be nonzero")]
    DegenerateDifferences,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("valuation of zero is undefined")]
    ZeroInput,
    #[error("transfer recursion invariant violated: {0}")]
    RecursionInvariantViolated(String),
    #[error("tuples have different arity or size")]
    ArityMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrices do not commute")]
    NotCommuting,
    #[error("matrix is singular")]
    Singular,
    #[error("determinant is not a unit of k[t]")]
    NotUnitDeterminant,
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
