use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bad weight {0}: expected a nonnegative even integer in this range")]
    BadWeight(i64),

    #[error("leading coefficient is zero; series is not invertible")]
    ZeroLeadingCoefficient,

    #[error("coefficient of q^{0} requested beyond the known precision")]
    OutOfPrecision(String),

    #[error("exponent {0} does not lie on the series' exponent grid")]
    OutOfGrid(String),

    #[error("form does not lie in the span of the given basis")]
    NotInSpan,

    #[error("insufficient precision: need {needed}, have {have}")]
    InsufficientPrecision { needed: usize, have: usize },

    #[error("series stores too few terms for the requested accuracy: need {needed}, have {have}")]
    InsufficientSeriesPrecision { needed: usize, have: usize },

    #[error("{0} is not an odd prime")]
    BadPrime(u64),

    #[error("s = {s} outside the allowed range [1, {max}]")]
    BadRange { s: i64, max: i64 },

    #[error("bad level/index argument: {0}")]
    BadN(u64),

    #[error("unsupported k = {0} for this representation-count formula")]
    BadK(u32),

    #[error("{0} is not a valid discriminant for this operation")]
    BadDiscriminant(i64),

    #[error("matrix is not in Γ0({0})")]
    BadMatrix(u64),

    #[error("evaluation point must lie in the upper half-plane")]
    NotInUpperHalfPlane,

    #[error("sign test inconclusive at the working precision")]
    Inconclusive,

    #[error("exact eigendata supported only up to degree 2; space has dimension {0}")]
    UnsupportedDimension(usize),

    #[error("coefficient table is missing a(p) for prime {0}")]
    MissingPrime(u64),

    #[error("bad input: {0}")]
    BadInput(String),

    #[error("computed ratios deviate from the expected vector: {0}")]
    RatioMismatch(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown atom `{name}` at offset {pos}")]
    UnknownAtom { pos: usize, name: String },
}

pub type Result<T> = std::result::Result<T, Error>;
