use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported field selector `{0}` (expected one of q, sqrt2, sqrt5, sqrt13, sqrt17)")]
    UnsupportedField(String),

    #[error("field ℚ(√{0}) has a fundamental unit of norm +1; narrow class number is not 1")]
    NarrowClassNumber(i64),

    #[error("operation requires a nonzero element")]
    ZeroElement,

    #[error("elements are not coprime")]
    NotCoprime,

    #[error("integer overflow in exact ring arithmetic")]
    Overflow,

    #[error("pole of the Gamma function at a non-positive integer")]
    PoleAtNonPositiveInteger,

    #[error("iteration did not converge: {0}")]
    NonConvergence(String),

    #[error("quadrature did not converge after {levels} levels (last difference {last_diff:e})")]
    QuadratureNonConvergence { levels: u32, last_diff: f64 },

    #[error("truncation too small: tail bound {tail:e} exceeds requested {target:e}")]
    TruncationTooSmall { tail: f64, target: f64 },

    #[error("element is not totally positive")]
    NotTotallyPositive,

    #[error("element is not in the inverse different")]
    NotInInverseDifferent,

    #[error("invalid evaluation point: {0}")]
    InvalidEvalPoint(String),

    #[error("denominator is too small relative to the tail bound ({0:e})")]
    DegenerateDenominator(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
