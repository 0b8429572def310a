//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in exact operator arithmetic.
///
/// The arithmetic itself is total on its mathematical domain; each variant
/// names a precondition violation or a genuine obstruction of the underlying
/// field (rational functions are not linearly differentially closed, and
/// their derivation is not onto).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("evaluation at a pole: denominator vanishes at 0")]
    PoleAtZero,

    #[error("no rational antiderivative: the reduction leaves a nonzero logarithmic part")]
    NoRationalAntiderivative,

    #[error("division by the zero operator")]
    DivisionByZeroOperator,

    #[error("solutions are linearly dependent over the constants")]
    DependentSolutions,

    #[error("the given function is not a solution of the operator")]
    NotASolution,

    #[error("zero denominator operator in a fraction")]
    ZeroDenominator,

    #[error("inverse of the zero element")]
    ZeroInverse,

    #[error("operation undefined for the zero element")]
    ZeroElement,

    #[error("input functions are linearly dependent over the constants")]
    DependentInput,

    #[error("no suitable multiplier found within search budget {budget}")]
    SearchBudgetExceeded { budget: u32 },

    #[error("denominator does not split into first-order factors with rational-function kernels (search bound {bound})")]
    DenominatorNotSplit { bound: usize },

    #[error("product requires an antiderivative that is not a rational function")]
    AntiderivativeObstruction,

    #[error("element is zero to the tracked precision; inverse undefined")]
    ZeroToPrecision,

    #[error("zero input where a nonzero element is required")]
    ZeroInput,

    #[error("trace defect did not vanish on the stability window [{k0}, {k1}]")]
    RankNotStabilized { k0: usize, k1: usize },

    #[error("coefficient is not a polynomial; the endomorphism realization needs polynomial coefficients")]
    NonPolynomialCoefficient,

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("exponent out of supported range")]
    ExponentOutOfRange,

    #[error("expected {expected}, found a value of a different kind")]
    KindMismatch { expected: &'static str },
}

impl Error {
    pub(crate) fn syntax(offset: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            offset,
            message: message.into(),
        }
    }
}
