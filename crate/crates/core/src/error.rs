use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid conjugation: {0}")]
    InvalidConjugation(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("pair has no minimal order within {0}")]
    NotClassified(usize),

    #[error("operation requires kind {expected}, got {actual}")]
    WrongKind { expected: &'static str, actual: &'static str },

    #[error("pair kinds differ")]
    KindMismatch,

    #[error("pair is not strict at the required order")]
    NotStrict,

    #[error("right factors are linearly dependent")]
    DependentFactors,

    #[error("commutator [{0}] is nonzero")]
    NotCommuting(&'static str),

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("pair is not a member at order {0}")]
    NotMember(usize),

    #[error("(B*, B) is not a strict Delta member of order {0}")]
    NotStrictIsometry(usize),

    #[error("isometry order {0} is even")]
    EvenOrder(usize),

    #[error("requested isometry order {0} is even")]
    EvenOrderRequested(usize),

    #[error("numerically degenerate spectrum: {0}")]
    NumericallyDegenerate(String),

    #[error("nilpotency index {index} exceeds dimension {dim}")]
    IndexTooLarge { index: usize, dim: usize },

    #[error("invalid generator config: {0}")]
    InvalidConfig(String),

    /// A verified conclusion did not hold. Signals a bug or a false statement.
    #[error("violation: {0}")]
    Violation(String),
}
