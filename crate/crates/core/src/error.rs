use thiserror::Error;

/// Errors raised by the certification pipeline.
///
/// Failed *verdicts* (a packing that is not compact, a radius whose angle sum
/// is not 2π) are ordinary return values; these variants are reserved for
/// conditions where a computation could not reach a verdict at all.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("precision exhausted at {bits} bits during {stage}")]
    PrecisionExhausted { stage: String, bits: u32 },

    #[error("operands live over different base fields")]
    MismatchedBase,

    #[error("elimination degenerated at stage {0}")]
    EliminationDegenerate(String),

    #[error("dihedral angle undefined at this radius: {0}")]
    UndefinedAngle(String),

    #[error("search exceeded node budget of {0}")]
    NodeBudgetExceeded(u64),

    #[error("shell embedding does not close: {0}")]
    FoldInconsistency(String),

    #[error("not a close-packing: {0}")]
    NotClosePacking(String),

    #[error("large sphere {index} matches no known shell")]
    ShellUnmatched { index: usize },

    #[error("layer structure not found: {0}")]
    LayerStructureNotFound(String),

    #[error("invalid stacking sequence {0:?}: {1}")]
    InvalidStacking(String, String),

    #[error("invalid necklace word {0:?}")]
    InvalidWord(String),

    #[error("degenerate tetrahedron: {0}")]
    DegenerateTetrahedron(String),
}

pub type Result<T> = std::result::Result<T, Error>;
