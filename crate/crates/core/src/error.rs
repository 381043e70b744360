use alloc::string::String;

use crate::universe::Universe;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("universe mismatch: expected {expected}, found {found}")]
    UniverseMismatch { expected: Universe, found: Universe },

    /// A gap in the classification rule table. Never silently answered.
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    #[error("preimage not representable: {0}")]
    PreimageNotRepresentable(String),

    #[error("invalid atom: {0}")]
    InvalidAtom(String),

    #[error("partition {0} has finitely many blocks")]
    FinitePartition(String),

    #[error("ideal must be admissible when a piece tails to its value")]
    AdmissibilityRequired,

    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("point {0} is not in the codomain")]
    PointNotInSpace(String),

    #[error("map is not continuous: {0}")]
    NotContinuous(String),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("function is not I^J-convergent to the requested point ({0})")]
    NotIhjConvergent(String),

    #[error("family member {0} is not in the ideal")]
    FamilyNotInIdeal(usize),

    #[error("sample {0} is not in the ideal")]
    SampleNotInIdeal(usize),

    #[error("inconsistency found: {0}")]
    InconsistencyFound(String),

    #[error("size {size} outside supported range {min}..={max}")]
    SizeTooLarge { size: usize, min: usize, max: usize },
}
