use thiserror::Error;

/// Errors surfaced by the library. Internal consistency failures (such as a
/// functor output with non-commuting steps) panic instead: they indicate a
/// construction bug, not bad user input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point has a negative coordinate but the poset is the non-negative orthant")]
    NegativeCoordinate,

    #[error("operation `{op}` is not supported for this poset variant")]
    UnsupportedPoset { op: &'static str },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("region has no generators")]
    EmptyRegion,

    #[error("regions have mixed kinds (one up-set, one down-set)")]
    MixedKinds,

    #[error("step matrices do not commute at cell {cell} (axes {axis_a}, {axis_b})")]
    NonCommuting {
        cell: String,
        axis_a: usize,
        axis_b: usize,
    },

    #[error("finite poset Hasse relation is cyclic")]
    CyclicHasse,

    #[error("finite poset element {0} out of range")]
    FiniteElementOutOfRange(usize),

    #[error("translation family violates {flag}: {reason}")]
    TranslationFlag { flag: &'static str, reason: String },

    #[error("complexes do not match after refinement")]
    ComplexMismatch,

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("linear system is inconsistent")]
    InconsistentSystem,

    #[error("prime field element has a denominator divisible by the modulus")]
    BadModulus,
}
