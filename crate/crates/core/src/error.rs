use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("poset relation contains a cycle: {0}")]
    CycleDetected(String),

    #[error("duplicate element: {0}")]
    DuplicateElement(String),

    #[error("unknown element: {0}")]
    UnknownElement(String),

    #[error("boundary maps do not compose to zero between degrees {degree} and {}", degree + 1)]
    NotAChainComplex { degree: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrices over different rings: {0} vs {1}")]
    RingMismatch(String, String),

    #[error("attaching chain in degree {degree} is not a cycle")]
    NotACycle { degree: usize },

    #[error("subcomplex is not closed under boundary (cell {witness})")]
    NotClosedSubcomplex { witness: String },

    #[error("subcomplexes belong to different parent complexes")]
    ParentMismatch,

    #[error("unsupported coefficient ring: {0}")]
    UnsupportedRing(String),

    #[error("target panel {0} is not acyclic over the requested ring")]
    TargetPanelNotAcyclic(String),

    #[error("chain extension failed at cell {0}; acyclicity contract violated")]
    ExtensionFailed(String),

    #[error("tree construction requires dimension <= 1, got {0}")]
    DimensionTooLarge(usize),

    #[error("full development requires an explicit finite ambient group")]
    InfiniteGroupRequiresRadius,

    #[error("radius-truncated development requires a symbolic ambient group with normal forms")]
    RadiusRequiresNormalForms,

    #[error("generators do not define a subgroup of the ambient group: {0}")]
    NotASubgroup(String),

    #[error("complex is not flag: clique {{{0}}} spans no simplex")]
    NotFlag(String),

    #[error("vertex group at {0} is trivial")]
    TrivialVertexGroup(String),

    #[error("unknown generator: {0}")]
    UnknownGenerator(String),

    #[error("cell {0} carries no provenance label")]
    MissingProvenance(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
