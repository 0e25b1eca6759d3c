use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinSetError {
    #[error("block union requires max of left block ({left_max}) below min of right block ({right_min})")]
    PrecedenceViolation { left_max: u32, right_min: u32 },
    #[error("element {element} does not fit a {bits}-bit universe")]
    UniverseOverflow { element: u32, bits: u32 },
    #[error("code {code} does not fit a {bits}-bit universe")]
    CodeOverflow { code: u128, bits: u32 },
    #[error("cannot parse finite set from {0:?}")]
    Parse(String),
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("invalid catalog file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("catalog has no staged families")]
    NoFamilies,
    #[error("catalog has no sigma-2 relations")]
    NoRelations,
    #[error("target family {index} has {found} members, expected k = {expected}")]
    TargetSize { index: usize, found: usize, expected: usize },
    #[error("target family {index} contains the empty set or a repeated member")]
    BadTarget { index: usize },
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("certified bounds of relation {relation} fail at {set}")]
    BoundCertification { relation: String, set: String },
    #[error(transparent)]
    FinSet(#[from] FinSetError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("set {set} has initial-segment witnesses at indices {first} and {second}")]
    MultipleWitness { set: String, first: usize, second: usize },
    #[error("set {set} has {count} correct unblocked decompositions")]
    MultipleCorrectUnblocked { set: String, count: usize },
    #[error("set {set} has {count} primary decompositions")]
    MultiplePrimary { set: String, count: usize },
    #[error("unknown coloring id {0:?}")]
    UnknownId(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("search universe exhausted: {0}")]
    UniverseExhausted(String),
    #[error("no half-match witness for {set}")]
    NoWitness { set: String },
    #[error("certificate failed: {0}")]
    CertificateFailed(String),
}
