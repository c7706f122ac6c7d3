use thiserror::Error;

/// Errors raised by the library. Every variant corresponds to a violated
/// precondition or an internal consistency check.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Lie type {lie_type}{rank}: {reason}")]
    InvalidType {
        lie_type: String,
        rank: usize,
        reason: String,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Weyl group too large: |W| = {order} exceeds the enumeration bound {bound}")]
    GroupTooLarge { order: u128, bound: usize },

    #[error("elements belong to different root systems")]
    MixedRootSystems,

    #[error("invalid Weyl word: {0}")]
    InvalidWord(String),

    #[error("not a diagram automorphism: {0}")]
    InvalidDiagramAut(String),

    #[error("invalid Vogan diagram: {0}")]
    InvalidVogan(String),

    #[error("{0} is not a d-twisted involution")]
    NotTwistedInvolution(String),

    #[error("query not geometrically realizable: intersection dimension {intersection_dim} < 0")]
    NotRealizable { intersection_dim: i64 },

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("ill-conditioned projection: condition number {condition:.3e}")]
    IllConditioned { condition: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no sample points landed in the requested (u, w) pair: {0}")]
    NoSamples(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("verification tolerance exceeded: {0}")]
    Tolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
