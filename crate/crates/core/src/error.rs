use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unstable signature: 2g-2+n must be positive (g={g}, n={n})")]
    Unstable { g: u32, n: u32 },

    #[error("signature mismatch: expected (g={expected_g}, n={expected_n}), found (g={found_g}, n={found_n})")]
    SignatureMismatch {
        expected_g: u32,
        expected_n: u32,
        found_g: u32,
        found_n: u32,
    },

    #[error("invalid boundary index: {0}")]
    InvalidBoundary(String),

    #[error("non-canonical or malformed key {key:?}: {reason}")]
    BadKey { key: String, reason: String },

    #[error("malformed class document: {0}")]
    Json(String),

    #[error("unknown class name {0:?}")]
    UnknownName(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("linear system is singular: {0}")]
    Singular(String),

    #[error("LP is unbounded")]
    Unbounded,

    #[error("consistency check failed: {0}")]
    Inconsistent(String),
}
