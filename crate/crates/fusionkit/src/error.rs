//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("resource cap exceeded: {what} = {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("subgroup is not normal in its parent: {context}")]
    NotNormal { context: String },

    #[error("fusion systems have mismatched underlying groups: {context}")]
    MismatchedUnderlying { context: String },

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("unresolvable catalog spec `{0}`: {1}")]
    BadSpec(String, String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("object {object} is not p-centric: |C_G(P)| = {centralizer_order}, |Z(P)|·|O_p'(C_G(P))| = {split_order}")]
    NotPCentric {
        object: String,
        centralizer_order: usize,
        split_order: usize,
    },

    #[error("ill-defined coset composition at ({p}, {q}): witness g = {witness}")]
    IllDefinedComposition { p: String, q: String, witness: usize },

    #[error("local model verification failed: {axiom}: {detail}")]
    ModelVerification { axiom: &'static str, detail: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
