use thiserror::Error;

pub type Result<T, E = BgxError> = std::result::Result<T, E>;

/// A failed right-module axiom: `(x·Sq^a)·Sq^b` disagrees with the Adem expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdemViolation {
    pub a: u32,
    pub b: u32,
    pub degree: i32,
    pub basis_index: usize,
}

#[derive(Debug, Error)]
pub enum BgxError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("outside domain: {0}")]
    Domain(String),

    #[error("module is not unstable: {0}")]
    NotUnstable(String),

    #[error("truncation window exhausted: degree {needed} lies beyond the exact range (through {exact_through})")]
    Window { needed: i32, exact_through: i32 },

    #[error("resolution window exhausted: need internal degrees down to {needed}, computed only to {floor}")]
    ResolutionFloor { needed: i32, floor: i32 },

    #[error(
        "Adem relation violated: Sq^{} Sq^{} on basis vector {} in degree {}",
        .0.a, .0.b, .0.basis_index, .0.degree
    )]
    Adem(AdemViolation),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl BgxError {
    pub fn contract(msg: impl Into<String>) -> Self {
        BgxError::Contract(msg.into())
    }
}
