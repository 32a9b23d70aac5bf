use thiserror::Error;

/// Errors surfaced by the exact-computation pipeline.
///
/// Mathematical check failures are not errors: verification routines report
/// them as data. Errors here are contract violations (mismatched algebras,
/// inconsistent linear systems that theory says must be consistent, ...).
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("operands belong to different algebras")]
    AlgebraMismatch,

    #[error("operands use different Lie bases")]
    BasisMismatch,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid structure constants: {0}")]
    InvalidStructureConstants(String),

    #[error("invalid algebra parameters: {0}")]
    InvalidAlgebra(String),

    #[error("element exceeds the degree cutoff: {0}")]
    CutoffExceeded(String),

    #[error("scalar-line operand (tensor arity -1) is not allowed in products or brackets")]
    ScalarOperand,

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("r is not triangular")]
    NotTriangular,

    #[error("RHS not exact: {0}")]
    RhsNotExact(String),

    #[error("obstruction at order {order} is not a coboundary; class witness: {class}")]
    Obstructed { order: usize, class: String },

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("block dimension {0} exceeds the configured guard {1}")]
    BlockTooLarge(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),
}
