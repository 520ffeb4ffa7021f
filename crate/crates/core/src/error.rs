use thiserror::Error;

/// Errors surfaced by the engine. Numerical check failures inside a
/// verification suite are reported as failed entries, not as errors;
/// these variants cover invalid inputs and structural breakdowns.
#[derive(Error, Debug, Clone)]
pub enum Error {
    #[error("unsupported Lie type/rank combination: {0}{1}")]
    UnsupportedType(char, usize),

    #[error("q must lie strictly between 0 and 1, got {0}")]
    QOutOfRange(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("weight {0:?} is not dominant integral")]
    NotDominant(Vec<i64>),

    #[error("{context}: matrix solve is rank deficient (relative smallest singular value {sigma:.3e})")]
    RankDeficient { context: String, sigma: f64 },

    #[error("{context}: residual {residual:.3e} exceeds gate {gate:.3e}")]
    ResidualGate {
        context: String,
        residual: f64,
        gate: f64,
    },

    #[error("sl2 string decomposition failed for node {node}: {detail}")]
    Decomposition { node: usize, detail: String },

    #[error("invariant subspace has dimension {found}, expected {expected}")]
    InvariantDimension { found: usize, expected: usize },

    #[error("nonpositive diagonal entry {value:.3e} at index {index} in {context}")]
    NonPositiveDiagonal {
        context: String,
        index: usize,
        value: f64,
    },

    #[error("tensor size {0} exceeds cap {1}")]
    SizeCap(usize, usize),

    #[error("operator legs mismatch: {0} vs {1}")]
    LegMismatch(usize, usize),

    #[error("safe block exhausted: truncation {n} cannot host block {m} with shift budget {budget}")]
    BlockExhausted { n: usize, m: usize, budget: usize },

    #[error("io error: {0}")]
    Io(String),
}
