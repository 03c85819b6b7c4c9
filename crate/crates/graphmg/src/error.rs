use crate::laplacian::Violation;

/// Errors reported by graph construction, file parsing, and the solver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("entry ({row}, {col}) out of range for a {nrows}x{ncols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        nrows: usize,
        ncols: usize,
    },

    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },

    #[error("edge ({u}, {v}) has nonpositive weight {w}")]
    NonpositiveWeight { u: usize, v: usize, w: f64 },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("matrix is empty")]
    EmptyMatrix,

    #[error("matrix is not a graph Laplacian ({} violation(s), first: {})",
            .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    InvalidLaplacian(Vec<Violation>),

    #[error("vertex {0} has a zero diagonal entry")]
    ZeroDiagonal(usize),

    #[error("test vectors are identically zero at vertex {0}")]
    DegenerateTestVectors(usize),

    #[error("elimination set is not independent: vertices {u} and {v} are adjacent")]
    DependentEliminationSet { u: usize, v: usize },

    #[error("invalid smoothing interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
