use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("unassigned variable {0}")]
    UnassignedVariable(String),

    #[error("rank {rank} out of range for {k}-subsets of [{m}]")]
    RankOutOfRange { k: usize, m: usize, rank: u64 },

    #[error("element {element} outside ground set [{m}]")]
    ElementOutOfRange { element: usize, m: usize },

    #[error("element {0} already present in subset")]
    ElementPresent(usize),

    #[error("ground set size {0} exceeds the supported bitmask width")]
    GroundSetTooLarge(usize),

    #[error("{what}: m = {m} outside supported range {min}..={max}")]
    SizeOutOfRange {
        what: &'static str,
        m: usize,
        min: usize,
        max: usize,
    },

    #[error("symbolic determinant refused: n = {n} exceeds bound {bound}; use pit or structured evaluation")]
    SymbolicBoundExceeded { n: usize, bound: usize },

    #[error("pencil is not regular: rank of constant part is {rank}, expected {expected}")]
    NotRegular { rank: usize, expected: usize },

    #[error("layout is not cyclic block-bidiagonal: {0}")]
    NotCyclicBidiagonal(String),

    #[error("group element is not compatible with construction {construction}: {reason}")]
    IncompatibleElement {
        construction: String,
        reason: String,
    },

    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),

    #[error("unknown construction {0:?}")]
    UnknownConstruction(String),

    #[error("malformed pencil document: {0}")]
    Json(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
