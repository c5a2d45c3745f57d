use thiserror::Error;

/// Errors raised by quiver, algebra, representation and I/O operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate node identifier `{0}`")]
    DuplicateNode(String),

    #[error("duplicate arrow identifier `{0}`")]
    DuplicateArrow(String),

    #[error("arrow `{arrow}` references unknown node `{node}`")]
    UnknownEndpoint { arrow: String, node: String },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),

    #[error("arrows `{earlier}` and `{later}` are not composable")]
    NotComposable { earlier: String, later: String },

    #[error("operands belong to different quivers")]
    QuiverMismatch,

    #[error("no matrix supplied for arrow `{0}`")]
    MissingMap(String),

    #[error("matrix for arrow `{arrow}` is {got_rows}x{got_cols}, expected {rows}x{cols}")]
    ShapeMismatch {
        arrow: String,
        rows: usize,
        cols: usize,
        got_rows: usize,
        got_cols: usize,
    },

    #[error("block for node `{node}` has length {got}, expected {expected}")]
    BlockLength {
        node: String,
        expected: usize,
        got: usize,
    },

    #[error("quiver is not an equioriented chain: {0}")]
    NotChain(String),

    #[error("quiver has a directed cycle")]
    Cyclic,

    #[error("representation is not semisimple: arrow `{arrow}` has max-norm {norm:e}; use the barcode or generic decomposition")]
    NotSemisimple { arrow: String, norm: f64 },

    #[error("invalid simplex {simplex:?}: {reason}")]
    InvalidSimplex { simplex: Vec<String>, reason: String },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
