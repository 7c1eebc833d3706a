use thiserror::Error;

/// Errors produced by graph parsing and validation.
///
/// Parse errors carry 1-based line numbers into the input text; structural
/// errors (disconnected, empty) refer to the graph as a whole.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("missing header line \"n m\"")]
    MissingHeader,
    #[error("line {line}: malformed line {content:?}")]
    Malformed { line: usize, content: String },
    #[error("line {line}: vertex index {v} out of range 1..={n}")]
    VertexOutOfRange { line: usize, v: i64, n: usize },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: usize },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("expected {expected} edges, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("graph has no edges")]
    NoEdges,
    #[error("graph is disconnected")]
    Disconnected,
}

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("enumeration over {n} columns exceeds limit {limit}")]
    EnumerationLimit { n: usize, limit: usize },
    #[error("matrix parse error at line {line}: {msg}")]
    MatrixParse { line: usize, msg: String },
    #[error("materialization of {rows} rows exceeds row limit {limit}")]
    RowLimit { rows: String, limit: usize },
    #[error("insufficient precision: {got} bits given, {needed} bits required")]
    InsufficientPrecision { got: u32, needed: u32 },
    #[error("zero vector not allowed")]
    ZeroVector,
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
