use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("quiver has an oriented cycle through vertex {0:?}")]
    CyclicQuiver(String),
    #[error("quiver is not connected (vertex {0:?} unreachable)")]
    Disconnected(String),
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("vector has length {found}, quiver has {expected} vertices")]
    IndexMismatch { expected: usize, found: usize },
    #[error("negative entry {value} at vertex {vertex:?} of a dimension vector")]
    NegativeDimension { vertex: String, value: i64 },
    #[error("integer overflow while evaluating {0}")]
    Overflow(&'static str),
    #[error("quiver is not Euclidean")]
    NotEuclidean,
    #[error("Euclidean structure check failed: {0}")]
    StructureCheckFailed(String),
    #[error("dimension vector is not regular: {0}")]
    NotRegular(String),
    #[error("canonical decomposition has p = 0; the algebra is a polynomial ring with a dense orbit")]
    DenseOrbitCase,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("representations live on different quivers")]
    QuiverMismatch,
    #[error("dimension vectors are not orthogonal: <alpha, beta> = {0}")]
    NotOrthogonal(i64),
    #[error("group element has a singular block at vertex {0}")]
    SingularBlock(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("no Schur representation found after {0} attempts")]
    CertificationFailed(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
