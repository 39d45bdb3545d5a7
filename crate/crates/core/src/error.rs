use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid sign {value} at index {index}; signs must be +1 or -1")]
    InvalidSign { index: usize, value: i64 },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("representation flagged symmetric but generator `{0}` has no inverse partner")]
    NotSymmetric(String),

    #[error("index set is not a single orbit of the representation")]
    NotAnOrbit,

    #[error("vertex set is not a subset of the graph")]
    NotASubset,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph has {0} vertices; at least 2 are required")]
    TooSmall(usize),

    #[error("graph has {size} vertices, above the exhaustive-search cap {cap}; use cheeger_sweep")]
    ExhaustiveCapExceeded { size: usize, cap: usize },

    #[error("invalid exponent {0}")]
    InvalidExponent(f64),

    #[error("exponents must satisfy 1 < p < q < inf (got p={p}, q={q})")]
    ExponentOrder { p: f64, q: f64 },

    #[error("negative coordinate {value} at index {index}")]
    NegativeCoordinate { index: usize, value: f64 },

    #[error("marked subset of size {marked} exceeds half of its component (size {size})")]
    ArcTooLarge { marked: usize, size: usize },

    #[error("component of size {size} exceeds the bound D = {bound}")]
    ComponentTooLarge { size: usize, bound: usize },

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("invalid class spec: {0}")]
    InvalidClassSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
