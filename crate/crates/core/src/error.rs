use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("common difference must be nonzero")]
    ZeroDifference,

    #[error("hypergraph uniformity mismatch: motif is {motif}-uniform, host is {host}-uniform")]
    UniformityMismatch { motif: usize, host: usize },

    #[error("hypergraph has no vertices")]
    NoVertices,

    #[error("set is not 3-AP-free modulo {modulus}: witness {witness:?}")]
    NotApFree { modulus: u64, witness: [u64; 3] },

    #[error("coordinates must be distinct, {0} is repeated")]
    RepeatedCoordinate(i64),

    #[error("invalid partial quotient at index {index}")]
    InvalidQuotient { index: usize },

    #[error("{x} and {y} are not coprime")]
    NotCoprime { x: String, y: String },

    #[error("no prime found in ({lower}, {upper})")]
    NoPrime { lower: String, upper: String },

    #[error("unsupported pattern: {0}")]
    UnsupportedPattern(String),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
