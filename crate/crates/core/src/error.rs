use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("index out of range: {0}")]
    IndexError(String),
    #[error("ambiguous multiplicity structure: {0}")]
    AmbiguousStructure(String),
    #[error("dual variety is not a hypersurface for {0}")]
    NotHypersurface(String),
    #[error("partition {0} is not a hook")]
    NotHook(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("partition {0} is outside the embedded table")]
    OutOfTable(String),
    #[error("secant parameters do not describe a hypersurface: {0}")]
    NotHypersurfaceCase(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("root count certification failed: {0}")]
    CertificationFailure(String),
    #[error("kernel has dimension greater than one: {0}")]
    DegenerateKernel(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("determinant factorization mismatch: {0}")]
    FactorizationMismatch(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("point is not critical: {0}")]
    NotCritical(String),
    #[error("no critical point found: {0}")]
    NoCriticalPointFound(String),
    #[error("pair is not in the conormal variety: {0}")]
    NotConormal(String),
    #[error("form is not on the dual variety: {0}")]
    NotOnDual(String),
    #[error("catalecticant has rank {rank}, below the generic rank {generic}")]
    SubgenericRank { rank: usize, generic: usize },
    #[error("apolar pencil is degenerate: {0}")]
    DegeneratePencil(String),
    #[error("boundary transition cannot be classified: {0}")]
    AmbiguousBoundary(String),
}

pub type Result<T> = std::result::Result<T, Error>;
