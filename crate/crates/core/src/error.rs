use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("partitions of different sizes: {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("cannot compose: last part {last} is smaller than first part {first}")]
    NotComposable { last: u32, first: u32 },
    #[error("cell ({row}, {col}) lies outside the diagram")]
    HookOutsideDiagram { row: usize, col: usize },
    #[error("tableau entries are not a bijection onto 1..={0}")]
    NotABijection(usize),
    #[error("shape mismatch: {0} vs {1}")]
    ShapeMismatch(String, String),
    #[error("tableaux are not row equivalent")]
    NotRowEquivalent,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("missing decomposition numbers for: {}", .0.join(" "))]
    MissingEntry(Vec<String>),
    #[error("{0} is not {1}-regular")]
    NotPRegular(String, u32),
    #[error("the simple module must differ from the Specht module {0}")]
    SameShape(String),
    #[error("{0} is already {1}-regular")]
    AlreadyRegular(String, u32),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("schaper number must be at least 1")]
    ZeroSchaper,
    #[error("schema error: {0}")]
    Schema(String),
    #[error("table key {0} is not {1}-regular")]
    NotPRegularKey(String, u32),
    #[error("cache corrupt: {0}")]
    CacheCorrupt(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
