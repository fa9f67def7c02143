use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid network width {0}: must be a power of two >= 2")]
    InvalidWidth(usize),
    #[error("unsupported width {width} for {what}")]
    UnsupportedWidth { what: &'static str, width: usize },
    #[error("invalid comparator {i}:{j} in a network of width {width}")]
    InvalidComparator { i: usize, j: usize, width: usize },
    #[error("index {index} used twice in stage {stage}")]
    StageConflict { stage: usize, index: usize },
    #[error("network of width {width} is too wide to enumerate (limit {limit})")]
    EnumerationCapacity { width: usize, limit: usize },
    #[error("capacity exceeded: need {needed} elements, have {capacity}")]
    Capacity { needed: usize, capacity: usize },
    #[error("expected a square tile of side {expected}, got {rows} rows")]
    Shape { expected: usize, rows: usize },
    #[error("expected exactly {expected} elements, got {actual}")]
    Size { expected: usize, actual: usize },
    #[error("run lengths {first} and {second} are not multiples of the lane count {lanes}")]
    Alignment { first: usize, second: usize, lanes: usize },
    #[error("rank {k} out of range 0..={max}")]
    Range { k: usize, max: usize },
    #[error("run at offset {offset} with length {len} exceeds buffer of length {buffer}")]
    RunBounds { offset: usize, len: usize, buffer: usize },
    #[error("unsupported lane width {0}: expected one of 2, 4, 8, 16")]
    LaneWidth(usize),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed network dump at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
