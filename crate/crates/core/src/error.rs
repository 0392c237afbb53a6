use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate value {0}")]
    DuplicateValue(u32),
    #[error("value {value} out of range 1..={max}")]
    OutOfRange { value: u32, max: u32 },
    #[error("values do not form a contiguous set 1..=n")]
    NonContiguous,
    #[error("empty permutation has no decomposition")]
    EmptyDecomposition,
    #[error("empty host")]
    EmptyHost,
    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
    #[error("malformed pattern: {0}")]
    MalformedPattern(String),
    #[error("pattern {pattern} does not apply to a {host} host")]
    InapplicablePattern { pattern: String, host: &'static str },
    #[error("invalid machine: {0}")]
    InvalidMachine(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("index {index} outside the range of {sequence}")]
    SequenceRange {
        sequence: &'static str,
        index: usize,
    },
    #[error("length {n} exceeds the configured maximum {max}")]
    AboveMaximum { n: usize, max: usize },
    #[error("inconsistent block labeling: {0}")]
    InconsistentLabeling(String),
    #[error("no pattern characterization is implemented for pair {0}")]
    NoCharacterization(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
