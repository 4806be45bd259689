use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("record '{record}': symbol '{symbol}' at offset {offset} is not in the alphabet")]
    InvalidSymbol {
        record: String,
        symbol: char,
        offset: usize,
    },

    #[error("record '{record}' has no sequence data")]
    EmptyRecord { record: String },

    #[error("line {line}: sequence data before the first '>' header")]
    MissingHeader { line: usize },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("sequence shorter than motif length: '{id}' has length {len}, motif length is {m}")]
    SequenceTooShort { id: String, len: usize, m: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("distance {d} exceeds motif length {m}")]
    DistanceExceedsLength { d: usize, m: usize },

    #[error("ball size for m={m}, d={d}, sigma={sigma} overflows")]
    Overflow { m: usize, d: usize, sigma: usize },

    #[error("expected {expected} query strings, found {found}")]
    QueryCountMismatch { expected: usize, found: usize },

    #[error("string index {index} outside 1..={n}")]
    StringIndex { index: usize, n: usize },

    #[error("line {line}: unsupported forest format '{found}', expected CAF1")]
    VersionMismatch { line: usize, found: String },

    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: reference to missing node id {id}")]
    DanglingId { line: usize, id: u64 },

    #[error("line {line}: node {parent} already has a child with symbol '{symbol}'")]
    DuplicateSibling {
        line: usize,
        parent: String,
        symbol: char,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn malformed(line: usize, message: impl Into<String>) -> Self {
        Error::Malformed {
            line,
            message: message.into(),
        }
    }
}
