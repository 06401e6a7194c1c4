use thiserror::Error;

/// Errors raised while reading or converting corpus files.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("expected {expected} fields at line {line}, found {found}")]
    FieldCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("empty tweet id at line {line}")]
    EmptyTweetId { line: usize },
    #[error("duplicate tweet id {id:?} at line {line}")]
    DuplicateTweetId { id: String, line: usize },
    #[error("invalid {column} {value:?} at line {line}: expected a non-negative integer")]
    BadInteger {
        line: usize,
        column: &'static str,
        value: String,
    },
    #[error("zero-length span at line {line}")]
    ZeroLength { line: usize },
    #[error("unknown IOB label {0:?}")]
    BadLabel(String),
    #[error("{tokens} tokens but {labels} labels")]
    LengthMismatch { tokens: usize, labels: usize },
    #[error("span {tag}@{start}+{length} exceeds tweet {tweet_id:?} of {text_len} characters")]
    SpanOutOfBounds {
        tweet_id: String,
        tag: String,
        start: usize,
        length: usize,
        text_len: usize,
    },
    #[error("spans {first} and {second} overlap in tweet {tweet_id:?}")]
    OverlappingSpans {
        tweet_id: String,
        first: String,
        second: String,
    },
    #[error("orphan {label} at token {position}")]
    OrphanInside { label: String, position: usize },
}

/// Errors raised while building pseudo-tokens.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeatureError {
    #[error("{tokens} tokens but {tags} POS tags")]
    LengthMismatch { tokens: usize, tags: usize },
    #[error("empty {0} field")]
    EmptyField(&'static str),
    #[error("{field} {value:?} contains a reserved separator character")]
    ReservedCharacter { field: &'static str, value: String },
    #[error("POS tag {0:?} collides with a gazetteer code")]
    ReservedPosTag(String),
}

/// Errors raised while training, saving or loading a model.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("sentence {sentence}: {observations} observations but {labels} labels")]
    LengthMismatch {
        sentence: usize,
        observations: usize,
        labels: usize,
    },
    #[error(transparent)]
    Label(#[from] CorpusError),
    #[error("unknown tag {0:?}")]
    UnknownTag(String),
    #[error("model file path is empty")]
    EmptyPath,
    #[error("model file version {found} is newer than supported version {supported}")]
    UnsupportedVersion { found: u32, supported: u32 },
    #[error("model file checksum mismatch")]
    Checksum,
    #[error("malformed model file at line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Errors raised by the Viterbi decoder.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("cannot decode an empty observation sequence")]
    EmptyInput,
    #[error("no tag sequence has non-zero probability at position {position}")]
    NoPath { position: usize },
}

/// Top-level error for pipeline operations that cross module boundaries.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
