use std::path::PathBuf;

/// Errors produced by streamvec operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("failed to open corpus file {path}: {source}")]
    CorpusOpen {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unigram table is empty; train at least one token before sampling")]
    EmptyTable,

    #[error("undefined ppmi cell: count(w)={word_count}, count(c)={context_count}")]
    UndefinedPpmiCell { word_count: u64, context_count: u64 },

    #[error("cannot evaluate: model vocabulary is empty")]
    EmptyVocabulary,

    #[error("failed to parse {path} (line {line}): {reason}")]
    DatasetParse {
        path: PathBuf,
        line: usize,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
