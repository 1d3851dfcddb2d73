//! Error type shared across the toolkit.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text (corpus, lexicon, rule file, model file...).
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A POS tag outside the active tag set.
    #[error("unknown POS tag `{tag}` at line {line}")]
    UnknownTag { tag: String, line: usize },

    /// An argument or precondition violation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A pipeline task was requested without its backing resource.
    #[error("task {task} requires resource `{resource}` which is not loaded")]
    MissingResource { task: String, resource: String },

    /// A query word absent from a trained vocabulary.
    #[error("word `{0}` is not in the vocabulary")]
    OutOfVocabulary(String),

    /// A transliteration grapheme with no glyph mapping.
    #[error("unresolvable grapheme `{grapheme}` at byte offset {offset}")]
    UnknownGrapheme { grapheme: String, offset: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("model file error: {0}")]
    ModelFormat(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by missing or unreadable resources rather than
    /// malformed input data. CLI frontends map these to a distinct exit code.
    pub fn is_resource_error(&self) -> bool {
        matches!(self, Error::Io(_) | Error::MissingResource { .. })
    }
}
