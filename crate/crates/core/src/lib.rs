//! parsig-core: an NLP toolkit for phonetically transcribed Middle Persian
//! (Pārsīg).
//!
//! The crate covers the full annotation pipeline for transcription input —
//! tokenization (whole-word and trainable subword), lemmatization, three
//! trainable POS taggers, phoneme-to-transliteration rewriting and
//! transliteration-to-glyph conversion for Book Pahlavi output — together
//! with word embeddings and the evaluation machinery (edit-distance error
//! rates, multiclass classification metrics, cross-validated grid search)
//! needed to measure all of it.
//!
//! ```
//! use parsig_core::tokenizer::word_tokenize;
//!
//! let tokens = word_tokenize("ud ān");
//! assert_eq!(tokens.len(), 2);
//! assert_eq!(tokens[1].text, "ān");
//! ```

pub mod data;
pub mod embed;
pub mod error;
pub mod lemmatizer;
pub mod metrics;
pub mod pipeline;
pub mod postag;
pub mod tokenizer;
pub mod translit;

pub use data::{
    corpus_stats, k_folds, parse_corpus, parse_corpus_with, serialize_corpus, split_train_test,
    AnnotatedToken, Corpus, CorpusStats, Document, Sentence, TagSet,
};
pub use error::{Error, Result};
