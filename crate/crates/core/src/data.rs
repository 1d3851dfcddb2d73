//! Corpus and resource ingestion: annotated corpora, train/test splits,
//! cross-validation folds and corpus statistics.
//!
//! The corpus format is a CoNLL-like TSV: one token per line with up to four
//! tab-separated fields (`text`, `lemma`, `pos`, `translit`), `_` (or an
//! empty field) marking an absent optional layer, blank lines separating
//! sentences, and `#doc <name>` lines separating documents.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One token with optional lemma / POS / transliteration layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedToken {
    /// Zero-based index within its sentence.
    pub id: usize,
    /// Surface transcription (non-empty, no whitespace).
    pub text: String,
    pub lemma: Option<String>,
    pub pos: Option<String>,
    pub translit: Option<String>,
}

impl AnnotatedToken {
    pub fn new(id: usize, text: impl Into<String>) -> Self {
        AnnotatedToken {
            id,
            text: text.into(),
            lemma: None,
            pos: None,
            translit: None,
        }
    }
}

/// An ordered, non-empty run of tokens; token ids equal list positions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Sentence {
    pub tokens: Vec<AnnotatedToken>,
}

impl Sentence {
    pub fn new(tokens: Vec<AnnotatedToken>) -> Self {
        Sentence { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Surface forms of the tokens, in order.
    pub fn words(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.text.clone()).collect()
    }
}

/// A group of sentences sharing a provenance label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub provenance: Option<String>,
    pub sentences: Vec<Sentence>,
}

/// A collection of documents; the training and evaluation substrate.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    pub documents: Vec<Document>,
}

impl Corpus {
    /// Wraps loose sentences into a single unlabelled document.
    pub fn from_sentences(sentences: Vec<Sentence>) -> Self {
        if sentences.is_empty() {
            return Corpus::default();
        }
        Corpus {
            documents: vec![Document {
                provenance: None,
                sentences,
            }],
        }
    }

    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.documents.iter().flat_map(|d| d.sentences.iter())
    }

    pub fn sentence_count(&self) -> usize {
        self.documents.iter().map(|d| d.sentences.len()).sum()
    }

    pub fn token_count(&self) -> usize {
        self.sentences().map(Sentence::len).sum()
    }
}

/// Ordered set of POS tag symbols; order is the global tie-break order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct TagSet {
    tags: Vec<String>,
}

/// The default tag inventory.
pub const DEFAULT_TAGS: [&str; 13] = [
    "ADJ", "ADV", "CONJ", "DET", "EZ", "N", "NUM", "PART", "POST", "PREP", "PRON", "Unknown", "V",
];

impl TagSet {
    /// Builds a tag set, rejecting duplicates and empty inputs.
    pub fn new<I, S>(tags: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tags: Vec<String> = tags.into_iter().map(Into::into).collect();
        if tags.is_empty() {
            return Err(Error::InvalidInput("tag set must be non-empty".into()));
        }
        let mut seen = BTreeSet::new();
        for t in &tags {
            if !seen.insert(t.clone()) {
                return Err(Error::InvalidInput(format!("duplicate tag `{t}`")));
            }
        }
        Ok(TagSet { tags })
    }

    pub fn contains(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }

    pub fn index_of(&self, tag: &str) -> Option<usize> {
        self.tags.iter().position(|t| t == tag)
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tags.iter().map(String::as_str)
    }

    pub fn as_slice(&self) -> &[String] {
        &self.tags
    }
}

impl Default for TagSet {
    fn default() -> Self {
        TagSet {
            tags: DEFAULT_TAGS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl TryFrom<Vec<String>> for TagSet {
    type Error = Error;
    fn try_from(tags: Vec<String>) -> Result<Self> {
        TagSet::new(tags)
    }
}

impl From<TagSet> for Vec<String> {
    fn from(t: TagSet) -> Vec<String> {
        t.tags
    }
}

/// Corpus-level summary counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusStats {
    pub documents: usize,
    pub words: usize,
    pub unique_tokens: usize,
    pub distinct_lemmas: usize,
}

/// Parses corpus TSV text against the default tag set.
pub fn parse_corpus(text: &str) -> Result<Corpus> {
    parse_corpus_with(text, &TagSet::default())
}

/// Parses corpus TSV text, validating POS fields against `tags`.
///
/// Blank lines delimit sentences, `#doc` lines delimit documents, token ids
/// are assigned sequentially from 0 within each sentence.
pub fn parse_corpus_with(text: &str, tags: &TagSet) -> Result<Corpus> {
    let mut documents: Vec<Document> = Vec::new();
    let mut current_doc: Option<Document> = None;
    let mut current_sentence: Vec<AnnotatedToken> = Vec::new();

    fn flush_sentence(doc: &mut Option<Document>, sentence: &mut Vec<AnnotatedToken>) {
        if !sentence.is_empty() {
            let doc = doc.get_or_insert_with(Document::default);
            doc.sentences.push(Sentence::new(std::mem::take(sentence)));
        }
    }

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if let Some(rest) = line.strip_prefix("#doc") {
            flush_sentence(&mut current_doc, &mut current_sentence);
            if let Some(doc) = current_doc.take() {
                documents.push(doc);
            }
            let name = rest.trim();
            current_doc = Some(Document {
                provenance: (!name.is_empty()).then(|| name.to_string()),
                sentences: Vec::new(),
            });
            continue;
        }
        if line.trim().is_empty() {
            flush_sentence(&mut current_doc, &mut current_sentence);
            continue;
        }

        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() > 4 {
            return Err(Error::parse(
                line_no,
                format!("expected 1-4 tab-separated fields, found {}", fields.len()),
            ));
        }
        let surface = fields[0];
        if surface.is_empty() {
            return Err(Error::parse(line_no, "empty token text"));
        }
        if surface.chars().any(char::is_whitespace) {
            return Err(Error::parse(
                line_no,
                format!("token text `{surface}` contains whitespace"),
            ));
        }
        let optional = |i: usize| -> Option<String> {
            fields
                .get(i)
                .filter(|f| !f.is_empty() && **f != "_")
                .map(|f| f.to_string())
        };
        let pos = optional(2);
        if let Some(tag) = &pos {
            if !tags.contains(tag) {
                return Err(Error::UnknownTag {
                    tag: tag.clone(),
                    line: line_no,
                });
            }
        }
        let mut token = AnnotatedToken::new(current_sentence.len(), surface);
        token.lemma = optional(1);
        token.pos = pos;
        token.translit = optional(3);
        current_sentence.push(token);
    }
    flush_sentence(&mut current_doc, &mut current_sentence);
    if let Some(doc) = current_doc.take() {
        documents.push(doc);
    }
    Ok(Corpus { documents })
}

/// Canonical TSV rendering of a corpus; inverse of [`parse_corpus`].
///
/// Absent inner fields are written as `_`, absent trailing fields are
/// dropped, and the first document's header is omitted when it carries no
/// provenance label.
pub fn serialize_corpus(corpus: &Corpus) -> String {
    let mut out = String::new();
    for (doc_idx, doc) in corpus.documents.iter().enumerate() {
        if doc_idx > 0 || doc.provenance.is_some() {
            out.push_str("#doc");
            if let Some(name) = &doc.provenance {
                out.push(' ');
                out.push_str(name);
            }
            out.push('\n');
        }
        for (sent_idx, sentence) in doc.sentences.iter().enumerate() {
            if sent_idx > 0 {
                out.push('\n');
            }
            for token in &sentence.tokens {
                let cols = [
                    Some(token.text.as_str()),
                    token.lemma.as_deref(),
                    token.pos.as_deref(),
                    token.translit.as_deref(),
                ];
                let last = cols.iter().rposition(Option::is_some).unwrap_or(0);
                let line: Vec<&str> = cols[..=last].iter().map(|c| c.unwrap_or("_")).collect();
                out.push_str(&line.join("\t"));
                out.push('\n');
            }
        }
    }
    out
}

/// Rebuilds a corpus keeping only the sentences at the given global indices,
/// preserving document structure and original sentence order.
fn subset_by_indices(corpus: &Corpus, keep: &BTreeSet<usize>) -> Corpus {
    let mut documents = Vec::new();
    let mut global = 0usize;
    for doc in &corpus.documents {
        let mut sentences = Vec::new();
        for sentence in &doc.sentences {
            if keep.contains(&global) {
                sentences.push(sentence.clone());
            }
            global += 1;
        }
        if !sentences.is_empty() {
            documents.push(Document {
                provenance: doc.provenance.clone(),
                sentences,
            });
        }
    }
    Corpus { documents }
}

/// Sentence-level train/test split, deterministic for a fixed seed.
///
/// The test partition holds `round(test_fraction * sentences)` sentences.
pub fn split_train_test(corpus: &Corpus, test_fraction: f64, seed: u64) -> Result<(Corpus, Corpus)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidInput(format!(
            "test fraction must be in (0, 1), got {test_fraction}"
        )));
    }
    let n = corpus.sentence_count();
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 sentences to split, got {n}"
        )));
    }
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);
    let test_size = (test_fraction * n as f64).round() as usize;
    let test: BTreeSet<usize> = indices[..test_size].iter().copied().collect();
    let train: BTreeSet<usize> = indices[test_size..].iter().copied().collect();
    Ok((
        subset_by_indices(corpus, &train),
        subset_by_indices(corpus, &test),
    ))
}

/// Sentence-level k-fold partition: k `(train, validation)` pairs with
/// pairwise-disjoint validation sets covering the corpus, fold sizes within 1.
pub fn k_folds(corpus: &Corpus, k: usize, seed: u64) -> Result<Vec<(Corpus, Corpus)>> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("k must be >= 2, got {k}")));
    }
    let n = corpus.sentence_count();
    if k > n {
        return Err(Error::InvalidInput(format!(
            "k = {k} exceeds sentence count {n}"
        )));
    }
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);

    // Deal shuffled indices round-robin so fold sizes differ by at most one.
    let mut folds: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    for (pos, idx) in indices.iter().enumerate() {
        folds[pos % k].insert(*idx);
    }
    let all: BTreeSet<usize> = (0..n).collect();
    Ok(folds
        .into_iter()
        .map(|validation| {
            let train: BTreeSet<usize> = all.difference(&validation).copied().collect();
            (
                subset_by_indices(corpus, &train),
                subset_by_indices(corpus, &validation),
            )
        })
        .collect())
}

/// Document, token, surface-type and lemma-type counts.
pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    let mut words = 0usize;
    let mut surfaces: BTreeSet<&str> = BTreeSet::new();
    let mut lemmas: BTreeSet<&str> = BTreeSet::new();
    for sentence in corpus.sentences() {
        words += sentence.len();
        for token in &sentence.tokens {
            surfaces.insert(&token.text);
            if let Some(lemma) = &token.lemma {
                lemmas.insert(lemma);
            }
        }
    }
    CorpusStats {
        documents: corpus.documents.len(),
        words,
        unique_tokens: surfaces.len(),
        distinct_lemmas: lemmas.len(),
    }
}

/// Loads a two-column TSV (key<TAB>value), skipping blank and `#` lines.
pub(crate) fn parse_two_column_tsv(text: &str, what: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.splitn(2, '\t');
        let key = parts.next().unwrap_or("");
        let value = parts.next().unwrap_or("");
        if key.is_empty() || value.is_empty() {
            return Err(Error::parse(
                line_no,
                format!("{what}: expected key<TAB>value, got `{line}`"),
            ));
        }
        map.insert(key.to_string(), value.to_string());
    }
    Ok(map)
}
