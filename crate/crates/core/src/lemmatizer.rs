//! Rule-augmented table lookup mapping surface forms to lemmas, with identity
//! fallback for out-of-vocabulary words.

use std::collections::BTreeMap;

use crate::data::{parse_two_column_tsv, AnnotatedToken};
use crate::error::{Error, Result};

/// Surface-to-lemma table.
///
/// Closed under its own values: loading auto-inserts `lemma -> lemma` for
/// every lemma, which makes lemmatization idempotent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LemmaLexicon {
    entries: BTreeMap<String, String>,
}

impl LemmaLexicon {
    pub fn new<I, K, V>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let mut entries: BTreeMap<String, String> = pairs
            .into_iter()
            .map(|(k, v)| (k.into(), v.into()))
            .collect();
        let lemmas: Vec<String> = entries.values().cloned().collect();
        for lemma in lemmas {
            entries.entry(lemma.clone()).or_insert(lemma);
        }
        LemmaLexicon { entries }
    }

    /// Loads `surface<TAB>lemma` lines; blank and `#` lines are skipped.
    pub fn from_tsv(text: &str) -> Result<Self> {
        Ok(LemmaLexicon::new(parse_two_column_tsv(text, "lemma lexicon")?))
    }

    pub fn get(&self, surface: &str) -> Option<&str> {
        self.entries.get(surface).map(String::as_str)
    }

    pub fn contains(&self, surface: &str) -> bool {
        self.entries.contains_key(surface)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One suffix-rewrite rule. Lower priority numbers are tried first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaRule {
    pub priority: i64,
    pub suffix: String,
    pub replacement: String,
    pub min_stem_length: usize,
}

/// A totally ordered rule list (equal priorities are rejected).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LemmaRuleSet {
    rules: Vec<LemmaRule>,
}

pub const LEMMA_RULES_HEADER: &str = "#lemma-rules-v1";

impl LemmaRuleSet {
    pub fn new(mut rules: Vec<LemmaRule>) -> Result<Self> {
        for rule in &rules {
            if rule.suffix.is_empty() {
                return Err(Error::InvalidInput("lemma rule with empty suffix".into()));
            }
            if rule.min_stem_length < 1 {
                return Err(Error::InvalidInput(
                    "lemma rule minimum stem length must be >= 1".into(),
                ));
            }
        }
        rules.sort_by_key(|r| r.priority);
        for pair in rules.windows(2) {
            if pair[0].priority == pair[1].priority {
                return Err(Error::InvalidInput(format!(
                    "duplicate lemma rule priority {}",
                    pair[0].priority
                )));
            }
        }
        Ok(LemmaRuleSet { rules })
    }

    /// Loads a rule file: header `#lemma-rules-v1`, then
    /// `priority<TAB>suffix<TAB>replacement<TAB>minStemLength` lines.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == LEMMA_RULES_HEADER => {}
            _ => {
                return Err(Error::parse(
                    1,
                    format!("expected `{LEMMA_RULES_HEADER}` header"),
                ))
            }
        }
        let mut rules = Vec::new();
        for (idx, line) in lines {
            let line_no = idx + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(Error::parse(
                    line_no,
                    format!("expected 4 fields, found {}", fields.len()),
                ));
            }
            let priority: i64 = fields[0]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad priority `{}`", fields[0])))?;
            let min_stem_length: usize = fields[3].parse().map_err(|_| {
                Error::parse(line_no, format!("bad minimum stem length `{}`", fields[3]))
            })?;
            rules.push(LemmaRule {
                priority,
                suffix: fields[1].to_string(),
                replacement: fields[2].to_string(),
                min_stem_length,
            });
        }
        LemmaRuleSet::new(rules)
    }

    pub fn rules(&self) -> &[LemmaRule] {
        &self.rules
    }
}

/// Lemma of a single token: exact lexicon hit, else the first rule (in
/// priority order) whose stripped stem is long enough and whose rewrite lands
/// in the lexicon, else the token itself.
pub fn lemmatize(lexicon: &LemmaLexicon, rules: &LemmaRuleSet, token: &str) -> String {
    if let Some(lemma) = lexicon.get(token) {
        return lemma.to_string();
    }
    for rule in &rules.rules {
        if let Some(stem) = token.strip_suffix(&rule.suffix) {
            if stem.chars().count() < rule.min_stem_length {
                continue;
            }
            let candidate = format!("{stem}{}", rule.replacement);
            if let Some(lemma) = lexicon.get(&candidate) {
                return lemma.to_string();
            }
        }
    }
    token.to_string()
}

/// Fills the lemma layer of a token sequence, element-wise.
pub fn lemmatize_sentence(
    lexicon: &LemmaLexicon,
    rules: &LemmaRuleSet,
    tokens: &[AnnotatedToken],
) -> Vec<AnnotatedToken> {
    tokens
        .iter()
        .map(|token| {
            let mut out = token.clone();
            out.lemma = Some(lemmatize(lexicon, rules, &token.text));
            out
        })
        .collect()
}
