//! Text normalization: tokenize, drop stopwords, stem, count.
//!
//! Every operation here is a pure function of its inputs, so documents can
//! be processed concurrently without coordination. The stage order is
//! fixed: tokenize → stopword removal → stemming → counting. Stemming runs
//! after stopword removal so that a stemmed form can never collide with a
//! stopword check.

mod stemmer;
mod stopwords;

pub use stemmer::Stemmer;
pub use stopwords::{StopwordList, StopwordSource};

use std::collections::BTreeMap;

/// One ingested text with its normalized term statistics.
///
/// `kept_token_total` always equals the sum of `term_counts` values, and
/// every key is a lowercase, non-empty term that survived stopword removal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    /// Stable identifier, e.g. the file path relative to the corpus root.
    pub id: String,
    /// Domain name when the corpus layout provides one.
    pub label: Option<String>,
    pub raw_text: String,
    pub term_counts: BTreeMap<String, usize>,
    pub kept_token_total: usize,
}

impl Document {
    /// Run `raw_text` through the pipeline and record its term counts.
    pub fn process(
        id: impl Into<String>,
        label: Option<String>,
        raw_text: impl Into<String>,
        pipeline: &Pipeline,
    ) -> Self {
        let raw_text = raw_text.into();
        let (term_counts, kept_token_total) = pipeline.process(&raw_text);
        Document {
            id: id.into(),
            label,
            raw_text,
            term_counts,
            kept_token_total,
        }
    }

    /// Build a document directly from term counts (mainly for tests and
    /// synthetic corpora). `kept_token_total` is derived from the counts.
    pub fn from_counts(
        id: impl Into<String>,
        label: Option<String>,
        term_counts: BTreeMap<String, usize>,
    ) -> Self {
        let kept_token_total = term_counts.values().sum();
        Document {
            id: id.into(),
            label,
            raw_text: String::new(),
            term_counts,
            kept_token_total,
        }
    }
}

/// Stopword list plus stemmer, bundled so callers process every document
/// with one configuration.
#[derive(Debug, Clone)]
pub struct Pipeline {
    stopwords: StopwordList,
    stemmer: Stemmer,
}

impl Default for Pipeline {
    fn default() -> Self {
        Self::builtin()
    }
}

impl Pipeline {
    pub fn new(stopwords: StopwordList, stemmer: Stemmer) -> Self {
        Pipeline { stopwords, stemmer }
    }

    /// Pipeline with the builtin stopword list and restore table.
    pub fn builtin() -> Self {
        Pipeline {
            stopwords: StopwordList::builtin(),
            stemmer: Stemmer::builtin(),
        }
    }

    pub fn stopwords(&self) -> &StopwordList {
        &self.stopwords
    }

    pub fn stemmer(&self) -> &Stemmer {
        &self.stemmer
    }

    /// Tokenize, filter and stem, preserving token order.
    pub fn kept_terms(&self, raw_text: &str) -> Vec<String> {
        remove_stopwords(tokenize(raw_text), &self.stopwords)
            .iter()
            .map(|t| self.stemmer.stem(t))
            .collect()
    }

    /// Full pipeline: returns the term-count map and the kept-token total.
    pub fn process(&self, raw_text: &str) -> (BTreeMap<String, usize>, usize) {
        term_frequencies(&self.kept_terms(raw_text))
    }
}

/// Break text into lowercase tokens.
///
/// A token is a maximal run of alphabetic characters; digits and
/// punctuation act as separators, so `"1988"` or `"12th"` never produce a
/// numeric token. Total on any input; empty input yields an empty list.
pub fn tokenize(raw_text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for c in raw_text.chars() {
        if c.is_alphabetic() {
            current.extend(c.to_lowercase());
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Drop tokens present in the stopword list, preserving order.
pub fn remove_stopwords(tokens: Vec<String>, stoplist: &StopwordList) -> Vec<String> {
    tokens
        .into_iter()
        .filter(|t| !stoplist.contains(t))
        .collect()
}

/// Count occurrences of each distinct token.
///
/// The returned total is the number of input tokens, which always equals
/// the sum of the counts.
pub fn term_frequencies(tokens: &[String]) -> (BTreeMap<String, usize>, usize) {
    let mut counts = BTreeMap::new();
    for t in tokens {
        *counts.entry(t.clone()).or_insert(0) += 1;
    }
    (counts, tokens.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_splits_on_digits_and_punctuation() {
        assert_eq!(
            tokenize("Salaam Bombay is a 1988 Hindi film"),
            ["salaam", "bombay", "is", "a", "hindi", "film"]
        );
        assert_eq!(tokenize("net. Players score"), ["net", "players", "score"]);
        assert_eq!(tokenize(""), Vec::<String>::new());
        assert_eq!(tokenize("12th X-ray!"), ["th", "x", "ray"]);
    }

    #[test]
    fn tokenize_lowercases_unicode() {
        assert_eq!(tokenize("Montréal Première"), ["montréal", "première"]);
    }

    #[test]
    fn remove_stopwords_keeps_order_and_content_words() {
        let list = StopwordList::builtin();
        let toks = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(
            remove_stopwords(toks(&["a", "an", "the", "film"]), &list),
            ["film"]
        );
        assert_eq!(
            remove_stopwords(toks(&["how", "when", "badminton"]), &list),
            ["badminton"]
        );
        assert_eq!(remove_stopwords(vec![], &list), Vec::<String>::new());
    }

    #[test]
    fn term_frequencies_counts_with_total() {
        let toks: Vec<String> = ["film", "film", "award"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let (counts, total) = term_frequencies(&toks);
        assert_eq!(total, 3);
        assert_eq!(counts.len(), 2);
        assert_eq!(counts["film"], 2);
        assert_eq!(counts["award"], 1);

        let (empty, zero) = term_frequencies(&[]);
        assert!(empty.is_empty());
        assert_eq!(zero, 0);
    }

    #[test]
    fn document_process_satisfies_count_invariant() {
        let pipeline = Pipeline::builtin();
        let doc = Document::process(
            "ent/festival.txt",
            Some("entertainment".into()),
            "The film festival opened with a short animated film about a \
             lighthouse keeper. Critics praised the film, and the jury gave \
             the film four awards.",
            &pipeline,
        );
        let sum: usize = doc.term_counts.values().sum();
        assert_eq!(sum, doc.kept_token_total);
        assert_eq!(doc.kept_token_total, 16);
        assert_eq!(doc.term_counts["film"], 4);
        assert_eq!(doc.term_counts["award"], 1);
        assert_eq!(doc.term_counts["animate"], 1);
        assert_eq!(doc.term_counts["praise"], 1);
        for term in doc.term_counts.keys() {
            assert!(!term.is_empty());
            assert!(!term.chars().any(char::is_uppercase));
            assert!(!pipeline.stopwords().contains(term));
        }
    }
}
