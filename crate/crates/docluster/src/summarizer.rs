//! Extractive summaries from sentence weights.
//!
//! Each sentence is pushed through the same text pipeline as the corpus and
//! scored from the document's matrix row. The default score is the mean
//! weight of the sentence's kept terms, so long sentences hold no built-in
//! advantage; a raw-sum mode is available for comparison. The top-n
//! sentences are re-emitted in their original order.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::text_pipeline::{Document, Pipeline};
use crate::vector_space::{TermDocumentMatrix, Vocabulary};

/// Whether a summary covers one document or a whole cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SummaryScope {
    Document,
    Cluster,
}

/// Sentence score: mean kept-term weight (default) or plain sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScoreMode {
    #[default]
    MeanWeight,
    SumWeight,
}

/// One sentence with its position, text and score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    pub doc_id: String,
    #[serde(rename = "sentence_index")]
    pub index: usize,
    pub score: f64,
    pub text: String,
}

/// Selected sentences, kept in original document order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scope: SummaryScope,
    #[serde(rename = "items")]
    pub sentences: Vec<Sentence>,
    #[serde(skip)]
    pub n_requested: usize,
}

impl Summary {
    /// Plain-text rendering with one `== <doc_id> ==` header per document.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut current: Option<&str> = None;
        for s in &self.sentences {
            if current != Some(s.doc_id.as_str()) {
                let _ = writeln!(out, "== {} ==", s.doc_id);
                current = Some(s.doc_id.as_str());
            }
            let _ = writeln!(out, "{}", s.text);
        }
        out
    }

    pub fn to_json_string(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json_str(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Split text into sentences at `.`, `!` or `?` followed by whitespace or
/// end of text.
///
/// Abbreviation periods ("Dr. Smith") therefore split too; that is an
/// accepted limitation of the rule. Segments that are empty after trimming
/// are dropped, and surviving sentences are indexed in order of appearance.
pub fn split_sentences(doc_id: &str, raw_text: &str) -> Vec<Sentence> {
    let mut sentences = Vec::new();
    let mut start = 0;
    let mut chars = raw_text.char_indices().peekable();
    let push = |segment: &str, sentences: &mut Vec<Sentence>| {
        let trimmed = segment.trim();
        if !trimmed.is_empty() {
            sentences.push(Sentence {
                doc_id: doc_id.to_string(),
                index: sentences.len(),
                score: 0.0,
                text: trimmed.to_string(),
            });
        }
    };
    while let Some((i, c)) = chars.next() {
        if matches!(c, '.' | '!' | '?') {
            let at_boundary = match chars.peek() {
                None => true,
                Some((_, next)) => next.is_whitespace(),
            };
            if at_boundary {
                let end = i + c.len_utf8();
                push(&raw_text[start..end], &mut sentences);
                start = end;
            }
        }
    }
    push(&raw_text[start..], &mut sentences);
    sentences
}

/// Score one sentence against the document's weight row.
///
/// The sentence is tokenized, stopword-filtered and stemmed; each kept term
/// contributes the row weight at its vocabulary column (zero when the term
/// is unknown), counted with multiplicity. Mean mode divides by the kept
/// term count; a sentence with no kept terms scores zero either way.
pub fn score_sentence(
    text: &str,
    doc_row: &[f64],
    vocab: &Vocabulary,
    pipeline: &Pipeline,
    mode: ScoreMode,
) -> f64 {
    let terms = pipeline.kept_terms(text);
    if terms.is_empty() {
        return 0.0;
    }
    let sum: f64 = terms
        .iter()
        .map(|t| vocab.term_index(t).map_or(0.0, |col| doc_row[col]))
        .sum();
    match mode {
        ScoreMode::MeanWeight => sum / terms.len() as f64,
        ScoreMode::SumWeight => sum,
    }
}

/// Shared state for summarizing documents of one clustered corpus.
///
/// `documents` must be the corpus the matrix was built from, in row order.
pub struct Summarizer<'a> {
    documents: &'a [Document],
    matrix: &'a TermDocumentMatrix,
    vocab: &'a Vocabulary,
    pipeline: &'a Pipeline,
    mode: ScoreMode,
}

impl<'a> Summarizer<'a> {
    pub fn new(
        documents: &'a [Document],
        matrix: &'a TermDocumentMatrix,
        vocab: &'a Vocabulary,
        pipeline: &'a Pipeline,
        mode: ScoreMode,
    ) -> Self {
        debug_assert_eq!(documents.len(), matrix.doc_count());
        Summarizer {
            documents,
            matrix,
            vocab,
            pipeline,
            mode,
        }
    }

    /// Every sentence of one document, scored.
    pub fn scored_sentences(&self, doc_index: usize) -> Vec<Sentence> {
        let doc = &self.documents[doc_index];
        let row = self.matrix.row(doc_index);
        let mut sentences = split_sentences(&doc.id, &doc.raw_text);
        for s in &mut sentences {
            s.score = score_sentence(&s.text, row, self.vocab, self.pipeline, self.mode);
        }
        sentences
    }

    /// The n highest-scoring sentences of one document, in original order.
    /// Ties go to the earlier sentence. Documents with fewer than n
    /// sentences come back whole.
    pub fn summarize_document(&self, doc_index: usize, n: usize) -> Summary {
        let sentences = self.scored_sentences(doc_index);
        Summary {
            scope: SummaryScope::Document,
            sentences: select_top_n(sentences, n),
            n_requested: n,
        }
    }

    /// Concatenated per-document summaries for a cluster, ordered by
    /// document id and then sentence index.
    pub fn summarize_cluster(&self, member_rows: &[usize], n_per_doc: usize) -> Summary {
        let mut sentences: Vec<Sentence> = member_rows
            .iter()
            .flat_map(|&row| self.summarize_document(row, n_per_doc).sentences)
            .collect();
        sentences.sort_by(|a, b| a.doc_id.cmp(&b.doc_id).then(a.index.cmp(&b.index)));
        Summary {
            scope: SummaryScope::Cluster,
            sentences,
            n_requested: n_per_doc * member_rows.len(),
        }
    }
}

fn select_top_n(sentences: Vec<Sentence>, n: usize) -> Vec<Sentence> {
    let mut order: Vec<usize> = (0..sentences.len()).collect();
    // highest score first; the earlier sentence wins a tie
    order.sort_by(|&a, &b| {
        sentences[b]
            .score
            .partial_cmp(&sentences[a].score)
            .expect("sentence scores are finite")
            .then(sentences[a].index.cmp(&sentences[b].index))
    });
    let mut keep: Vec<usize> = order.into_iter().take(n).collect();
    keep.sort_unstable();
    let mut by_index = sentences;
    let mut selected = Vec::with_capacity(keep.len());
    for &i in keep.iter().rev() {
        selected.push(by_index.swap_remove(i));
    }
    selected.reverse();
    selected
}
