//! Vocabulary and the documents × terms weight matrix.
//!
//! Two weighting schemes are supported. `tf` is the ratio of a term's count
//! to the document's kept-token total, so each row sums to 1 over the terms
//! the document actually contains. `tf-idf` multiplies that ratio by
//! `ln(D / df)`, which zeroes out terms present in every document.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text_pipeline::Document;

#[derive(Debug, Error)]
pub enum VectorSpaceError {
    #[error("corpus contains no documents")]
    EmptyCorpus,
    #[error("document has no kept tokens; term-frequency ratio is undefined")]
    ZeroLengthDocument,
    #[error("document frequency {df} out of range 1..={d}")]
    InvalidDf { df: usize, d: usize },
    #[error("term '{term}' of document '{doc}' is not in the vocabulary")]
    VocabularyMismatch { doc: String, term: String },
    #[error("vocabulary was built from {expected} documents, got {got}")]
    CorpusSizeMismatch { expected: usize, got: usize },
    #[error("matrix has {weights} weights, expected {docs} x {terms}")]
    ShapeMismatch {
        weights: usize,
        docs: usize,
        terms: usize,
    },
    #[error("weight at row {row}, column {col} is {value}; weights must be finite and >= 0")]
    InvalidWeight { row: usize, col: usize, value: f64 },
    #[error("malformed matrix file: {0}")]
    MalformedFile(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// How matrix entries are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightingScheme {
    /// Term count divided by the document's kept-token total.
    #[serde(rename = "tf")]
    TfRatio,
    /// The tf ratio multiplied by `ln(D / df)`.
    #[serde(rename = "tf-idf")]
    TfIdf,
}

impl fmt::Display for WeightingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightingScheme::TfRatio => f.write_str("tf"),
            WeightingScheme::TfIdf => f.write_str("tf-idf"),
        }
    }
}

impl FromStr for WeightingScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tf" | "tf-ratio" => Ok(WeightingScheme::TfRatio),
            "tf-idf" | "tfidf" => Ok(WeightingScheme::TfIdf),
            other => Err(format!("unknown weighting scheme '{other}'")),
        }
    }
}

/// The corpus term space: sorted distinct terms with document frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    doc_frequency: Vec<usize>,
    doc_count: usize,
}

impl Vocabulary {
    /// Number of terms (V).
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of documents the vocabulary was built from (D).
    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    /// Terms in strict lexicographic order.
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    /// Column index of a term, if present.
    pub fn term_index(&self, term: &str) -> Option<usize> {
        self.terms.binary_search_by(|t| t.as_str().cmp(term)).ok()
    }

    /// Document frequency of the term at `index`.
    pub fn doc_frequency(&self, index: usize) -> usize {
        self.doc_frequency[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.terms
            .iter()
            .map(String::as_str)
            .zip(self.doc_frequency.iter().copied())
    }
}

/// Collect the sorted union of all document terms with their frequencies.
pub fn build_vocabulary(documents: &[Document]) -> Result<Vocabulary, VectorSpaceError> {
    if documents.is_empty() {
        return Err(VectorSpaceError::EmptyCorpus);
    }
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in documents {
        for term in doc.term_counts.keys() {
            *df.entry(term).or_insert(0) += 1;
        }
    }
    let (terms, doc_frequency): (Vec<String>, Vec<usize>) =
        df.into_iter().map(|(t, n)| (t.to_string(), n)).unzip();
    Ok(Vocabulary {
        terms,
        doc_frequency,
        doc_count: documents.len(),
    })
}

/// Ratio of a term's count to the document's kept-token total, in [0, 1].
pub fn tf_weight(count: usize, kept_token_total: usize) -> Result<f64, VectorSpaceError> {
    if kept_token_total == 0 {
        return Err(VectorSpaceError::ZeroLengthDocument);
    }
    debug_assert!(count <= kept_token_total);
    Ok(count as f64 / kept_token_total as f64)
}

/// Inverse document frequency `ln(D / df)`; zero iff the term is ubiquitous.
pub fn idf(doc_frequency: usize, doc_count: usize) -> Result<f64, VectorSpaceError> {
    if doc_frequency < 1 || doc_frequency > doc_count {
        return Err(VectorSpaceError::InvalidDf {
            df: doc_frequency,
            d: doc_count,
        });
    }
    Ok((doc_count as f64 / doc_frequency as f64).ln())
}

/// Dense documents × terms weight grid under one scheme.
///
/// Rows follow corpus ingestion order; columns follow the vocabulary's
/// lexicographic term order. A weight is zero whenever the term is absent
/// from the document (and, under `tf-idf`, also when the term appears in
/// every document).
#[derive(Debug, Clone, PartialEq)]
pub struct TermDocumentMatrix {
    doc_ids: Vec<String>,
    terms: Vec<String>,
    weights: Vec<f64>,
    scheme: WeightingScheme,
}

/// Serialized shape of the matrix JSON export.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    scheme: WeightingScheme,
    doc_ids: Vec<String>,
    terms: Vec<String>,
    weights: Vec<Vec<f64>>,
}

impl TermDocumentMatrix {
    /// Assemble a matrix from raw parts, validating shape and weights.
    pub fn from_parts(
        doc_ids: Vec<String>,
        terms: Vec<String>,
        weights: Vec<f64>,
        scheme: WeightingScheme,
    ) -> Result<Self, VectorSpaceError> {
        if weights.len() != doc_ids.len() * terms.len() {
            return Err(VectorSpaceError::ShapeMismatch {
                weights: weights.len(),
                docs: doc_ids.len(),
                terms: terms.len(),
            });
        }
        let cols = terms.len().max(1);
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(VectorSpaceError::InvalidWeight {
                    row: i / cols,
                    col: i % cols,
                    value: w,
                });
            }
        }
        Ok(TermDocumentMatrix {
            doc_ids,
            terms,
            weights,
            scheme,
        })
    }

    /// Number of document rows (D).
    pub fn doc_count(&self) -> usize {
        self.doc_ids.len()
    }

    /// Number of term columns (V).
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn scheme(&self) -> WeightingScheme {
        self.scheme
    }

    /// The weight row of one document.
    pub fn row(&self, doc: usize) -> &[f64] {
        let v = self.terms.len();
        &self.weights[doc * v..(doc + 1) * v]
    }

    pub fn weight(&self, doc: usize, term: usize) -> f64 {
        self.weights[doc * self.terms.len() + term]
    }

    pub fn term_index(&self, term: &str) -> Option<usize> {
        self.terms.binary_search_by(|t| t.as_str().cmp(term)).ok()
    }

    pub fn doc_index(&self, doc_id: &str) -> Option<usize> {
        self.doc_ids.iter().position(|d| d == doc_id)
    }

    /// CSV export: header of `doc_id` plus all terms, one row per document,
    /// weights printed with 9 significant digits.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<(), VectorSpaceError> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = Vec::with_capacity(self.terms.len() + 1);
        header.push("doc_id".to_string());
        header.extend(self.terms.iter().cloned());
        w.write_record(&header).map_err(csv_err)?;
        for (i, id) in self.doc_ids.iter().enumerate() {
            let mut record = Vec::with_capacity(self.terms.len() + 1);
            record.push(id.clone());
            record.extend(self.row(i).iter().map(|x| format_weight(*x)));
            w.write_record(&record).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String, VectorSpaceError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| VectorSpaceError::MalformedFile(e.to_string()))
    }

    /// Read a matrix back from the CSV export. The scheme is not stored in
    /// CSV, so the caller supplies it.
    pub fn read_csv<R: io::Read>(
        reader: R,
        scheme: WeightingScheme,
    ) -> Result<Self, VectorSpaceError> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(reader);
        let mut records = r.records();
        let header = match records.next() {
            Some(rec) => rec.map_err(csv_err)?,
            None => return Err(VectorSpaceError::MalformedFile("empty file".into())),
        };
        let mut fields = header.iter();
        if fields.next() != Some("doc_id") {
            return Err(VectorSpaceError::MalformedFile(
                "header must start with 'doc_id'".into(),
            ));
        }
        let terms: Vec<String> = fields.map(str::to_string).collect();
        let mut doc_ids = Vec::new();
        let mut weights = Vec::new();
        for rec in records {
            let rec = rec.map_err(csv_err)?;
            if rec.len() != terms.len() + 1 {
                return Err(VectorSpaceError::MalformedFile(format!(
                    "row '{}' has {} fields, expected {}",
                    rec.get(0).unwrap_or(""),
                    rec.len(),
                    terms.len() + 1
                )));
            }
            doc_ids.push(rec[0].to_string());
            for field in rec.iter().skip(1) {
                let w: f64 = field
                    .parse()
                    .map_err(|_| VectorSpaceError::MalformedFile(format!("bad weight '{field}'")))?;
                weights.push(w);
            }
        }
        TermDocumentMatrix::from_parts(doc_ids, terms, weights, scheme)
    }

    /// JSON export carrying the scheme alongside ids, terms and row-major
    /// weights; lossless for every f64.
    pub fn to_json_string(&self) -> Result<String, VectorSpaceError> {
        let v = self.terms.len();
        let rows: Vec<Vec<f64>> = (0..self.doc_ids.len())
            .map(|i| self.weights[i * v..(i + 1) * v].to_vec())
            .collect();
        let json = MatrixJson {
            scheme: self.scheme,
            doc_ids: self.doc_ids.clone(),
            terms: self.terms.clone(),
            weights: rows,
        };
        serde_json::to_string_pretty(&json)
            .map_err(|e| VectorSpaceError::MalformedFile(e.to_string()))
    }

    pub fn from_json_str(text: &str) -> Result<Self, VectorSpaceError> {
        let json: MatrixJson = serde_json::from_str(text)
            .map_err(|e| VectorSpaceError::MalformedFile(e.to_string()))?;
        let expected = json.terms.len();
        for row in &json.weights {
            if row.len() != expected {
                return Err(VectorSpaceError::MalformedFile(format!(
                    "row has {} weights, expected {expected}",
                    row.len()
                )));
            }
        }
        TermDocumentMatrix::from_parts(
            json.doc_ids,
            json.terms,
            json.weights.into_iter().flatten().collect(),
            json.scheme,
        )
    }
}

/// 9 significant digits, locale-independent, round-trips through parse.
fn format_weight(w: f64) -> String {
    format!("{w:.8e}")
}

fn csv_err(e: csv::Error) -> VectorSpaceError {
    VectorSpaceError::MalformedFile(e.to_string())
}

/// Fill the weight grid for `documents` under `scheme`.
///
/// `vocab` must have been built from exactly these documents, in any order;
/// a term missing from the vocabulary is reported as a mismatch.
pub fn build_matrix(
    documents: &[Document],
    vocab: &Vocabulary,
    scheme: WeightingScheme,
) -> Result<TermDocumentMatrix, VectorSpaceError> {
    if documents.is_empty() {
        return Err(VectorSpaceError::EmptyCorpus);
    }
    if documents.len() != vocab.doc_count() {
        return Err(VectorSpaceError::CorpusSizeMismatch {
            expected: vocab.doc_count(),
            got: documents.len(),
        });
    }
    let v = vocab.len();
    let d = documents.len();
    let mut weights = vec![0.0; d * v];
    for (row, doc) in documents.iter().enumerate() {
        for (term, &count) in &doc.term_counts {
            let col = vocab
                .term_index(term)
                .ok_or_else(|| VectorSpaceError::VocabularyMismatch {
                    doc: doc.id.clone(),
                    term: term.clone(),
                })?;
            let tf = tf_weight(count, doc.kept_token_total)?;
            weights[row * v + col] = match scheme {
                WeightingScheme::TfRatio => tf,
                WeightingScheme::TfIdf => tf * idf(vocab.doc_frequency(col), d)?,
            };
        }
    }
    TermDocumentMatrix::from_parts(
        documents.iter().map(|doc| doc.id.clone()).collect(),
        vocab.terms().to_vec(),
        weights,
        scheme,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn doc(id: &str, counts: &[(&str, usize)]) -> Document {
        let map: BTreeMap<String, usize> =
            counts.iter().map(|(t, c)| (t.to_string(), *c)).collect();
        Document::from_counts(id, None, map)
    }

    #[test]
    fn vocabulary_is_sorted_union_with_df() {
        let docs = vec![doc("d0", &[("film", 2)]), doc("d1", &[("film", 1), ("award", 1)])];
        let vocab = build_vocabulary(&docs).unwrap();
        assert_eq!(vocab.terms(), ["award", "film"]);
        assert_eq!(vocab.doc_frequency(0), 1);
        assert_eq!(vocab.doc_frequency(1), 2);
        assert_eq!(vocab.len(), 2);
        assert_eq!(vocab.doc_count(), 2);
    }

    #[test]
    fn empty_corpus_is_an_error_but_empty_documents_are_not() {
        assert!(matches!(
            build_vocabulary(&[]),
            Err(VectorSpaceError::EmptyCorpus)
        ));
        let vocab = build_vocabulary(&[doc("d0", &[])]).unwrap();
        assert!(vocab.is_empty());
        assert_eq!(vocab.doc_count(), 1);
    }

    #[test]
    fn disjoint_documents_have_unit_df() {
        let docs: Vec<Document> = (0..5)
            .map(|i| {
                let term = format!("term{}", (b'a' + i as u8) as char);
                doc(&format!("d{i}"), &[(term.as_str(), 1)])
            })
            .collect();
        let vocab = build_vocabulary(&docs).unwrap();
        assert_eq!(vocab.len(), 5);
        for (_, df) in vocab.iter() {
            assert_eq!(df, 1);
        }
    }

    #[test]
    fn tf_weight_is_the_count_ratio() {
        assert_eq!(tf_weight(2, 4).unwrap(), 0.5);
        assert_eq!(tf_weight(0, 10).unwrap(), 0.0);
        assert!(matches!(
            tf_weight(1, 0),
            Err(VectorSpaceError::ZeroLengthDocument)
        ));
    }

    #[test]
    fn idf_is_log_ratio() {
        assert_eq!(idf(3, 3).unwrap(), 0.0);
        assert_eq!(idf(1, 1).unwrap(), 0.0);
        let v = idf(5, 100).unwrap();
        assert!((v - 2.995732273553991).abs() < 1e-12, "ln(20) mismatch: {v}");
        assert!(matches!(idf(0, 4), Err(VectorSpaceError::InvalidDf { .. })));
        assert!(matches!(idf(5, 4), Err(VectorSpaceError::InvalidDf { .. })));
    }

    #[test]
    fn single_document_tf_row() {
        let docs = vec![doc("d0", &[("film", 2), ("award", 2)])];
        let vocab = build_vocabulary(&docs).unwrap();
        let m = build_matrix(&docs, &vocab, WeightingScheme::TfRatio).unwrap();
        assert_eq!(m.row(0), [0.5, 0.5]);
    }

    #[test]
    fn ubiquitous_term_column_is_zero_under_tf_idf() {
        let docs = vec![
            doc("d0", &[("film", 2), ("award", 1)]),
            doc("d1", &[("film", 1)]),
            doc("d2", &[("film", 3), ("net", 1)]),
        ];
        let vocab = build_vocabulary(&docs).unwrap();
        let m = build_matrix(&docs, &vocab, WeightingScheme::TfIdf).unwrap();
        let film = m.term_index("film").unwrap();
        for row in 0..m.doc_count() {
            assert_eq!(m.weight(row, film), 0.0);
        }
        // non-ubiquitous terms keep positive weight where present
        let net = m.term_index("net").unwrap();
        assert!(m.weight(2, net) > 0.0);
    }

    #[test]
    fn vocabulary_mismatch_is_reported() {
        let docs = vec![doc("d0", &[("film", 1)])];
        let vocab = build_vocabulary(&docs).unwrap();
        let other = vec![doc("d0", &[("surprise", 1)])];
        assert!(matches!(
            build_matrix(&other, &vocab, WeightingScheme::TfRatio),
            Err(VectorSpaceError::VocabularyMismatch { .. })
        ));
    }

    #[test]
    fn csv_round_trips_at_nine_digits() {
        let docs = vec![
            doc("a/x.txt", &[("film", 1), ("net", 2)]),
            doc("b/y.txt", &[("net", 1)]),
        ];
        let vocab = build_vocabulary(&docs).unwrap();
        let m = build_matrix(&docs, &vocab, WeightingScheme::TfIdf).unwrap();
        let csv1 = m.to_csv_string().unwrap();
        let back = TermDocumentMatrix::read_csv(csv1.as_bytes(), WeightingScheme::TfIdf).unwrap();
        let csv2 = back.to_csv_string().unwrap();
        assert_eq!(csv1, csv2, "CSV must round-trip byte-identically");
        assert_eq!(back.doc_ids(), m.doc_ids());
        assert_eq!(back.terms(), m.terms());
    }

    #[test]
    fn json_round_trips_losslessly() {
        let docs = vec![
            doc("a/x.txt", &[("film", 3), ("net", 2)]),
            doc("b/y.txt", &[("net", 1), ("award", 5)]),
        ];
        let vocab = build_vocabulary(&docs).unwrap();
        let m = build_matrix(&docs, &vocab, WeightingScheme::TfIdf).unwrap();
        let back = TermDocumentMatrix::from_json_str(&m.to_json_string().unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn weight_format_is_nine_significant_digits() {
        assert_eq!(format_weight(0.5), "5.00000000e-1");
        assert_eq!(format_weight(0.0), "0.00000000e0");
        assert_eq!(format_weight(2.995732273553991), "2.99573227e0");
    }
}
