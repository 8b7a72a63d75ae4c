//! Cluster quality against domain labels.
//!
//! The score is medoid-referenced purity: the percentage of a cluster's
//! documents whose label matches the medoid's label. The observation table
//! lists size and efficiency per cluster; its size-weighted mean equals the
//! overall fraction of documents that landed with a medoid of their own
//! domain.

use std::fmt::Write as _;
use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kmedoids::{self, Clustering, DistanceKind, InitStrategy, KmedoidsError};
use crate::text_pipeline::Document;
use crate::vector_space::{self, VectorSpaceError, WeightingScheme};

#[derive(Debug, Error)]
pub enum EvaluationError {
    #[error("document '{0}' has no domain label")]
    UnlabeledDocument(String),
    #[error("clustering covers {clustering} documents, corpus has {corpus}")]
    CorpusMismatch { clustering: usize, corpus: usize },
    #[error("malformed table file: {0}")]
    MalformedFile(String),
    #[error(transparent)]
    VectorSpace(#[from] VectorSpaceError),
    #[error(transparent)]
    Kmedoids(#[from] KmedoidsError),
}

/// Percentage of members whose label equals the medoid's label.
///
/// Full precision is returned; use [`format_percent`] for the 2-decimal
/// display form.
pub fn cluster_efficiency(
    member_labels: &[Option<&str>],
    medoid_label: &str,
) -> Result<f64, EvaluationError> {
    debug_assert!(!member_labels.is_empty(), "clusters are never empty");
    let mut matching = 0usize;
    for (i, label) in member_labels.iter().enumerate() {
        match label {
            Some(l) if *l == medoid_label => matching += 1,
            Some(_) => {}
            None => {
                return Err(EvaluationError::UnlabeledDocument(format!(
                    "cluster member {i}"
                )))
            }
        }
    }
    Ok(100.0 * matching as f64 / member_labels.len() as f64)
}

/// Round half-up to two decimals, the table's display precision.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Display form of an efficiency value, e.g. `18.60`.
pub fn format_percent(x: f64) -> String {
    format!("{:.2}", round2(x))
}

/// One table row: cluster number, size, and efficiency percentage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationRow {
    pub cluster_no: usize,
    pub doc_count: usize,
    /// Full-precision percentage; rendered to two decimals.
    pub efficiency_percent: f64,
}

/// Per-cluster sizes and efficiencies for one clustering run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationTable {
    pub rows: Vec<ObservationRow>,
    pub corpus_size: usize,
    pub scheme: WeightingScheme,
    pub k: usize,
}

impl ObservationTable {
    /// Size-weighted mean efficiency: the overall percentage of documents
    /// matching their medoid's label.
    pub fn size_weighted_mean_efficiency(&self) -> f64 {
        if self.corpus_size == 0 {
            return 0.0;
        }
        let weighted: f64 = self
            .rows
            .iter()
            .map(|r| r.efficiency_percent * r.doc_count as f64)
            .sum();
        weighted / self.corpus_size as f64
    }

    /// Aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<12}{:>16}{:>12}", "CLUSTER No", "No of DOCUMENTS", "EFFICIENCY");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:<12}{:>16}{:>11}%",
                row.cluster_no,
                row.doc_count,
                format_percent(row.efficiency_percent)
            );
        }
        out
    }

    /// CSV rendering: `cluster_no,doc_count,efficiency_percent`.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("cluster_no,doc_count,efficiency_percent\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{}",
                row.cluster_no,
                row.doc_count,
                format_percent(row.efficiency_percent)
            );
        }
        out
    }

    /// Read the CSV rendering back (at display precision).
    pub fn read_csv<R: io::Read>(
        reader: R,
        scheme: WeightingScheme,
    ) -> Result<Self, EvaluationError> {
        let mut text = String::new();
        let mut reader = reader;
        reader
            .read_to_string(&mut text)
            .map_err(|e| EvaluationError::MalformedFile(e.to_string()))?;
        let mut lines = text.lines();
        match lines.next() {
            Some("cluster_no,doc_count,efficiency_percent") => {}
            other => {
                return Err(EvaluationError::MalformedFile(format!(
                    "unexpected header {other:?}"
                )))
            }
        }
        let mut rows = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let bad = || EvaluationError::MalformedFile(format!("bad row '{line}'"));
            if fields.len() != 3 {
                return Err(bad());
            }
            rows.push(ObservationRow {
                cluster_no: fields[0].parse().map_err(|_| bad())?,
                doc_count: fields[1].parse().map_err(|_| bad())?,
                efficiency_percent: fields[2].parse().map_err(|_| bad())?,
            });
        }
        let corpus_size = rows.iter().map(|r| r.doc_count).sum();
        let k = rows.len();
        Ok(ObservationTable {
            rows,
            corpus_size,
            scheme,
            k,
        })
    }
}

/// Score every cluster of `clustering` against the document labels.
///
/// Rows come out in medoid order. Every document must carry a label.
pub fn observation_table(
    clustering: &Clustering,
    documents: &[Document],
    scheme: WeightingScheme,
) -> Result<ObservationTable, EvaluationError> {
    if clustering.doc_count() != documents.len() {
        return Err(EvaluationError::CorpusMismatch {
            clustering: clustering.doc_count(),
            corpus: documents.len(),
        });
    }
    if let Some(unlabeled) = documents.iter().find(|d| d.label.is_none()) {
        return Err(EvaluationError::UnlabeledDocument(unlabeled.id.clone()));
    }
    let label_of = |row: usize| documents[row].label.as_deref().unwrap();
    let mut rows = Vec::with_capacity(clustering.k());
    for (cluster_no, &medoid) in clustering.medoids.iter().enumerate() {
        let members = clustering.members(cluster_no);
        let member_labels: Vec<Option<&str>> =
            members.iter().map(|&row| Some(label_of(row))).collect();
        let efficiency_percent = cluster_efficiency(&member_labels, label_of(medoid))?;
        rows.push(ObservationRow {
            cluster_no,
            doc_count: members.len(),
            efficiency_percent,
        });
    }
    Ok(ObservationTable {
        rows,
        corpus_size: documents.len(),
        scheme,
        k: clustering.k(),
    })
}

/// Observation tables for the same corpus under both weighting schemes,
/// with the difference of their size-weighted mean efficiencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeComparison {
    pub tf: ObservationTable,
    pub tf_idf: ObservationTable,
    pub mean_efficiency_tf: f64,
    pub mean_efficiency_tf_idf: f64,
    /// `mean_efficiency_tf - mean_efficiency_tf_idf`; positive means the
    /// plain term-frequency run scored higher.
    pub mean_efficiency_delta: f64,
}

/// Cluster the same documents under `tf` and `tf-idf` with identical
/// initialization, and score both runs.
pub fn compare_schemes(
    documents: &[Document],
    k: usize,
    strategy: &InitStrategy,
    max_iterations: usize,
    kind: DistanceKind,
) -> Result<SchemeComparison, EvaluationError> {
    let vocab = vector_space::build_vocabulary(documents)?;
    let labels: Vec<Option<&str>> = documents.iter().map(|d| d.label.as_deref()).collect();
    let mut tables = Vec::with_capacity(2);
    for scheme in [WeightingScheme::TfRatio, WeightingScheme::TfIdf] {
        let matrix = vector_space::build_matrix(documents, &vocab, scheme)?;
        let clustering = kmedoids::cluster(&matrix, k, strategy, &labels, max_iterations, kind)?;
        tables.push(observation_table(&clustering, documents, scheme)?);
    }
    let tf_idf = tables.pop().unwrap();
    let tf = tables.pop().unwrap();
    let mean_efficiency_tf = tf.size_weighted_mean_efficiency();
    let mean_efficiency_tf_idf = tf_idf.size_weighted_mean_efficiency();
    Ok(SchemeComparison {
        tf,
        tf_idf,
        mean_efficiency_tf,
        mean_efficiency_tf_idf,
        mean_efficiency_delta: mean_efficiency_tf - mean_efficiency_tf_idf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn labeled_doc(id: &str, label: &str, counts: &[(&str, usize)]) -> Document {
        let map: BTreeMap<String, usize> =
            counts.iter().map(|(t, c)| (t.to_string(), *c)).collect();
        Document::from_counts(id, Some(label.to_string()), map)
    }

    #[test]
    fn efficiency_formula_matches_reference_rows() {
        // 43 documents, 8 of the medoid's domain
        let mut labels = vec![Some("ent"); 8];
        labels.extend(vec![Some("other"); 35]);
        let eff = cluster_efficiency(&labels, "ent").unwrap();
        assert_eq!(format_percent(eff), "18.60");

        // 7 documents, 3 matching
        let mut labels = vec![Some("lit"); 3];
        labels.extend(vec![Some("other"); 4]);
        let eff = cluster_efficiency(&labels, "lit").unwrap();
        assert_eq!(format_percent(eff), "42.86");
        assert!((eff - 42.85).abs() <= 0.02);

        // 4 documents, 2 matching
        let mut labels = vec![Some("mus"); 2];
        labels.extend(vec![Some("other"); 2]);
        let eff = cluster_efficiency(&labels, "mus").unwrap();
        assert_eq!(format_percent(eff), "50.00");
    }

    #[test]
    fn singleton_cluster_is_fully_pure() {
        let eff = cluster_efficiency(&[Some("sport")], "sport").unwrap();
        assert_eq!(format_percent(eff), "100.00");
    }

    #[test]
    fn unlabeled_member_is_an_error() {
        let labels = [Some("a"), None];
        assert!(matches!(
            cluster_efficiency(&labels, "a"),
            Err(EvaluationError::UnlabeledDocument(_))
        ));
    }

    #[test]
    fn single_cluster_table_of_uniform_labels() {
        let docs: Vec<Document> = (0..10)
            .map(|i| labeled_doc(&format!("d{i}"), "sport", &[("net", i + 1)]))
            .collect();
        let vocab = vector_space::build_vocabulary(&docs).unwrap();
        let matrix = vector_space::build_matrix(&docs, &vocab, WeightingScheme::TfRatio).unwrap();
        let clustering = kmedoids::cluster(
            &matrix,
            1,
            &InitStrategy::RandomSeeded { seed: 0 },
            &[],
            100,
            DistanceKind::Manhattan,
        )
        .unwrap();
        let table = observation_table(&clustering, &docs, WeightingScheme::TfRatio).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].doc_count, 10);
        assert_eq!(format_percent(table.rows[0].efficiency_percent), "100.00");
        assert_eq!(table.corpus_size, 10);
        assert_eq!(format_percent(table.size_weighted_mean_efficiency()), "100.00");
    }

    #[test]
    fn table_text_and_csv_render_two_decimals() {
        let table = ObservationTable {
            rows: vec![
                ObservationRow {
                    cluster_no: 0,
                    doc_count: 43,
                    efficiency_percent: 100.0 * 8.0 / 43.0,
                },
                ObservationRow {
                    cluster_no: 1,
                    doc_count: 7,
                    efficiency_percent: 100.0 * 3.0 / 7.0,
                },
            ],
            corpus_size: 50,
            scheme: WeightingScheme::TfRatio,
            k: 2,
        };
        let text = table.to_text();
        assert!(text.contains("CLUSTER No"), "{text}");
        assert!(text.contains("18.60%"), "{text}");
        assert!(text.contains("42.86%"), "{text}");

        let csv = table.to_csv_string();
        assert!(csv.starts_with("cluster_no,doc_count,efficiency_percent\n"));
        assert!(csv.contains("0,43,18.60\n"));
        let back = ObservationTable::read_csv(csv.as_bytes(), WeightingScheme::TfRatio).unwrap();
        assert_eq!(back.rows.len(), 2);
        assert_eq!(back.rows[0].doc_count, 43);
        assert_eq!(back.corpus_size, 50);
    }

    #[test]
    fn unlabeled_corpus_cannot_be_scored() {
        let mut docs = vec![labeled_doc("d0", "a", &[("x", 1)])];
        docs.push(Document::from_counts(
            "d1",
            None,
            BTreeMap::from([("y".to_string(), 1)]),
        ));
        let vocab = vector_space::build_vocabulary(&docs).unwrap();
        let matrix = vector_space::build_matrix(&docs, &vocab, WeightingScheme::TfRatio).unwrap();
        let clustering = kmedoids::cluster(
            &matrix,
            1,
            &InitStrategy::RandomSeeded { seed: 0 },
            &[],
            10,
            DistanceKind::Manhattan,
        )
        .unwrap();
        assert!(matches!(
            observation_table(&clustering, &docs, WeightingScheme::TfRatio),
            Err(EvaluationError::UnlabeledDocument(id)) if id == "d1"
        ));
    }

    #[test]
    fn uniform_df_makes_schemes_agree() {
        // every term appears in exactly two documents, so idf is the same
        // constant everywhere and tf-idf is a uniform rescaling of tf
        let docs = vec![
            labeled_doc("a0", "alpha", &[("ant", 3), ("bee", 1)]),
            labeled_doc("a1", "alpha", &[("ant", 2), ("cat", 1)]),
            labeled_doc("b0", "beta", &[("bee", 2), ("dog", 4)]),
            labeled_doc("b1", "beta", &[("cat", 2), ("dog", 1)]),
        ];
        let cmp = compare_schemes(
            &docs,
            2,
            &InitStrategy::RandomSeeded { seed: 5 },
            100,
            DistanceKind::Manhattan,
        )
        .unwrap();
        assert_eq!(cmp.tf.rows, cmp.tf_idf.rows);
        assert_eq!(cmp.mean_efficiency_delta, 0.0);
    }

    #[test]
    fn comparison_tables_partition_the_corpus() {
        let docs = vec![
            labeled_doc("a0", "alpha", &[("ant", 3)]),
            labeled_doc("a1", "alpha", &[("ant", 2), ("bee", 1)]),
            labeled_doc("b0", "beta", &[("dog", 2)]),
            labeled_doc("b1", "beta", &[("dog", 1), ("emu", 2)]),
        ];
        let cmp = compare_schemes(
            &docs,
            2,
            &InitStrategy::RandomSeeded { seed: 9 },
            100,
            DistanceKind::Manhattan,
        )
        .unwrap();
        for table in [&cmp.tf, &cmp.tf_idf] {
            let total: usize = table.rows.iter().map(|r| r.doc_count).sum();
            assert_eq!(total, 4);
            for row in &table.rows {
                assert!((0.0..=100.0).contains(&row.efficiency_percent));
            }
        }
        assert!(cmp.mean_efficiency_delta.is_finite());
    }
}
