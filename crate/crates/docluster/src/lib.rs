//! Document clustering around medoids, from raw text to summaries.
//!
//! The crate covers the full batch pipeline:
//!
//! 1. [`text_pipeline`] — tokenize, drop stopwords, stem, count terms.
//! 2. [`vector_space`] — build the vocabulary and the documents × terms
//!    weight matrix under `tf` or `tf-idf` weighting.
//! 3. [`kmedoids`] — partition the rows into k clusters by swapping
//!    medoids under Manhattan distance until no swap lowers the cost.
//! 4. [`evaluation`] — score clusters against domain labels and emit the
//!    observation table.
//! 5. [`summarizer`] — extract the highest-weighted sentences per document
//!    or per cluster.
//!
//! Everything is deterministic: a corpus, a seed and a configuration fully
//! determine every output, independent of thread count.
//!
//! ```
//! use docluster::kmedoids::{DistanceKind, InitStrategy};
//! use docluster::text_pipeline::{Document, Pipeline};
//! use docluster::vector_space::WeightingScheme;
//!
//! let pipeline = Pipeline::builtin();
//! let docs = vec![
//!     Document::process("a", None, "The film won awards.", &pipeline),
//!     Document::process("b", None, "A film about films.", &pipeline),
//!     Document::process("c", None, "Players score over the net.", &pipeline),
//!     Document::process("d", None, "The net decides the score.", &pipeline),
//! ];
//! let run = docluster::cluster_corpus(
//!     &docs,
//!     WeightingScheme::TfRatio,
//!     2,
//!     &InitStrategy::RandomSeeded { seed: 42 },
//!     100,
//!     DistanceKind::Manhattan,
//! )?;
//! assert_eq!(run.clustering.cluster_sizes().iter().sum::<usize>(), 4);
//! # Ok::<(), docluster::Error>(())
//! ```

pub mod evaluation;
pub mod kmedoids;
pub mod summarizer;
pub mod text_pipeline;
pub mod vector_space;

use thiserror::Error;

use kmedoids::{Clustering, DistanceKind, InitStrategy, KmedoidsError};
use text_pipeline::Document;
use vector_space::{TermDocumentMatrix, VectorSpaceError, Vocabulary, WeightingScheme};

/// Any error the end-to-end pipeline can surface.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    VectorSpace(#[from] VectorSpaceError),
    #[error(transparent)]
    Kmedoids(#[from] KmedoidsError),
    #[error(transparent)]
    Evaluation(#[from] evaluation::EvaluationError),
}

/// Output of one corpus run: the vocabulary, the weight matrix and the
/// clustering built on it.
#[derive(Debug, Clone)]
pub struct ClusterRun {
    pub vocabulary: Vocabulary,
    pub matrix: TermDocumentMatrix,
    pub clustering: Clustering,
}

/// Vocabulary → matrix → clustering in one call.
pub fn cluster_corpus(
    documents: &[Document],
    scheme: WeightingScheme,
    k: usize,
    strategy: &InitStrategy,
    max_iterations: usize,
    kind: DistanceKind,
) -> Result<ClusterRun, Error> {
    let vocabulary = vector_space::build_vocabulary(documents)?;
    let matrix = vector_space::build_matrix(documents, &vocabulary, scheme)?;
    let labels: Vec<Option<&str>> = documents.iter().map(|d| d.label.as_deref()).collect();
    let clustering = kmedoids::cluster(&matrix, k, strategy, &labels, max_iterations, kind)?;
    Ok(ClusterRun {
        vocabulary,
        matrix,
        clustering,
    })
}

// Run the guide's code blocks as doctests so the book cannot drift from
// the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/text-pipeline.md")]
    mod text_pipeline {}
    #[doc = include_str!("../../../book/src/vector-space.md")]
    mod vector_space {}
    #[doc = include_str!("../../../book/src/kmedoids.md")]
    mod kmedoids {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/summarization.md")]
    mod summarization {}
}
