//! K-medoids partitioning of the matrix rows.
//!
//! Medoids are actual documents, not synthetic centroids. Starting from a
//! seeded or label-stratified medoid set, the search scans every
//! (medoid, non-medoid) pair in a fixed order, applies the first swap that
//! strictly lowers the total assigned distance, and restarts the scan.
//! Strict improvement over a finite family of medoid sets guarantees
//! termination; the fixed scan order and seeded initialization make the
//! whole procedure a deterministic function of its inputs, independent of
//! how many threads evaluate distances.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vector_space::{TermDocumentMatrix, WeightingScheme};

#[derive(Debug, Error)]
pub enum KmedoidsError {
    #[error("vectors have different lengths ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },
    #[error("k = {k} is out of range for {d} documents")]
    BadK { k: usize, d: usize },
    #[error("label-stratified initialization requires a label on every document")]
    MissingLabels,
    #[error("label-stratified initialization needs k = distinct labels ({labels}), got k = {k}")]
    StratifiedK { k: usize, labels: usize },
    #[error("row {row} is out of range for {d} documents")]
    BadRow { row: usize, d: usize },
    #[error("medoid list contains duplicate row {0}")]
    DuplicateMedoid(usize),
    #[error("row {0} is not a medoid")]
    NotAMedoid(usize),
    #[error("row {0} is already a medoid")]
    AlreadyMedoid(usize),
}

/// Distance between weight rows. Manhattan is the default; Euclidean is an
/// opt-in alternative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceKind {
    #[default]
    Manhattan,
    Euclidean,
}

impl DistanceKind {
    fn eval(self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            DistanceKind::Manhattan => l1(x, y),
            DistanceKind::Euclidean => l2(x, y),
        }
    }
}

fn l1(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum()
}

fn l2(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Sum of absolute coordinate differences.
pub fn manhattan_distance(x: &[f64], y: &[f64]) -> Result<f64, KmedoidsError> {
    check_dims(x, y)?;
    Ok(l1(x, y))
}

/// Straight-line distance; not used by the default configuration.
pub fn euclidean_distance(x: &[f64], y: &[f64]) -> Result<f64, KmedoidsError> {
    check_dims(x, y)?;
    Ok(l2(x, y))
}

fn check_dims(x: &[f64], y: &[f64]) -> Result<(), KmedoidsError> {
    if x.len() != y.len() {
        return Err(KmedoidsError::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(())
}

/// How the initial medoid set is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitStrategy {
    /// k distinct rows drawn by a seeded generator; a pure function of
    /// (row count, k, seed).
    RandomSeeded { seed: u64 },
    /// One medoid per distinct label: the lowest row index carrying it.
    /// Requires a label on every document and k equal to the label count.
    LabelStratified,
}

/// Pick the starting medoids. The returned indices are distinct and sorted.
pub fn initialize_medoids(
    matrix: &TermDocumentMatrix,
    k: usize,
    strategy: &InitStrategy,
    labels: &[Option<&str>],
) -> Result<Vec<usize>, KmedoidsError> {
    let d = matrix.doc_count();
    if k < 1 || k > d {
        return Err(KmedoidsError::BadK { k, d });
    }
    match strategy {
        InitStrategy::RandomSeeded { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut rows: Vec<usize> = (0..d).collect();
            for i in 0..k {
                let j = rng.gen_range(i..d);
                rows.swap(i, j);
            }
            let mut medoids = rows[..k].to_vec();
            medoids.sort_unstable();
            Ok(medoids)
        }
        InitStrategy::LabelStratified => {
            if labels.len() != d || labels.iter().any(Option::is_none) {
                return Err(KmedoidsError::MissingLabels);
            }
            let mut first_row: std::collections::BTreeMap<&str, usize> = Default::default();
            for (row, label) in labels.iter().enumerate() {
                first_row.entry(label.unwrap()).or_insert(row);
            }
            if first_row.len() != k {
                return Err(KmedoidsError::StratifiedK {
                    k,
                    labels: first_row.len(),
                });
            }
            let mut medoids: Vec<usize> = first_row.into_values().collect();
            medoids.sort_unstable();
            Ok(medoids)
        }
    }
}

/// A converged (or cut-off) partition of the documents.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Medoid row indices, sorted ascending.
    pub medoids: Vec<usize>,
    /// Per document, the position of its medoid within `medoids`.
    pub assignment: Vec<usize>,
    /// Sum over all documents of the distance to their assigned medoid.
    pub total_cost: f64,
    /// Number of accepted swaps.
    pub iterations: usize,
    /// False when the swap budget ran out before a full improving-swap-free
    /// scan completed.
    pub converged: bool,
}

impl Clustering {
    pub fn k(&self) -> usize {
        self.medoids.len()
    }

    pub fn doc_count(&self) -> usize {
        self.assignment.len()
    }

    /// Medoid row index of one document.
    pub fn medoid_of(&self, doc: usize) -> usize {
        self.medoids[self.assignment[doc]]
    }

    /// Rows assigned to the cluster at `cluster_index`, ascending.
    pub fn members(&self, cluster_index: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == cluster_index)
            .map(|(row, _)| row)
            .collect()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.medoids.len()];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    /// Re-derive the total cost from the matrix; used as a consistency
    /// check against the stored value.
    pub fn recompute_cost(&self, matrix: &TermDocumentMatrix, kind: DistanceKind) -> f64 {
        (0..self.doc_count())
            .map(|doc| kind.eval(matrix.row(doc), matrix.row(self.medoid_of(doc))))
            .sum()
    }
}

fn validate_medoids(d: usize, medoids: &[usize]) -> Result<(), KmedoidsError> {
    if medoids.is_empty() || medoids.len() > d {
        return Err(KmedoidsError::BadK {
            k: medoids.len(),
            d,
        });
    }
    let mut seen = vec![false; d];
    for &m in medoids {
        if m >= d {
            return Err(KmedoidsError::BadRow { row: m, d });
        }
        if seen[m] {
            return Err(KmedoidsError::DuplicateMedoid(m));
        }
        seen[m] = true;
    }
    Ok(())
}

/// Nearest-medoid assignment for every document.
///
/// A medoid is always assigned to itself at distance zero; other documents
/// go to the medoid with the least distance, lowest medoid row index on a
/// tie. The returned cost is the sum of assigned distances, accumulated in
/// ascending document order so the result is independent of thread count.
pub fn assign(
    matrix: &TermDocumentMatrix,
    medoids: &[usize],
    kind: DistanceKind,
) -> Result<(Vec<usize>, f64), KmedoidsError> {
    validate_medoids(matrix.doc_count(), medoids)?;
    let per_doc: Vec<(usize, f64)> = (0..matrix.doc_count())
        .into_par_iter()
        .map(|doc| nearest_medoid(matrix, medoids, doc, kind))
        .collect();
    let mut assignment = Vec::with_capacity(per_doc.len());
    let mut total_cost = 0.0;
    for (cluster, dist) in per_doc {
        assignment.push(cluster);
        total_cost += dist;
    }
    Ok((assignment, total_cost))
}

fn nearest_medoid(
    matrix: &TermDocumentMatrix,
    medoids: &[usize],
    doc: usize,
    kind: DistanceKind,
) -> (usize, f64) {
    let row = matrix.row(doc);
    let mut best = (0usize, f64::INFINITY);
    for (pos, &m) in medoids.iter().enumerate() {
        if m == doc {
            return (pos, 0.0);
        }
        let dist = kind.eval(row, matrix.row(m));
        if dist < best.1 {
            best = (pos, dist);
        }
    }
    best
}

/// Cost of replacing `medoid_out` with `candidate_in`, and whether the swap
/// strictly improves on the clustering's current cost.
pub fn try_swap(
    matrix: &TermDocumentMatrix,
    clustering: &Clustering,
    medoid_out: usize,
    candidate_in: usize,
    kind: DistanceKind,
) -> Result<(f64, bool), KmedoidsError> {
    let d = matrix.doc_count();
    if medoid_out >= d {
        return Err(KmedoidsError::BadRow { row: medoid_out, d });
    }
    if candidate_in >= d {
        return Err(KmedoidsError::BadRow {
            row: candidate_in,
            d,
        });
    }
    let position = clustering
        .medoids
        .binary_search(&medoid_out)
        .map_err(|_| KmedoidsError::NotAMedoid(medoid_out))?;
    if clustering.medoids.binary_search(&candidate_in).is_ok() {
        return Err(KmedoidsError::AlreadyMedoid(candidate_in));
    }
    let mut swapped = clustering.medoids.clone();
    swapped[position] = candidate_in;
    swapped.sort_unstable();
    let (_, new_total_cost) = assign(matrix, &swapped, kind)?;
    Ok((new_total_cost, new_total_cost < clustering.total_cost))
}

/// Pairwise distances, computed once up front so swap scans are cheap.
struct DistanceCache {
    dists: Vec<f64>,
    n: usize,
}

impl DistanceCache {
    fn build(matrix: &TermDocumentMatrix, kind: DistanceKind) -> Self {
        let n = matrix.doc_count();
        let dists: Vec<f64> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let row = matrix.row(i);
                (0..n).map(move |j| kind.eval(row, matrix.row(j)))
            })
            .collect();
        DistanceCache { dists, n }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.dists[i * self.n + j]
    }

    /// Mirrors `assign` exactly, reading distances from the cache.
    fn assign(&self, medoids: &[usize]) -> (Vec<usize>, f64) {
        let mut assignment = Vec::with_capacity(self.n);
        let mut total = 0.0;
        for doc in 0..self.n {
            let mut best = (0usize, f64::INFINITY);
            for (pos, &m) in medoids.iter().enumerate() {
                if m == doc {
                    best = (pos, 0.0);
                    break;
                }
                let dist = self.get(doc, m);
                if dist < best.1 {
                    best = (pos, dist);
                }
            }
            assignment.push(best.0);
            total += best.1;
        }
        (assignment, total)
    }

    fn swap_cost(&self, medoids: &[usize], position: usize, candidate: usize) -> f64 {
        let mut swapped = medoids.to_vec();
        swapped[position] = candidate;
        swapped.sort_unstable();
        self.assign(&swapped).1
    }
}

/// Run the full local search and keep the sequence of accepted costs.
///
/// The trace starts with the initial assignment cost and gains one entry
/// per accepted swap; it is strictly decreasing.
pub fn cluster_with_trace(
    matrix: &TermDocumentMatrix,
    k: usize,
    strategy: &InitStrategy,
    labels: &[Option<&str>],
    max_iterations: usize,
    kind: DistanceKind,
) -> Result<(Clustering, Vec<f64>), KmedoidsError> {
    let n = matrix.doc_count();
    let mut medoids = initialize_medoids(matrix, k, strategy, labels)?;
    let cache = DistanceCache::build(matrix, kind);
    let (mut assignment, mut total_cost) = cache.assign(&medoids);
    let mut trace = vec![total_cost];
    let mut iterations = 0;
    let mut converged = false;

    'search: while iterations < max_iterations {
        let mut is_medoid = vec![false; n];
        for &m in &medoids {
            is_medoid[m] = true;
        }
        for position in 0..medoids.len() {
            for candidate in 0..n {
                if is_medoid[candidate] {
                    continue;
                }
                let new_cost = cache.swap_cost(&medoids, position, candidate);
                if new_cost < total_cost {
                    medoids[position] = candidate;
                    medoids.sort_unstable();
                    let (a, c) = cache.assign(&medoids);
                    assignment = a;
                    total_cost = c;
                    iterations += 1;
                    trace.push(total_cost);
                    continue 'search;
                }
            }
        }
        converged = true;
        break;
    }

    Ok((
        Clustering {
            medoids,
            assignment,
            total_cost,
            iterations,
            converged,
        },
        trace,
    ))
}

/// Partition the matrix rows into k clusters.
///
/// Deterministic given (matrix, k, strategy, labels, max_iterations): same
/// inputs yield a bit-identical clustering. Running out of swap budget is
/// not an error; the best clustering found so far comes back with
/// `converged == false`.
pub fn cluster(
    matrix: &TermDocumentMatrix,
    k: usize,
    strategy: &InitStrategy,
    labels: &[Option<&str>],
    max_iterations: usize,
    kind: DistanceKind,
) -> Result<Clustering, KmedoidsError> {
    cluster_with_trace(matrix, k, strategy, labels, max_iterations, kind).map(|(c, _)| c)
}

/// Serializable description of one cluster for the run report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub medoid: String,
    pub members: Vec<String>,
    pub intra_cost: f64,
}

/// The JSON clustering report written by batch runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringReport {
    pub scheme: WeightingScheme,
    pub k: usize,
    pub seed: u64,
    pub medoids: Vec<String>,
    pub clusters: Vec<ClusterReport>,
    pub total_cost: f64,
    pub iterations: usize,
    pub converged: bool,
    pub distance: DistanceKind,
}

impl ClusteringReport {
    pub fn new(
        clustering: &Clustering,
        matrix: &TermDocumentMatrix,
        seed: u64,
        kind: DistanceKind,
    ) -> Self {
        let ids = matrix.doc_ids();
        let clusters = clustering
            .medoids
            .iter()
            .enumerate()
            .map(|(position, &medoid)| {
                let members = clustering.members(position);
                let intra_cost = members
                    .iter()
                    .map(|&doc| kind.eval(matrix.row(doc), matrix.row(medoid)))
                    .sum();
                ClusterReport {
                    medoid: ids[medoid].clone(),
                    members: members.iter().map(|&doc| ids[doc].clone()).collect(),
                    intra_cost,
                }
            })
            .collect();
        ClusteringReport {
            scheme: matrix.scheme(),
            k: clustering.k(),
            seed,
            medoids: clustering.medoids.iter().map(|&m| ids[m].clone()).collect(),
            clusters,
            total_cost: clustering.total_cost,
            iterations: clustering.iterations,
            converged: clustering.converged,
            distance: kind,
        }
    }

    pub fn to_json_string(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json_str(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
