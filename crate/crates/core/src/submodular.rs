//! Facility-location batch selection: greedy submodular maximization over a
//! similarity transform of pairwise distances, plus the nearest-neighbor
//! sparsified variant.
//!
//! Distances turn into similarities via `sim = 1 - d / d_max`, which is
//! order-reversing and bounded in [0,1], so maximizing the coverage value
//! `sum_i max_{j in S} sim(i,j)` is equivalent to minimizing the summed
//! distance of every point to its nearest selected point.
//!
//! The greedy maximizer uses lazy evaluation: a max-heap of stale marginal
//! gains, re-evaluated on pop. Its output is identical to naive greedy,
//! including ties (broken toward the lowest column index).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::data::{euclidean_distance, FeatureVector};
use crate::error::{Error, Result};

/// Record of how a similarity matrix was derived.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub metric: &'static str,
    pub transform: &'static str,
    pub max_distance: f64,
}

/// Symmetric candidate-by-candidate similarities in [0,1].
#[derive(Debug, Clone)]
pub struct SimilarityMatrix {
    n: usize,
    data: Vec<f64>,
    pub derivation: Derivation,
}

impl SimilarityMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// Pairwise Euclidean distances rescaled to similarities `1 - d/d_max`.
/// If all points coincide (`d_max = 0`) every similarity is 1.
pub fn distances_to_similarities(points: &[&FeatureVector]) -> Result<SimilarityMatrix> {
    let n = points.len();
    if n == 0 {
        return Err(Error::EmptySubset);
    }
    let dim = points[0].dim();
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
    }

    // distance rows in parallel; symmetry by construction
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0.0; n];
            for j in 0..n {
                if j != i {
                    row[j] = euclidean_distance(points[i], points[j]).expect("dims checked");
                }
            }
            row
        })
        .collect();

    let mut d_max = 0.0f64;
    for row in &rows {
        for &d in row {
            if d > d_max {
                d_max = d;
            }
        }
    }

    let mut data = Vec::with_capacity(n * n);
    for row in &rows {
        for &d in row {
            data.push(if d_max == 0.0 { 1.0 } else { 1.0 - d / d_max });
        }
    }

    Ok(SimilarityMatrix {
        n,
        data,
        derivation: Derivation {
            metric: "euclidean",
            transform: "1 - d/d_max",
            max_distance: d_max,
        },
    })
}

/// The facility-location coverage value `sum_i max_{j in S} sim(i, j)`.
pub fn facility_location_value(selected: &[usize], sim: &SimilarityMatrix) -> Result<f64> {
    if selected.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut total = 0.0;
    for i in 0..sim.len() {
        let row = sim.row(i);
        let mut best = f64::NEG_INFINITY;
        for &j in selected {
            if row[j] > best {
                best = row[j];
            }
        }
        total += best;
    }
    Ok(total)
}

/// A rectangular coverage table: how well each candidate column covers each
/// universe row. Square similarity matrices are the special case where the
/// universe is the candidate set itself.
#[derive(Debug, Clone)]
pub struct CoverageMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>, // row-major rows x cols
}

impl CoverageMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn value(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    /// Coverage of `universe` rows by `candidates` columns, using the same
    /// `1 - d/d_max` transform with `d_max` over all (row, column) pairs.
    pub fn from_points(
        universe: &[&FeatureVector],
        candidates: &[&FeatureVector],
    ) -> Result<CoverageMatrix> {
        if universe.is_empty() || candidates.is_empty() {
            return Err(Error::EmptySubset);
        }
        let dim = universe[0].dim();
        for p in universe.iter().chain(candidates.iter()) {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
        }
        let cols = candidates.len();
        let cand_sq: Vec<(Vec<f64>, f64)> = candidates
            .iter()
            .map(|c| {
                let d = c.to_dense();
                let sq = d.iter().map(|v| v * v).sum();
                (d, sq)
            })
            .collect();
        let mut data: Vec<f64> = universe
            .par_iter()
            .flat_map_iter(|u| {
                cand_sq
                    .iter()
                    .map(move |(c, sq)| u.squared_dist_to_dense(c, *sq).sqrt())
            })
            .collect();
        let d_max = data.iter().copied().fold(0.0f64, f64::max);
        for d in data.iter_mut() {
            *d = if d_max == 0.0 { 1.0 } else { 1.0 - *d / d_max };
        }
        Ok(CoverageMatrix {
            rows: universe.len(),
            cols,
            data,
        })
    }

    fn from_similarity(sim: &SimilarityMatrix) -> CoverageMatrix {
        CoverageMatrix {
            rows: sim.n,
            cols: sim.n,
            data: sim.data.clone(),
        }
    }
}

#[derive(Debug)]
struct HeapEntry {
    gain: f64,
    col: usize,
    stamp: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.gain == other.gain && self.col == other.col
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // max gain first; ties toward the lowest column
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.col.cmp(&self.col))
    }
}

fn marginal_gain(cov: &CoverageMatrix, col: usize, cover: &[f64]) -> f64 {
    let mut gain = 0.0;
    for r in 0..cov.rows {
        let v = cov.value(r, col) - cover[r];
        if v > 0.0 {
            gain += v;
        }
    }
    gain
}

/// Lazy greedy maximization of coverage value under a cardinality constraint.
///
/// With `epsilon = 0` the output is exactly the naive greedy selection. With
/// `epsilon > 0` a popped stale entry whose refreshed gain is at least
/// `(1 - epsilon)` times the best remaining stale gain is accepted without
/// reinsertion, trading exactness for fewer re-evaluations.
pub fn greedy_cover_select(cov: &CoverageMatrix, k: usize, epsilon: f64) -> Result<Vec<usize>> {
    if k > cov.cols {
        return Err(Error::SelectionTooLarge { k, n: cov.cols });
    }
    let mut cover = vec![0.0f64; cov.rows];
    let mut heap = BinaryHeap::with_capacity(cov.cols);
    let gains: Vec<f64> = (0..cov.cols)
        .into_par_iter()
        .map(|c| marginal_gain(cov, c, &cover))
        .collect();
    for (col, gain) in gains.into_iter().enumerate() {
        heap.push(HeapEntry {
            gain,
            col,
            stamp: 0,
        });
    }

    let mut selected = Vec::with_capacity(k);
    while selected.len() < k {
        let top = heap.pop().expect("heap holds all unselected columns");
        // an entry is fresh when its gain was computed against the current
        // selection; stamps count selections made at computation time
        if top.stamp == selected.len() {
            apply_selection(cov, top.col, &mut cover, &mut selected);
            continue;
        }
        let fresh = marginal_gain(cov, top.col, &cover);
        let next_key = heap.peek().map(|e| e.gain).unwrap_or(f64::NEG_INFINITY);
        let take_now = if epsilon == 0.0 {
            fresh > next_key
        } else {
            fresh >= (1.0 - epsilon) * next_key
        };
        if take_now || heap.is_empty() {
            apply_selection(cov, top.col, &mut cover, &mut selected);
        } else {
            heap.push(HeapEntry {
                gain: fresh,
                col: top.col,
                stamp: selected.len(),
            });
        }
    }
    Ok(selected)
}

fn apply_selection(cov: &CoverageMatrix, col: usize, cover: &mut [f64], selected: &mut Vec<usize>) {
    for (r, c) in cover.iter_mut().enumerate() {
        let v = cov.value(r, col);
        if v > *c {
            *c = v;
        }
    }
    selected.push(col);
}

/// Greedy (lazy) facility-location selection on a square similarity matrix,
/// returning selected indices in greedy order.
pub fn greedy_select(sim: &SimilarityMatrix, k: usize) -> Result<Vec<usize>> {
    greedy_select_eps(sim, k, 0.0)
}

/// [`greedy_select`] with an explicit laziness threshold.
pub fn greedy_select_eps(sim: &SimilarityMatrix, k: usize, epsilon: f64) -> Result<Vec<usize>> {
    let cov = CoverageMatrix::from_similarity(sim);
    greedy_cover_select(&cov, k, epsilon)
}

/// Nearest-neighbor facility location: `w_ij = sim(i,j)` when `j` is one of
/// `i`'s `num_neighbors` nearest candidates (the candidate itself included,
/// distance ties toward the lowest index), else 0. Greedy-maximizes
/// `sum_i max_{j in S} w_ij` and returns `k` indices in greedy order.
pub fn fass_select(
    points: &[&FeatureVector],
    k: usize,
    num_neighbors: usize,
    epsilon: f64,
) -> Result<Vec<usize>> {
    if num_neighbors == 0 {
        return Err(Error::InvalidConfig("num_neighbors must be >= 1".into()));
    }
    let n = points.len();
    if k > n {
        return Err(Error::SelectionTooLarge { k, n });
    }
    let sim = distances_to_similarities(points)?;
    let nn = num_neighbors.min(n);

    // keep only each row's nn most similar columns
    let mut data = vec![0.0f64; n * n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        let row = sim.row(i);
        order.clear();
        order.extend(0..n);
        // most similar first; ties toward the lowest index
        order.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then_with(|| a.cmp(&b)));
        for &j in order.iter().take(nn) {
            data[i * n + j] = row[j];
        }
    }
    let cov = CoverageMatrix {
        rows: n,
        cols: n,
        data,
    };
    greedy_cover_select(&cov, k, epsilon)
}
