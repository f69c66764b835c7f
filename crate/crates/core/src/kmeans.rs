//! Weighted and unweighted k-means (Lloyd's algorithm) with k-means++
//! initialization, plus extraction of cluster representatives.
//!
//! The weighted objective is `sum_i w_i * ||x_i - mu_{a(i)}||^2` with the
//! closed-form centroid update `mu_k = sum(w x) / sum(w)` over the members of
//! cluster k. With uniform weights this reduces exactly to ordinary k-means;
//! the unweighted path is kept separate so the reduction can be verified
//! rather than assumed.
//!
//! Determinism rules used throughout: nearest-center ties pick the lowest
//! center index, point ties pick the lowest point index, and per-cluster
//! accumulation runs in point order so results do not depend on the worker
//! count. Only the assignment step parallelizes.

use rand::Rng;
use rayon::prelude::*;

use crate::data::{FeatureVector, SeededRng};
use crate::error::{Error, Result};

/// Floor applied to weights so zero-score points still participate.
pub const WEIGHT_FLOOR: f64 = 1e-12;

/// Knobs for [`weighted_kmeans`] / [`kmeans`].
#[derive(Debug, Clone)]
pub struct KmeansConfig {
    pub k: usize,
    pub max_iterations: usize,
    pub rel_tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl KmeansConfig {
    pub fn new(k: usize, seed: u64) -> KmeansConfig {
        KmeansConfig {
            k,
            max_iterations: 100,
            rel_tolerance: 1e-6,
            restarts: 1,
            seed,
        }
    }
}

/// A converged clustering: centers, per-point assignments, the weights used,
/// and the final objective value.
#[derive(Debug, Clone)]
pub struct ClusterModel {
    pub centers: Vec<Vec<f64>>,
    pub assignments: Vec<usize>,
    pub weights: Vec<f64>,
    pub objective: f64,
}

impl ClusterModel {
    pub fn k(&self) -> usize {
        self.centers.len()
    }

    /// Point indices grouped by cluster, in ascending point order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.centers.len()];
        for (i, &c) in self.assignments.iter().enumerate() {
            out[c].push(i);
        }
        out
    }
}

/// k-means++ seeding: the first center is sampled proportional to weight,
/// each next center proportional to weight times squared distance to the
/// nearest already-chosen center. `weights = None` means uniform.
///
/// If every weight is zero the weights fall back to uniform. If every
/// remaining mass is zero (duplicate points), the lowest-index unchosen point
/// is taken, so k distinct point indices are always used.
pub fn kmeanspp_init(
    points: &[&FeatureVector],
    weights: Option<&[f64]>,
    k: usize,
    rng: &mut SeededRng,
) -> Result<Vec<Vec<f64>>> {
    let n = points.len();
    if n < k {
        return Err(Error::TooFewPoints {
            requested: k,
            available: n,
        });
    }
    if k == 0 {
        return Err(Error::TooFewPoints {
            requested: 0,
            available: n,
        });
    }
    if let Some(w) = weights {
        debug_assert_eq!(w.len(), n);
        if w.iter().any(|&x| x < 0.0) {
            return Err(Error::InvalidConfig("negative k-means weight".into()));
        }
    }
    let weight_of = |i: usize| -> f64 {
        match weights {
            Some(w) if w.iter().any(|&x| x > 0.0) => w[i],
            _ => 1.0,
        }
    };

    let mut chosen = vec![false; n];
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);

    // first center: mass = weight
    let masses: Vec<f64> = (0..n).map(weight_of).collect();
    let first = weighted_pick(&masses, rng, &chosen);
    chosen[first] = true;
    centers.push(points[first].to_dense());

    // nearest squared distance to any chosen center, kept incrementally
    let mut d2: Vec<f64> = {
        let c0 = &centers[0];
        let c0_sq = sq_norm(c0);
        points
            .iter()
            .map(|p| p.squared_dist_to_dense(c0, c0_sq))
            .collect()
    };

    while centers.len() < k {
        let masses: Vec<f64> = (0..n).map(|i| weight_of(i) * d2[i]).collect();
        let next = weighted_pick(&masses, rng, &chosen);
        chosen[next] = true;
        let c = points[next].to_dense();
        let c_sq = sq_norm(&c);
        for (i, p) in points.iter().enumerate() {
            let d = p.squared_dist_to_dense(&c, c_sq);
            if d < d2[i] {
                d2[i] = d;
            }
        }
        centers.push(c);
    }
    Ok(centers)
}

/// Samples an index proportional to `masses`; if all masses are zero, takes
/// the lowest unchosen index.
fn weighted_pick(masses: &[f64], rng: &mut SeededRng, chosen: &[bool]) -> usize {
    let total: f64 = masses.iter().sum();
    if total > 0.0 {
        let u = rng.random_range(0.0..total);
        let mut acc = 0.0;
        for (i, &m) in masses.iter().enumerate() {
            acc += m;
            if u < acc {
                return i;
            }
        }
        // rounding pushed u past the last positive mass
        if let Some(i) = masses.iter().rposition(|&m| m > 0.0) {
            return i;
        }
    }
    chosen.iter().position(|&c| !c).unwrap_or(0)
}

/// One Lloyd step.
///
/// Assigns each point to its nearest center (ties toward the lowest center
/// index), computes new centers as weighted means of the new assignment, and
/// returns the objective of the new assignment against the *old* centers —
/// the quantity that is non-increasing across successive calls.
///
/// Clusters that end up with no members or zero total weight are re-seeded to
/// the point with the largest weighted squared distance to its current
/// center (distinct points for multiple re-seeds, ties toward the lowest
/// point index).
pub fn lloyd_iterate(
    points: &[&FeatureVector],
    weights: Option<&[f64]>,
    centers: &[Vec<f64>],
) -> (Vec<usize>, Vec<Vec<f64>>, f64) {
    assert!(!centers.is_empty(), "centers must be non-empty");
    let n = points.len();
    let dim = centers[0].len();
    let center_sq: Vec<f64> = centers.iter().map(|c| sq_norm(c)).collect();

    // assignment step (parallel, order-preserving)
    let assigned: Vec<(usize, f64)> = points
        .par_iter()
        .map(|p| {
            let mut best = 0usize;
            let mut best_d = p.squared_dist_to_dense(&centers[0], center_sq[0]);
            for (c, center) in centers.iter().enumerate().skip(1) {
                let d = p.squared_dist_to_dense(center, center_sq[c]);
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            (best, best_d)
        })
        .collect();

    let assignments: Vec<usize> = assigned.iter().map(|&(c, _)| c).collect();

    // objective of the new assignment under the old centers, accumulated in
    // point order
    let mut objective = 0.0;
    for (i, &(_, d)) in assigned.iter().enumerate() {
        objective += point_weight(weights, i) * d;
    }

    // update step: weighted sums in fixed point order
    let mut sums = vec![vec![0.0; dim]; centers.len()];
    let mut mass = vec![0.0; centers.len()];
    let mut counts = vec![0usize; centers.len()];
    for (i, &(c, _)) in assigned.iter().enumerate() {
        let w = point_weight(weights, i);
        counts[c] += 1;
        mass[c] += w;
        if w != 0.0 {
            for (j, v) in points[i].nonzeros() {
                sums[c][j] += w * v;
            }
        }
    }

    let mut new_centers: Vec<Vec<f64>> = Vec::with_capacity(centers.len());
    let mut reseeds: Vec<usize> = Vec::new();
    for c in 0..centers.len() {
        if counts[c] == 0 || mass[c] == 0.0 {
            reseeds.push(c);
            new_centers.push(Vec::new()); // placeholder
        } else {
            let inv = 1.0 / mass[c];
            let mut center = std::mem::take(&mut sums[c]);
            for v in center.iter_mut() {
                *v *= inv;
            }
            new_centers.push(center);
        }
    }

    if !reseeds.is_empty() {
        let mut taken = vec![false; n];
        for &c in &reseeds {
            let mut far_i = usize::MAX;
            let mut far_d = f64::NEG_INFINITY;
            for (i, &(_, d)) in assigned.iter().enumerate() {
                if taken[i] {
                    continue;
                }
                let wd = point_weight(weights, i) * d;
                if wd > far_d {
                    far_d = wd;
                    far_i = i;
                }
            }
            let pick = if far_i == usize::MAX { 0 } else { far_i };
            taken[pick] = true;
            new_centers[c] = points[pick].to_dense();
        }
    }

    (assignments, new_centers, objective)
}

fn point_weight(weights: Option<&[f64]>, i: usize) -> f64 {
    match weights {
        Some(w) => w[i],
        None => 1.0,
    }
}

fn sq_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Weighted k-means. Weights below [`WEIGHT_FLOOR`] are floored so zero-score
/// points still participate; if every weight is zero, uniform weights are
/// used instead. The floored weights are the ones stored in the model.
pub fn weighted_kmeans(
    points: &[&FeatureVector],
    weights: &[f64],
    config: &KmeansConfig,
) -> Result<ClusterModel> {
    if weights.len() != points.len() {
        return Err(Error::InvalidConfig(format!(
            "{} weights for {} points",
            weights.len(),
            points.len()
        )));
    }
    if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
        return Err(Error::InvalidConfig("weights must be finite and >= 0".into()));
    }
    let effective: Vec<f64> = if weights.iter().all(|&w| w == 0.0) {
        vec![1.0; points.len()]
    } else {
        weights.iter().map(|&w| w.max(WEIGHT_FLOOR)).collect()
    };
    run_lloyd(points, Some(&effective), config)
}

/// Unweighted k-means: plain means, no weight arithmetic anywhere.
pub fn kmeans(points: &[&FeatureVector], config: &KmeansConfig) -> Result<ClusterModel> {
    run_lloyd(points, None, config)
}

fn run_lloyd(
    points: &[&FeatureVector],
    weights: Option<&[f64]>,
    config: &KmeansConfig,
) -> Result<ClusterModel> {
    if points.len() < config.k {
        return Err(Error::TooFewPoints {
            requested: config.k,
            available: points.len(),
        });
    }
    if config.k == 0 || config.max_iterations == 0 || config.restarts == 0 {
        return Err(Error::InvalidConfig(
            "k, max_iterations and restarts must be positive".into(),
        ));
    }

    let root = SeededRng::new(config.seed);
    let mut best: Option<ClusterModel> = None;
    for restart in 0..config.restarts {
        let mut rng = root.substream(&format!("restart-{restart}"));
        let model = single_run(points, weights, config, &mut rng)?;
        let better = match &best {
            None => true,
            Some(b) => model.objective < b.objective,
        };
        if better {
            best = Some(model);
        }
    }
    Ok(best.expect("restarts >= 1"))
}

fn single_run(
    points: &[&FeatureVector],
    weights: Option<&[f64]>,
    config: &KmeansConfig,
    rng: &mut SeededRng,
) -> Result<ClusterModel> {
    let mut centers = kmeanspp_init(points, weights, config.k, rng)?;
    let mut prev_assignments: Option<Vec<usize>> = None;
    let mut prev_objective = f64::INFINITY;
    let mut assignments: Vec<usize> = Vec::new();

    for _ in 0..config.max_iterations {
        let (assign, new_centers, objective) = lloyd_iterate(points, weights, &centers);
        let fixpoint = prev_assignments.as_ref() == Some(&assign);
        let small_change = prev_objective.is_finite()
            && (prev_objective - objective) < config.rel_tolerance * prev_objective.abs();
        assignments = assign;
        centers = new_centers;
        prev_assignments = Some(assignments.clone());
        prev_objective = objective;
        if fixpoint || small_change {
            break;
        }
    }

    // final objective against the final centers so the stored model is
    // self-consistent
    let center_sq: Vec<f64> = centers.iter().map(|c| sq_norm(c)).collect();
    let mut objective = 0.0;
    for (i, p) in points.iter().enumerate() {
        let c = assignments[i];
        objective += point_weight(weights, i) * p.squared_dist_to_dense(&centers[c], center_sq[c]);
    }

    Ok(ClusterModel {
        centers,
        assignments,
        weights: match weights {
            Some(w) => w.to_vec(),
            None => vec![1.0; points.len()],
        },
        objective,
    })
}

/// For each center in index order, the nearest not-yet-chosen point (ties
/// toward the lowest id). Guarantees k distinct ids.
pub fn representatives_closest(
    model: &ClusterModel,
    points: &[&FeatureVector],
    ids: &[u64],
) -> Vec<u64> {
    debug_assert_eq!(points.len(), ids.len());
    let mut taken = vec![false; points.len()];
    let mut out = Vec::with_capacity(model.centers.len());
    for center in &model.centers {
        let c_sq = sq_norm(center);
        let mut best: Option<(f64, u64, usize)> = None;
        for (i, p) in points.iter().enumerate() {
            if taken[i] {
                continue;
            }
            let d = p.squared_dist_to_dense(center, c_sq);
            let candidate = (d, ids[i], i);
            best = match best {
                None => Some(candidate),
                Some(cur) => {
                    if candidate.0 < cur.0 || (candidate.0 == cur.0 && candidate.1 < cur.1) {
                        Some(candidate)
                    } else {
                        Some(cur)
                    }
                }
            };
        }
        if let Some((_, id, i)) = best {
            taken[i] = true;
            out.push(id);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(vals: &[f64]) -> FeatureVector {
        FeatureVector::dense(vals.to_vec()).unwrap()
    }

    fn refs(points: &[FeatureVector]) -> Vec<&FeatureVector> {
        points.iter().collect()
    }

    #[test]
    fn weighted_mean_on_a_line() {
        // points {0, 1}, weights {1, 3}, one cluster -> center 0.75
        let pts = vec![fv(&[0.0]), fv(&[1.0])];
        let centers = vec![vec![0.5]];
        let (assign, new_centers, _) = lloyd_iterate(&refs(&pts), Some(&[1.0, 3.0]), &centers);
        assert_eq!(assign, vec![0, 0]);
        assert!((new_centers[0][0] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn uniform_weights_equal_plain_means() {
        let pts = vec![fv(&[0.0, 0.0]), fv(&[2.0, 0.0]), fv(&[10.0, 4.0])];
        let w = vec![1.0; 3];
        let centers = vec![vec![1.0, 0.0], vec![9.0, 4.0]];
        let (_, weighted, _) = lloyd_iterate(&refs(&pts), Some(&w), &centers);
        let (_, unweighted, _) = lloyd_iterate(&refs(&pts), None, &centers);
        assert_eq!(weighted, unweighted);
    }

    #[test]
    fn colinear_split_converges_to_midpoints() {
        let pts = vec![fv(&[0.0]), fv(&[1.0]), fv(&[10.0]), fv(&[11.0])];
        let mut centers = vec![vec![0.0], vec![10.0]];
        for _ in 0..5 {
            let (_, next, _) = lloyd_iterate(&refs(&pts), None, &centers);
            centers = next;
        }
        assert!((centers[0][0] - 0.5).abs() < 1e-12);
        assert!((centers[1][0] - 10.5).abs() < 1e-12);
    }

    #[test]
    fn k_equals_n_uses_every_point() {
        let pts = vec![fv(&[0.0]), fv(&[5.0]), fv(&[9.0])];
        let mut rng = SeededRng::new(1);
        let centers = kmeanspp_init(&refs(&pts), None, 3, &mut rng).unwrap();
        let mut got: Vec<f64> = centers.iter().map(|c| c[0]).collect();
        got.sort_by(f64::total_cmp);
        assert_eq!(got, vec![0.0, 5.0, 9.0]);
    }

    #[test]
    fn degenerate_weights_pick_the_massive_point() {
        let pts = vec![fv(&[0.0]), fv(&[5.0]), fv(&[9.0])];
        let w = vec![0.0, 1.0, 0.0];
        let mut rng = SeededRng::new(7);
        let centers = kmeanspp_init(&refs(&pts), Some(&w), 1, &mut rng).unwrap();
        assert_eq!(centers[0], vec![5.0]);
    }

    #[test]
    fn init_is_deterministic() {
        let pts: Vec<FeatureVector> = (0..100)
            .map(|i| fv(&[(i % 17) as f64, (i % 7) as f64]))
            .collect();
        let a = kmeanspp_init(&refs(&pts), None, 5, &mut SeededRng::new(3)).unwrap();
        let b = kmeanspp_init(&refs(&pts), None, 5, &mut SeededRng::new(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn too_few_points_is_an_error() {
        let pts = vec![fv(&[0.0])];
        let mut rng = SeededRng::new(0);
        assert!(matches!(
            kmeanspp_init(&refs(&pts), None, 2, &mut rng),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn k1_center_is_weighted_mean() {
        let pts = vec![fv(&[1.0]), fv(&[2.0]), fv(&[7.0])];
        let w = vec![1.0, 2.0, 1.0];
        let model = weighted_kmeans(&refs(&pts), &w, &KmeansConfig::new(1, 0)).unwrap();
        let expect = (1.0 + 4.0 + 7.0) / 4.0;
        assert!((model.centers[0][0] - expect).abs() < 1e-12);
        assert_eq!(model.assignments, vec![0, 0, 0]);
    }

    #[test]
    fn all_zero_weights_fall_back_to_uniform() {
        let pts = vec![fv(&[0.0]), fv(&[1.0]), fv(&[2.0])];
        let model = weighted_kmeans(&refs(&pts), &[0.0, 0.0, 0.0], &KmeansConfig::new(1, 0)).unwrap();
        assert!((model.centers[0][0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn representatives_are_distinct_under_contention() {
        // both centers are nearest to point 0; the second center must take
        // its second-nearest point instead
        let pts = vec![fv(&[0.0]), fv(&[1.0]), fv(&[2.0])];
        let model = ClusterModel {
            centers: vec![vec![0.1], vec![0.2]],
            assignments: vec![0, 1, 1],
            weights: vec![1.0; 3],
            objective: 0.0,
        };
        let ids = vec![10, 11, 12];
        let got = representatives_closest(&model, &refs(&pts), &ids);
        assert_eq!(got, vec![10, 11]);
    }

    #[test]
    fn singleton_clusters_return_their_points() {
        let pts = vec![fv(&[0.0]), fv(&[10.0]), fv(&[20.0])];
        let model = kmeans(&refs(&pts), &KmeansConfig::new(3, 5)).unwrap();
        let ids = vec![0, 1, 2];
        let mut got = representatives_closest(&model, &refs(&pts), &ids);
        got.sort_unstable();
        assert_eq!(got, ids);
    }

    #[test]
    fn uniform_weighted_matches_unweighted_model() {
        let pts: Vec<FeatureVector> = (0..40)
            .map(|i| fv(&[(i % 13) as f64, (i % 5) as f64, (i % 3) as f64]))
            .collect();
        let cfg = KmeansConfig::new(4, 99);
        let w = vec![1.0; pts.len()];
        let a = weighted_kmeans(&refs(&pts), &w, &cfg).unwrap();
        let b = kmeans(&refs(&pts), &cfg).unwrap();
        assert_eq!(a.assignments, b.assignments);
        for (ca, cb) in a.centers.iter().zip(&b.centers) {
            for (x, y) in ca.iter().zip(cb) {
                assert!((x - y).abs() <= 1e-12);
            }
        }
    }
}
