//! Batch-selection strategies behind one interface: random, uncertainty,
//! cluster / weighted-cluster representatives, and the submodular baselines.
//!
//! Every strategy returns exactly `min(k, |unlabeled|)` distinct unlabeled
//! ids and is a pure function of `(request, spec, rng stream)`. The
//! diversity-based strategies first prefilter to the `floor(beta * k)` most
//! informative candidates and then pick a diverse subset from those.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::index;

use crate::data::{ExampleId, FeatureVector, Pool, SeededRng};
use crate::error::{Error, Result};
use crate::kmeans::{kmeans, weighted_kmeans, representatives_closest, ClusterModel, KmeansConfig};
use crate::scoring::ScoreVector;
use crate::submodular::{fass_select, greedy_cover_select, greedy_select_eps, distances_to_similarities, CoverageMatrix};

/// Where candidate features come from. The pool serves raw dataset features;
/// model-derived representations can plug in the same way.
pub trait FeatureSource: Sync {
    fn features_of(&self, id: ExampleId) -> Result<&FeatureVector>;
}

impl FeatureSource for Pool {
    fn features_of(&self, id: ExampleId) -> Result<&FeatureVector> {
        self.features(id)
    }
}

/// How a representative is drawn from each cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RepresentativeMode {
    /// The unchosen point nearest to each center (the default).
    #[default]
    ClosestToCenter,
    /// The member with the highest informativeness in each cluster.
    MostInformativeInCluster,
    /// Global top-k of `1 - normalized_center_distance + informativeness`.
    /// May take several ids from one cluster and none from another.
    AggregateScore,
}

/// Which points the submodular objective covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubmodularUniverse {
    /// Cover the whole unlabeled pool; selection is still constrained to the
    /// prefiltered candidates. This is the full facility-location objective
    /// and the default.
    #[default]
    Pool,
    /// Cover only the prefiltered candidates; keeps memory at
    /// `(beta * k)^2`.
    Candidates,
}

/// The strategy family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Random,
    Uncertainty,
    Cluster,
    WCluster,
    Submodular,
    Fass,
}

/// A fully specified selection strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategySpec {
    pub kind: StrategyKind,
    /// Prefilter factor; the candidate set is the `floor(beta * k)` most
    /// informative unlabeled examples. Ignored by random/uncertainty.
    pub beta: f64,
    pub representative_mode: RepresentativeMode,
    pub fass_num_neighbors: usize,
    /// Laziness threshold for the greedy maximizer; 0 = exact.
    pub epsilon: f64,
    pub universe: SubmodularUniverse,
}

pub const DEFAULT_FASS_NEIGHBORS: usize = 50;

impl StrategySpec {
    pub fn new(kind: StrategyKind, beta: f64) -> StrategySpec {
        StrategySpec {
            kind,
            beta,
            representative_mode: RepresentativeMode::default(),
            fass_num_neighbors: DEFAULT_FASS_NEIGHBORS,
            epsilon: 0.0,
            universe: SubmodularUniverse::default(),
        }
    }

    pub fn random() -> StrategySpec {
        StrategySpec::new(StrategyKind::Random, 1.0)
    }

    pub fn uncertainty() -> StrategySpec {
        StrategySpec::new(StrategyKind::Uncertainty, 1.0)
    }

    fn uses_prefilter(&self) -> bool {
        matches!(
            self.kind,
            StrategyKind::Cluster | StrategyKind::WCluster | StrategyKind::Submodular | StrategyKind::Fass
        )
    }

    /// Parses the CLI grammar: `random`, `uncertainty`, `cluster:b=10`,
    /// `wcluster:b=50:rep=closest`, `submodular:b=10:eps=0`,
    /// `fass:b=10:nn=50`.
    pub fn parse(text: &str) -> Result<StrategySpec> {
        let fail = |detail: &str| Error::InvalidStrategySpec {
            spec: text.to_string(),
            detail: detail.to_string(),
        };
        let mut parts = text.split(':');
        let kind = match parts.next().unwrap_or("") {
            "random" => StrategyKind::Random,
            "uncertainty" => StrategyKind::Uncertainty,
            "cluster" => StrategyKind::Cluster,
            "wcluster" => StrategyKind::WCluster,
            "submodular" => StrategyKind::Submodular,
            "fass" => StrategyKind::Fass,
            other => return Err(fail(&format!("unknown strategy kind {other:?}"))),
        };
        let mut spec = StrategySpec::new(kind, 1.0);
        let mut saw_beta = false;
        for part in parts {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| fail(&format!("expected key=value, got {part:?}")))?;
            match key {
                "b" => {
                    if !spec.uses_prefilter() {
                        return Err(fail("b= only applies to prefiltering strategies"));
                    }
                    let b: f64 = value.parse().map_err(|_| fail("b must be a number"))?;
                    if !(b >= 1.0) {
                        return Err(fail("b must be >= 1"));
                    }
                    spec.beta = b;
                    saw_beta = true;
                }
                "rep" => {
                    if !matches!(kind, StrategyKind::Cluster | StrategyKind::WCluster) {
                        return Err(fail("rep= only applies to cluster strategies"));
                    }
                    spec.representative_mode = match value {
                        "closest" => RepresentativeMode::ClosestToCenter,
                        "informative" => RepresentativeMode::MostInformativeInCluster,
                        "aggregate" => RepresentativeMode::AggregateScore,
                        _ => return Err(fail("rep must be closest, informative or aggregate")),
                    };
                }
                "eps" => {
                    if kind != StrategyKind::Submodular && kind != StrategyKind::Fass {
                        return Err(fail("eps= only applies to submodular strategies"));
                    }
                    let e: f64 = value.parse().map_err(|_| fail("eps must be a number"))?;
                    if !(0.0..1.0).contains(&e) {
                        return Err(fail("eps must be in [0, 1)"));
                    }
                    spec.epsilon = e;
                }
                "nn" => {
                    if kind != StrategyKind::Fass {
                        return Err(fail("nn= only applies to fass"));
                    }
                    let nn: usize = value.parse().map_err(|_| fail("nn must be an integer"))?;
                    if nn == 0 {
                        return Err(fail("nn must be >= 1"));
                    }
                    spec.fass_num_neighbors = nn;
                }
                "universe" => {
                    if kind != StrategyKind::Submodular {
                        return Err(fail("universe= only applies to submodular"));
                    }
                    spec.universe = match value {
                        "pool" => SubmodularUniverse::Pool,
                        "candidates" => SubmodularUniverse::Candidates,
                        _ => return Err(fail("universe must be pool or candidates")),
                    };
                }
                other => return Err(fail(&format!("unknown key {other:?}"))),
            }
        }
        if spec.uses_prefilter() && !saw_beta {
            return Err(fail("prefiltering strategies require b="));
        }
        Ok(spec)
    }
}

impl fmt::Display for StrategySpec {
    /// Canonical form of the parse grammar; defaults are omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            StrategyKind::Random => return write!(f, "random"),
            StrategyKind::Uncertainty => return write!(f, "uncertainty"),
            StrategyKind::Cluster => "cluster",
            StrategyKind::WCluster => "wcluster",
            StrategyKind::Submodular => "submodular",
            StrategyKind::Fass => "fass",
        };
        if self.beta == self.beta.trunc() {
            write!(f, "{kind}:b={}", self.beta as u64)?;
        } else {
            write!(f, "{kind}:b={}", self.beta)?;
        }
        match self.representative_mode {
            RepresentativeMode::ClosestToCenter => {}
            RepresentativeMode::MostInformativeInCluster => write!(f, ":rep=informative")?,
            RepresentativeMode::AggregateScore => write!(f, ":rep=aggregate")?,
        }
        if self.epsilon != 0.0 {
            write!(f, ":eps={}", self.epsilon)?;
        }
        if self.kind == StrategyKind::Fass && self.fass_num_neighbors != DEFAULT_FASS_NEIGHBORS {
            write!(f, ":nn={}", self.fass_num_neighbors)?;
        }
        if self.kind == StrategyKind::Submodular && self.universe == SubmodularUniverse::Candidates {
            write!(f, ":universe=candidates")?;
        }
        Ok(())
    }
}

/// Everything a strategy needs to pick one batch.
pub struct SelectionRequest<'a> {
    pub pool: &'a Pool,
    pub scores: &'a ScoreVector,
    pub features: &'a dyn FeatureSource,
    /// Batch size k; the output has `min(k, |unlabeled|)` ids.
    pub batch_size: usize,
}

/// The `min(floor(beta*k), |unlabeled|)` most informative unlabeled ids, in
/// descending score order, score ties toward the lowest id.
pub fn prefilter(scores: &ScoreVector, pool: &Pool, budget: usize) -> Vec<ExampleId> {
    let mut ranked: Vec<(ExampleId, f64)> = pool
        .unlabeled_ids()
        .map(|id| (id, scores.get(id).unwrap_or(0.0)))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(budget);
    ranked.into_iter().map(|(id, _)| id).collect()
}

/// Picks a batch with the given strategy. Returns ascending ids.
pub fn select(
    request: &SelectionRequest<'_>,
    spec: &StrategySpec,
    rng: &mut SeededRng,
) -> Result<Vec<ExampleId>> {
    let unlabeled: Vec<ExampleId> = request.pool.unlabeled_ids().collect();
    if unlabeled.is_empty() {
        return Err(Error::EmptyUnlabeledPool);
    }
    let k = request.batch_size.min(unlabeled.len());

    let mut out = match spec.kind {
        StrategyKind::Random => {
            let picks = index::sample(rng, unlabeled.len(), k);
            picks.into_iter().map(|i| unlabeled[i]).collect()
        }
        StrategyKind::Uncertainty => prefilter(request.scores, request.pool, k),
        StrategyKind::Cluster | StrategyKind::WCluster => {
            let candidates = prefiltered_candidates(request, spec, k);
            if candidates.len() <= k {
                candidates
            } else {
                cluster_representatives(request, spec, &candidates, k, rng)?
            }
        }
        StrategyKind::Submodular => {
            let candidates = prefiltered_candidates(request, spec, k);
            if candidates.len() <= k {
                candidates
            } else {
                let cand_features = gather(request.features, &candidates)?;
                let picked = match spec.universe {
                    SubmodularUniverse::Candidates => {
                        let sim = distances_to_similarities(&cand_features)?;
                        greedy_select_eps(&sim, k, spec.epsilon)?
                    }
                    SubmodularUniverse::Pool => {
                        let universe = gather(request.features, &unlabeled)?;
                        let cov = CoverageMatrix::from_points(&universe, &cand_features)?;
                        greedy_cover_select(&cov, k, spec.epsilon)?
                    }
                };
                picked.into_iter().map(|i| candidates[i]).collect()
            }
        }
        StrategyKind::Fass => {
            let candidates = prefiltered_candidates(request, spec, k);
            if candidates.len() <= k {
                candidates
            } else {
                let cand_features = gather(request.features, &candidates)?;
                let picked = fass_select(&cand_features, k, spec.fass_num_neighbors, spec.epsilon)?;
                picked.into_iter().map(|i| candidates[i]).collect()
            }
        }
    };
    out.sort_unstable();
    debug_assert_eq!(out.len(), k);
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]), "ids must be distinct");
    Ok(out)
}

/// Prefiltered candidates in ascending id order (cluster and greedy inputs
/// tie-break by id, so position order and id order are kept identical).
fn prefiltered_candidates(
    request: &SelectionRequest<'_>,
    spec: &StrategySpec,
    k: usize,
) -> Vec<ExampleId> {
    let budget = ((spec.beta * k as f64).floor() as usize).max(k);
    let mut candidates = prefilter(request.scores, request.pool, budget);
    candidates.sort_unstable();
    candidates
}

fn gather<'a>(
    source: &'a dyn FeatureSource,
    ids: &[ExampleId],
) -> Result<Vec<&'a FeatureVector>> {
    ids.iter().map(|&id| source.features_of(id)).collect()
}

fn cluster_representatives(
    request: &SelectionRequest<'_>,
    spec: &StrategySpec,
    candidates: &[ExampleId],
    k: usize,
    rng: &mut SeededRng,
) -> Result<Vec<ExampleId>> {
    use rand::RngCore;
    let points = gather(request.features, candidates)?;
    let config = KmeansConfig::new(k, rng.next_u64());
    let model = match spec.kind {
        StrategyKind::Cluster => kmeans(&points, &config)?,
        StrategyKind::WCluster => {
            let weights: Vec<f64> = candidates
                .iter()
                .map(|&id| request.scores.get(id).unwrap_or(0.0))
                .collect();
            weighted_kmeans(&points, &weights, &config)?
        }
        _ => unreachable!("cluster_representatives only serves cluster kinds"),
    };
    let mut reps = match spec.representative_mode {
        RepresentativeMode::ClosestToCenter => representatives_closest(&model, &points, candidates),
        RepresentativeMode::MostInformativeInCluster => {
            representatives_most_informative(&model, candidates, request.scores)
        }
        RepresentativeMode::AggregateScore => {
            representatives_aggregate(&model, candidates, &points, request.scores, k)
        }
    };
    // Converged models have no empty clusters, so per-cluster modes yield k
    // ids. If iteration was cut off early a cluster can still be empty; top
    // up from the remaining candidates by informativeness to keep the batch
    // size contract.
    if reps.len() < k {
        let chosen: std::collections::BTreeSet<ExampleId> = reps.iter().copied().collect();
        let mut rest: Vec<(f64, ExampleId)> = candidates
            .iter()
            .filter(|id| !chosen.contains(id))
            .map(|&id| (request.scores.get(id).unwrap_or(0.0), id))
            .collect();
        rest.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        reps.extend(rest.into_iter().take(k - reps.len()).map(|(_, id)| id));
    }
    Ok(reps)
}

/// Per cluster, the member with the highest informativeness (ties toward the
/// lowest id). Clusters partition the candidates, so the result is distinct.
pub fn representatives_most_informative(
    model: &ClusterModel,
    candidate_ids: &[ExampleId],
    scores: &ScoreVector,
) -> Vec<ExampleId> {
    let mut best: BTreeMap<usize, (f64, ExampleId)> = BTreeMap::new();
    for (i, &cluster) in model.assignments.iter().enumerate() {
        let id = candidate_ids[i];
        let score = scores.get(id).unwrap_or(0.0);
        match best.get(&cluster) {
            Some(&(s, b)) if s > score || (s == score && b < id) => {}
            _ => {
                best.insert(cluster, (score, id));
            }
        }
    }
    best.into_values().map(|(_, id)| id).collect()
}

/// Global top-k by aggregate score `1 - d_norm + s`, where `d_norm` is the
/// min-max normalized distance of each candidate to its own cluster center.
/// Unlike the per-cluster modes this may return several ids from one cluster
/// and none from another.
pub fn representatives_aggregate(
    model: &ClusterModel,
    candidate_ids: &[ExampleId],
    points: &[&FeatureVector],
    scores: &ScoreVector,
    k: usize,
) -> Vec<ExampleId> {
    let dists: Vec<f64> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let c = &model.centers[model.assignments[i]];
            let c_sq: f64 = c.iter().map(|v| v * v).sum();
            p.squared_dist_to_dense(c, c_sq).sqrt()
        })
        .collect();
    let d_min = dists.iter().copied().fold(f64::INFINITY, f64::min);
    let d_max = dists.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = d_max - d_min;

    let mut ranked: Vec<(f64, ExampleId)> = dists
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let d_norm = if span > 0.0 { (d - d_min) / span } else { 0.0 };
            let s = scores.get(candidate_ids[i]).unwrap_or(0.0);
            (1.0 - d_norm + s, candidate_ids[i])
        })
        .collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    ranked.truncate(k);
    ranked.into_iter().map(|(_, id)| id).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for text in [
            "random",
            "uncertainty",
            "cluster:b=10",
            "wcluster:b=50",
            "wcluster:b=50:rep=informative",
            "cluster:b=10:rep=aggregate",
            "submodular:b=10",
            "submodular:b=10:universe=candidates",
            "fass:b=10:nn=25",
        ] {
            let spec = StrategySpec::parse(text).unwrap();
            assert_eq!(spec.to_string(), text, "canonical form differs");
        }
    }

    #[test]
    fn parse_normalizes_defaults() {
        let spec = StrategySpec::parse("submodular:b=10:eps=0").unwrap();
        assert_eq!(spec.to_string(), "submodular:b=10");
        let spec = StrategySpec::parse("wcluster:b=50:rep=closest").unwrap();
        assert_eq!(spec.to_string(), "wcluster:b=50");
        let spec = StrategySpec::parse("fass:b=10:nn=50").unwrap();
        assert_eq!(spec.to_string(), "fass:b=10");
    }

    #[test]
    fn parse_rejects_bad_specs() {
        for text in [
            "",
            "clusterb=10",
            "cluster",           // missing b
            "cluster:b=0.5",     // b < 1
            "random:b=10",       // b on non-prefilter strategy
            "uncertainty:rep=closest",
            "submodular:b=10:rep=closest", // rep on non-cluster
            "cluster:b=10:nn=3",           // nn on non-fass
            "cluster:b=10:frobnicate=1",
            "fass:b=10:nn=0",
            "submodular:b=10:eps=1.5",
        ] {
            assert!(StrategySpec::parse(text).is_err(), "{text:?} should fail");
        }
    }
}
