//! Synthetic datasets with controllable redundancy.
//!
//! Each class is a Gaussian blob; every base point is replicated
//! `duplication_factor` times with tiny jitter. Cranking the duplication
//! factor recreates the regime where a pool is full of near-duplicates and
//! top-k uncertainty selection wastes its budget on copies of the same point.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, FeatureVector, SeededRng};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub num_classes: usize,
    /// Distinct base points per class.
    pub points_per_class: usize,
    /// Total copies of each base point (1 = no duplication).
    pub duplication_factor: usize,
    /// Standard deviation of each blob around its center. Replica jitter has
    /// magnitude `cluster_spread / 100`.
    pub cluster_spread: f64,
    pub dim: usize,
    pub seed: u64,
}

impl SynthConfig {
    fn validate(&self) -> Result<()> {
        if self.num_classes == 0
            || self.points_per_class == 0
            || self.duplication_factor == 0
            || self.dim == 0
        {
            return Err(Error::InvalidConfig(
                "synthetic dataset sizes must be positive".into(),
            ));
        }
        if !(self.cluster_spread > 0.0) {
            return Err(Error::InvalidConfig("cluster_spread must be positive".into()));
        }
        Ok(())
    }
}

/// Generates `num_classes * points_per_class * duplication_factor` examples,
/// deterministically from the seed.
///
/// Per class: a center drawn from a standard normal, then `points_per_class`
/// base points at `center + spread * N(0, I)`. Each base point is emitted
/// once as-is plus `duplication_factor - 1` jittered copies displaced by a
/// uniformly random direction scaled by `U(0, spread/100)`, so every replica
/// lies within `spread/100` of its base.
pub fn generate_synthetic(config: &SynthConfig) -> Result<Dataset> {
    config.validate()?;
    let mut rng = SeededRng::new(config.seed);
    let jitter_max = config.cluster_spread / 100.0;

    let mut rows = Vec::with_capacity(
        config.num_classes * config.points_per_class * config.duplication_factor,
    );
    for class in 0..config.num_classes {
        let center: Vec<f64> = (0..config.dim)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        for _ in 0..config.points_per_class {
            let base: Vec<f64> = center
                .iter()
                .map(|&c| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    c + config.cluster_spread * z
                })
                .collect();
            rows.push((FeatureVector::dense(base.clone())?, class));
            for _ in 1..config.duplication_factor {
                let dir: Vec<f64> = (0..config.dim)
                    .map(|_| StandardNormal.sample(&mut rng))
                    .collect();
                let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                let radius: f64 = rng.random_range(0.0..jitter_max);
                let replica: Vec<f64> = if norm > 0.0 {
                    base.iter()
                        .zip(&dir)
                        .map(|(b, d)| b + d / norm * radius)
                        .collect()
                } else {
                    base.clone()
                };
                rows.push((FeatureVector::dense(replica)?, class));
            }
        }
    }
    Dataset::from_parts(rows, config.num_classes)
}
