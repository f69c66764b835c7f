//! Shared fixtures for the selection benchmarks.

use albatch::data::FeatureVector;
use albatch::ingest::{generate_synthetic, SynthConfig};

/// A blobby pool of `n` points in `dim` dimensions, plus scores in [0,1].
pub fn blob_points(n: usize, dim: usize, seed: u64) -> (Vec<FeatureVector>, Vec<f64>) {
    let per_class = n / 10;
    let dataset = generate_synthetic(&SynthConfig {
        num_classes: 10,
        points_per_class: per_class,
        duplication_factor: 1,
        cluster_spread: 1.0,
        dim,
        seed,
    })
    .expect("valid config");
    let points: Vec<FeatureVector> = dataset
        .examples()
        .iter()
        .take(n)
        .map(|e| e.features.clone())
        .collect();
    let scores: Vec<f64> = (0..points.len()).map(|i| ((i * 37) % 100) as f64 / 100.0).collect();
    (points, scores)
}
