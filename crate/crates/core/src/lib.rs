//! Batch-mode active learning with diversity-aware selection.
//!
//! The library trains a classifier on a growing labeled pool, scores the
//! unlabeled pool by informativeness, prefilters the most informative
//! candidates, and then picks a diverse batch from those candidates — either
//! by (weighted) k-means clustering or by greedy submodular maximization of
//! a facility-location objective. An experiment harness runs multi-seed
//! comparisons between strategies and emits accuracy curves and selection
//! timings as CSV.
//!
//! Module map:
//! - [`data`]: feature vectors, datasets, labeled/unlabeled pools, seeded RNG
//! - [`ingest`]: IDX images, delimited text + TF-IDF, synthetic blob generator
//! - [`models`]: multinomial logistic regression and a small MLP
//! - [`scoring`]: margin / entropy / least-confident informativeness
//! - [`kmeans`]: weighted and unweighted Lloyd's with k-means++ init
//! - [`submodular`]: facility-location greedy (lazy) and nearest-neighbor variant
//! - [`strategies`]: the batch selection strategies behind one interface
//! - [`harness`]: the active-learning loop, experiment runner, CSV output

pub mod data;
pub mod error;
pub mod harness;
pub mod ingest;
pub mod kmeans;
pub mod models;
pub mod scoring;
pub mod strategies;
pub mod submodular;

pub use data::{Dataset, Example, ExampleId, FeatureVector, Pool, SeededRng};
pub use error::{Error, Result};
pub use models::{ProbVector, TrainConfig, TrainedModel};
pub use scoring::ScoreVector;
