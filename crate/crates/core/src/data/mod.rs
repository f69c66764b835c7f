//! Core domain types: examples, datasets, labeled/unlabeled pools, seeded
//! randomness.
//!
//! Everything here is immutable after construction and safe to share across
//! threads; mutation is expressed by returning new values (see
//! [`Pool::label_batch`]).

mod feature;
mod pool;
mod rng;
mod split;

pub use feature::{euclidean_distance, squared_distance, FeatureVector};
pub use pool::Pool;
pub use rng::{derive_seed, SeededRng};
pub use split::train_test_split;

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Stable identifier of an example within a dataset, assigned at load time in
/// file order.
pub type ExampleId = u64;

/// One data point: a stable id plus its features. The true label lives in the
/// owning [`Dataset`] and is only revealed through the label oracle.
#[derive(Debug, Clone)]
pub struct Example {
    pub id: ExampleId,
    pub features: FeatureVector,
}

/// An ordered collection of examples with hidden oracle labels.
#[derive(Debug, Clone)]
pub struct Dataset {
    examples: Vec<Example>,
    labels: Vec<usize>,
    num_classes: usize,
    feature_dim: usize,
    by_id: HashMap<ExampleId, usize>,
}

impl Dataset {
    /// Builds a dataset assigning ids `0..n` in input order.
    pub fn from_parts(rows: Vec<(FeatureVector, usize)>, num_classes: usize) -> Result<Dataset> {
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, (f, l))| (i as ExampleId, f, l))
            .collect();
        Dataset::from_rows(rows, num_classes)
    }

    /// Builds a dataset from explicit `(id, features, label)` rows.
    pub fn from_rows(
        rows: Vec<(ExampleId, FeatureVector, usize)>,
        num_classes: usize,
    ) -> Result<Dataset> {
        if rows.is_empty() {
            return Err(Error::InvalidDataset("dataset must be non-empty".into()));
        }
        if num_classes == 0 {
            return Err(Error::InvalidDataset("num_classes must be positive".into()));
        }
        let feature_dim = rows[0].1.dim();
        let mut examples = Vec::with_capacity(rows.len());
        let mut labels = Vec::with_capacity(rows.len());
        let mut by_id = HashMap::with_capacity(rows.len());
        for (id, features, label) in rows {
            if features.dim() != feature_dim {
                return Err(Error::DimensionMismatch {
                    expected: feature_dim,
                    got: features.dim(),
                });
            }
            if label >= num_classes {
                return Err(Error::InvalidDataset(format!(
                    "label {label} out of range for {num_classes} classes"
                )));
            }
            if by_id.insert(id, examples.len()).is_some() {
                return Err(Error::InvalidDataset(format!("duplicate example id {id}")));
            }
            examples.push(Example { id, features });
            labels.push(label);
        }
        Ok(Dataset {
            examples,
            labels,
            num_classes,
            feature_dim,
            by_id,
        })
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn ids(&self) -> impl Iterator<Item = ExampleId> + '_ {
        self.examples.iter().map(|e| e.id)
    }

    pub fn features(&self, id: ExampleId) -> Result<&FeatureVector> {
        self.by_id
            .get(&id)
            .map(|&i| &self.examples[i].features)
            .ok_or(Error::UnknownId(id))
    }

    /// The label oracle: reveals the true class of an example. Selection
    /// strategies never see a `Dataset`, so they cannot call this.
    pub fn oracle_label(&self, id: ExampleId) -> Result<usize> {
        self.by_id
            .get(&id)
            .map(|&i| self.labels[i])
            .ok_or(Error::UnknownId(id))
    }

    /// Iterates `(id, features, label)`; evaluation-side use only.
    pub fn labeled_rows(&self) -> impl Iterator<Item = (ExampleId, &FeatureVector, usize)> + '_ {
        self.examples
            .iter()
            .zip(self.labels.iter())
            .map(|(e, &l)| (e.id, &e.features, l))
    }

    /// New dataset keeping rows whose position satisfies the mask, preserving
    /// ids and order.
    pub(crate) fn subset_by_positions(&self, keep: &[usize]) -> Result<Dataset> {
        let rows = keep
            .iter()
            .map(|&i| {
                (
                    self.examples[i].id,
                    self.examples[i].features.clone(),
                    self.labels[i],
                )
            })
            .collect();
        Dataset::from_rows(rows, self.num_classes)
    }
}

/// Convenience alias used throughout the harness.
pub type SharedDataset = Arc<Dataset>;
