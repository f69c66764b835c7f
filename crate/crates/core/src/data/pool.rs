//! The labeled/unlabeled partition of a training set.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::data::{Dataset, ExampleId, FeatureVector};
use crate::error::{Error, Result};

/// Partition of a dataset into a labeled set and an unlabeled set, plus the
/// label oracle for the labeled side.
///
/// Pools are values: [`Pool::label_batch`] returns a new pool and leaves the
/// original untouched. Both sets iterate in ascending id order.
#[derive(Debug, Clone)]
pub struct Pool {
    dataset: Arc<Dataset>,
    labeled: BTreeSet<ExampleId>,
    unlabeled: BTreeSet<ExampleId>,
}

impl Pool {
    /// A fresh pool with every example unlabeled.
    pub fn new(dataset: Arc<Dataset>) -> Pool {
        let unlabeled = dataset.ids().collect();
        Pool {
            dataset,
            labeled: BTreeSet::new(),
            unlabeled,
        }
    }

    pub fn dataset(&self) -> &Arc<Dataset> {
        &self.dataset
    }

    pub fn num_labeled(&self) -> usize {
        self.labeled.len()
    }

    pub fn num_unlabeled(&self) -> usize {
        self.unlabeled.len()
    }

    pub fn labeled_ids(&self) -> impl Iterator<Item = ExampleId> + '_ {
        self.labeled.iter().copied()
    }

    pub fn unlabeled_ids(&self) -> impl Iterator<Item = ExampleId> + '_ {
        self.unlabeled.iter().copied()
    }

    pub fn is_unlabeled(&self, id: ExampleId) -> bool {
        self.unlabeled.contains(&id)
    }

    pub fn features(&self, id: ExampleId) -> Result<&FeatureVector> {
        self.dataset.features(id)
    }

    /// The oracle's answers for the labeled set: `(id, features, label)` in
    /// ascending id order. Labels of unlabeled examples stay hidden.
    pub fn labeled_examples(&self) -> impl Iterator<Item = (ExampleId, &FeatureVector, usize)> + '_ {
        self.labeled.iter().map(|&id| {
            let features = self.dataset.features(id).expect("labeled id in dataset");
            let label = self.dataset.oracle_label(id).expect("labeled id in dataset");
            (id, features, label)
        })
    }

    /// Moves `ids` from the unlabeled to the labeled set, returning the new
    /// pool. Every id must currently be unlabeled.
    pub fn label_batch<I: IntoIterator<Item = ExampleId>>(&self, ids: I) -> Result<Pool> {
        let mut next = self.clone();
        for id in ids {
            if !next.unlabeled.remove(&id) {
                return Err(Error::NotUnlabeled(id));
            }
            next.labeled.insert(id);
        }
        Ok(next)
    }
}
