//! Per-example informativeness scores derived from class probabilities.
//!
//! The default measure is the margin between the two most probable classes,
//! oriented so that *uncertain* examples score high: `1 - (P(y1) - P(y2))`.
//! The raw margin orientation is kept available behind
//! [`ScoreOrientation::RawMargin`] for comparison runs. Entropy and
//! least-confident measures are provided as alternatives; both are already
//! oriented with high = informative.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{ExampleId, Pool};
use crate::error::{Error, Result};
use crate::models::{predict_proba, ProbVector, TrainedModel};

/// Informativeness values for the current unlabeled set, keyed by example id.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScoreVector {
    entries: BTreeMap<ExampleId, f64>,
}

impl ScoreVector {
    pub fn from_entries<I: IntoIterator<Item = (ExampleId, f64)>>(entries: I) -> ScoreVector {
        ScoreVector {
            entries: entries.into_iter().collect(),
        }
    }

    pub fn get(&self, id: ExampleId) -> Option<f64> {
        self.entries.get(&id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ExampleId, f64)> + '_ {
        self.entries.iter().map(|(&id, &s)| (id, s))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Which uncertainty measure to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    #[default]
    Margin,
    Entropy,
    LeastConfident,
}

/// Orientation of the margin measure.
///
/// `OneMinusMargin` treats small margins (model unsure between its top two
/// classes) as most informative, which is what uncertainty prefiltering and
/// informativeness weighting need. `RawMargin` keeps the untransformed gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ScoreOrientation {
    #[default]
    OneMinusMargin,
    RawMargin,
}

/// `P(y1) - P(y2)`: the gap between the two most probable classes.
pub fn margin(p: &ProbVector) -> Result<f64> {
    if p.num_classes() < 2 {
        return Err(Error::TooFewClasses(p.num_classes()));
    }
    let (top, second) = p.top_two();
    Ok((top - second).clamp(0.0, 1.0))
}

/// `1 - margin(p)`: higher = more uncertain = more informative. This is the
/// weight fed to weighted k-means.
pub fn informativeness_margin(p: &ProbVector) -> Result<f64> {
    Ok(1.0 - margin(p)?)
}

/// Shannon entropy in nats normalized by `ln C` to land in [0,1].
pub fn entropy_score(p: &ProbVector) -> f64 {
    let c = p.num_classes();
    if c < 2 {
        return 0.0;
    }
    let mut h = 0.0;
    for &q in p.probs() {
        if q > 0.0 {
            h -= q * q.ln();
        }
    }
    (h / (c as f64).ln()).clamp(0.0, 1.0)
}

/// `(1 - P(y1)) * C / (C - 1)`, normalized to [0,1].
pub fn least_confident_score(p: &ProbVector) -> f64 {
    let c = p.num_classes();
    if c < 2 {
        return 0.0;
    }
    let (top, _) = p.top_two();
    ((1.0 - top) * c as f64 / (c as f64 - 1.0)).clamp(0.0, 1.0)
}

/// Applies the chosen measure to one probability vector.
pub fn score_prob(p: &ProbVector, measure: Measure, orientation: ScoreOrientation) -> Result<f64> {
    match measure {
        Measure::Margin => match orientation {
            ScoreOrientation::OneMinusMargin => informativeness_margin(p),
            ScoreOrientation::RawMargin => margin(p),
        },
        Measure::Entropy => Ok(entropy_score(p)),
        Measure::LeastConfident => Ok(least_confident_score(p)),
    }
}

/// Scores every unlabeled example in the pool.
///
/// Evaluation parallelizes over examples; the output is keyed by id and does
/// not depend on the worker count.
pub fn score_pool(
    model: &TrainedModel,
    pool: &Pool,
    measure: Measure,
    orientation: ScoreOrientation,
) -> Result<ScoreVector> {
    let ids: Vec<ExampleId> = pool.unlabeled_ids().collect();
    if ids.is_empty() {
        return Err(Error::EmptyUnlabeledPool);
    }
    let scored: Result<Vec<(ExampleId, f64)>> = ids
        .par_iter()
        .map(|&id| {
            let p = predict_proba(model, pool.features(id)?)?;
            Ok((id, score_prob(&p, measure, orientation)?))
        })
        .collect();
    Ok(ScoreVector::from_entries(scored?))
}
