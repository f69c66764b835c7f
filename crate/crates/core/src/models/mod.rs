//! Trainable probabilistic classifiers: multinomial logistic regression and a
//! two-hidden-layer MLP.
//!
//! Both models train from scratch with minibatch gradient descent (momentum
//! 0.9) on softmax cross-entropy plus an L2 penalty on the weights. Training
//! is a pure function of `(data, config)`: the same inputs give bitwise
//! identical weights, which is what makes whole experiments replayable.

mod checkpoint;
mod gradcheck;
mod net;

pub use checkpoint::{load_checkpoint, save_checkpoint};
pub use gradcheck::gradient_check;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, FeatureVector, SeededRng};
use crate::error::{Error, Result};
use net::{MomentumSgd, Network};

/// Which classifier to train.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Logreg,
    Mlp,
}

/// Training hyperparameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainConfig {
    pub model_kind: ModelKind,
    pub l2_penalty: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub minibatch_size: usize,
    /// Hidden layer widths; ignored for logreg.
    pub hidden_sizes: Vec<usize>,
    pub init_seed: u64,
}

impl TrainConfig {
    /// Defaults for multinomial logistic regression.
    pub fn logreg() -> TrainConfig {
        TrainConfig {
            model_kind: ModelKind::Logreg,
            l2_penalty: 1e-4,
            learning_rate: 0.1,
            epochs: 100,
            minibatch_size: 32,
            hidden_sizes: vec![],
            init_seed: 0,
        }
    }

    /// Defaults for the 128/64 ReLU MLP.
    pub fn mlp() -> TrainConfig {
        TrainConfig {
            model_kind: ModelKind::Mlp,
            l2_penalty: 1e-4,
            learning_rate: 0.05,
            epochs: 50,
            minibatch_size: 32,
            hidden_sizes: vec![128, 64],
            init_seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.learning_rate <= 0.0 {
            return Err(Error::InvalidConfig("learning_rate must be positive".into()));
        }
        if self.l2_penalty < 0.0 {
            return Err(Error::InvalidConfig("l2_penalty must be non-negative".into()));
        }
        if self.epochs == 0 || self.minibatch_size == 0 {
            return Err(Error::InvalidConfig(
                "epochs and minibatch_size must be positive".into(),
            ));
        }
        if self.model_kind == ModelKind::Mlp && self.hidden_sizes.iter().any(|&h| h == 0) {
            return Err(Error::InvalidConfig("hidden sizes must be positive".into()));
        }
        Ok(())
    }

    fn hidden(&self) -> &[usize] {
        match self.model_kind {
            ModelKind::Logreg => &[],
            ModelKind::Mlp => &self.hidden_sizes,
        }
    }
}

/// Class probabilities for one example: entries in [0,1] summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<ProbVector> {
        if probs.is_empty() {
            return Err(Error::InvalidProbVector("empty".into()));
        }
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidProbVector("entry outside [0,1]".into()));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidProbVector(format!("sums to {sum}")));
        }
        Ok(ProbVector(probs))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn num_classes(&self) -> usize {
        self.0.len()
    }

    /// Index of the most probable class; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.0.iter().enumerate().skip(1) {
            if p > self.0[best] {
                best = i;
            }
        }
        best
    }

    /// The two largest probabilities, in descending order.
    pub fn top_two(&self) -> (f64, f64) {
        let mut top = f64::NEG_INFINITY;
        let mut second = f64::NEG_INFINITY;
        for &p in &self.0 {
            if p > top {
                second = top;
                top = p;
            } else if p > second {
                second = p;
            }
        }
        (top, second)
    }
}

/// An immutable trained classifier.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    kind: ModelKind,
    net: Network,
}

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn num_classes(&self) -> usize {
        self.net.num_classes()
    }

    pub fn feature_dim(&self) -> usize {
        self.net.feature_dim()
    }

    pub(crate) fn from_net(kind: ModelKind, net: Network) -> TrainedModel {
        TrainedModel { kind, net }
    }

    pub(crate) fn net(&self) -> &Network {
        &self.net
    }
}

/// Trains a model from scratch on `(features, label)` pairs.
///
/// A single-class batch is legal and yields a model that predicts that class;
/// an empty batch is an error. Training order is the order of `examples`, so
/// callers feed labeled pools in ascending id order.
pub fn train(
    examples: &[(&FeatureVector, usize)],
    num_classes: usize,
    config: &TrainConfig,
) -> Result<TrainedModel> {
    Ok(fit(examples, num_classes, config, false)?.0)
}

/// [`train`], additionally returning the mean training loss after each epoch.
pub fn train_with_loss_history(
    examples: &[(&FeatureVector, usize)],
    num_classes: usize,
    config: &TrainConfig,
) -> Result<(TrainedModel, Vec<f64>)> {
    let (model, history) = fit(examples, num_classes, config, true)?;
    Ok((model, history))
}

fn fit(
    examples: &[(&FeatureVector, usize)],
    num_classes: usize,
    config: &TrainConfig,
    track_loss: bool,
) -> Result<(TrainedModel, Vec<f64>)> {
    config.validate()?;
    if examples.is_empty() {
        return Err(Error::NoTrainingData);
    }
    let feature_dim = examples[0].0.dim();
    for &(x, y) in examples {
        if x.dim() != feature_dim {
            return Err(Error::DimensionMismatch {
                expected: feature_dim,
                got: x.dim(),
            });
        }
        if y >= num_classes {
            return Err(Error::InvalidDataset(format!(
                "label {y} out of range for {num_classes} classes"
            )));
        }
    }

    let mut rng = SeededRng::new(config.init_seed);
    let mut net = Network::init(feature_dim, config.hidden(), num_classes, &mut rng);
    let mut opt = MomentumSgd::new(&net, config.learning_rate);
    let mut grads = net::Gradients::zeros_like(&net);
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut history = Vec::new();

    let mut batch: Vec<(&FeatureVector, usize)> = Vec::with_capacity(config.minibatch_size);
    for _epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(config.minibatch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| examples[i]));
            net.batch_gradient(&batch, config.l2_penalty, &mut grads);
            opt.step(&mut net, &grads);
        }
        if track_loss {
            history.push(net.loss(examples, config.l2_penalty));
        }
    }

    Ok((TrainedModel::from_net(config.model_kind, net), history))
}

/// Class probabilities for one example.
pub fn predict_proba(model: &TrainedModel, x: &FeatureVector) -> Result<ProbVector> {
    if x.dim() != model.feature_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.feature_dim(),
            got: x.dim(),
        });
    }
    let logits = model.net.logits(x);
    let mut probs = Vec::new();
    net::softmax_into(&logits, &mut probs);
    // softmax output satisfies the ProbVector invariants by construction
    Ok(ProbVector(probs))
}

/// Fraction of test examples whose argmax prediction matches the oracle
/// label. Argmax ties break toward the lowest class index.
pub fn accuracy(model: &TrainedModel, test: &Dataset) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let mut correct = 0usize;
    for (_, features, label) in test.labeled_rows() {
        let p = predict_proba(model, features)?;
        if p.argmax() == label {
            correct += 1;
        }
    }
    Ok(correct as f64 / test.len() as f64)
}
