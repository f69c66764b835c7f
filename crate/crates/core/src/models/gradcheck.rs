//! Finite-difference validation of the analytic gradients.

use crate::data::{FeatureVector, SeededRng};
use crate::error::Result;
use crate::models::net::Network;
use crate::models::TrainConfig;

const STEP: f64 = 1e-5;

/// Compares the analytic gradient of the training loss against central
/// finite differences on a small fixture, returning the maximum relative
/// error over all parameters.
///
/// Relative error uses a unit floor: `|a - n| / max(1, |a| + |n|)`, so tiny
/// gradients are compared absolutely.
///
/// ReLU caveat: the MLP loss is not differentiable where a pre-activation is
/// exactly zero, so finite differences there measure a one-sided slope and
/// the reported error is O(1) no matter the step. Fixtures must keep
/// pre-activations away from zero; with zero-initialized biases that mostly
/// means avoiding init seeds where one example's entire first hidden layer
/// is dead.
pub fn gradient_check(
    config: &TrainConfig,
    examples: &[(&FeatureVector, usize)],
    num_classes: usize,
) -> Result<f64> {
    let feature_dim = examples[0].0.dim();
    let mut rng = SeededRng::new(config.init_seed);
    let hidden: &[usize] = match config.model_kind {
        crate::models::ModelKind::Logreg => &[],
        crate::models::ModelKind::Mlp => &config.hidden_sizes,
    };
    let mut net = Network::init(feature_dim, hidden, num_classes, &mut rng);

    let (_, grads) = net.loss_and_grad(examples, config.l2_penalty);
    let analytic = grads.params();
    let mut params = net.params();

    let mut max_rel = 0.0f64;
    for i in 0..params.len() {
        let orig = params[i];
        params[i] = orig + STEP;
        net.set_params(&params);
        let plus = net.loss(examples, config.l2_penalty);
        params[i] = orig - STEP;
        net.set_params(&params);
        let minus = net.loss(examples, config.l2_penalty);
        params[i] = orig;

        let numeric = (plus - minus) / (2.0 * STEP);
        let denom = 1.0f64.max(analytic[i].abs() + numeric.abs());
        max_rel = max_rel.max((analytic[i] - numeric).abs() / denom);
    }
    net.set_params(&params);
    Ok(max_rel)
}
