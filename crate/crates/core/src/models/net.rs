//! Shared feed-forward machinery for the logistic-regression and MLP models:
//! dense layers, ReLU hidden activations, softmax cross-entropy loss, and
//! analytic gradients.

use rand::Rng;

use crate::data::{FeatureVector, SeededRng};

/// Unrolled dot product with four accumulators. The fixed expression tree
/// keeps results identical across platforms while still vectorizing.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let chunks = a.len() / 4;
    let (mut s0, mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0, 0.0);
    for c in 0..chunks {
        let i = c * 4;
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    let mut tail = 0.0;
    for i in chunks * 4..a.len() {
        tail += a[i] * b[i];
    }
    ((s0 + s1) + (s2 + s3)) + tail
}

/// `y += s * x`
pub(crate) fn axpy(y: &mut [f64], s: f64, x: &[f64]) {
    debug_assert_eq!(y.len(), x.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}

/// One dense layer, weights row-major `[out][in]`.
#[derive(Debug, Clone)]
pub(crate) struct Layer {
    pub w: Vec<f64>,
    pub b: Vec<f64>,
    pub in_dim: usize,
    pub out_dim: usize,
}

impl Layer {
    fn new_zero(in_dim: usize, out_dim: usize) -> Layer {
        Layer {
            w: vec![0.0; in_dim * out_dim],
            b: vec![0.0; out_dim],
            in_dim,
            out_dim,
        }
    }

    /// He-style fan-in scaled uniform init; biases zero.
    fn init(in_dim: usize, out_dim: usize, rng: &mut SeededRng) -> Layer {
        let bound = (6.0 / in_dim as f64).sqrt();
        let mut layer = Layer::new_zero(in_dim, out_dim);
        for w in layer.w.iter_mut() {
            *w = rng.random_range(-bound..bound);
        }
        layer
    }

    fn forward_dense(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for o in 0..self.out_dim {
            let row = &self.w[o * self.in_dim..(o + 1) * self.in_dim];
            out.push(self.b[o] + dot(row, x));
        }
    }

    /// Input-layer forward that walks only the nonzeros of a sparse input.
    fn forward_feature(&self, x: &FeatureVector, out: &mut Vec<f64>) {
        match x {
            FeatureVector::Dense(v) => self.forward_dense(v, out),
            sp => {
                out.clear();
                out.extend_from_slice(&self.b);
                for (i, v) in sp.nonzeros() {
                    for o in 0..self.out_dim {
                        out[o] += self.w[o * self.in_dim + i] * v;
                    }
                }
            }
        }
    }
}

/// Stack of dense layers with ReLU between them and raw logits at the top.
#[derive(Debug, Clone)]
pub(crate) struct Network {
    pub layers: Vec<Layer>,
}

/// Per-layer gradient buffers with the same shapes as the network.
pub(crate) struct Gradients {
    pub layers: Vec<Layer>,
}

impl Gradients {
    pub fn zeros_like(net: &Network) -> Gradients {
        Gradients {
            layers: net
                .layers
                .iter()
                .map(|l| Layer::new_zero(l.in_dim, l.out_dim))
                .collect(),
        }
    }

    fn reset(&mut self) {
        for l in self.layers.iter_mut() {
            l.w.iter_mut().for_each(|v| *v = 0.0);
            l.b.iter_mut().for_each(|v| *v = 0.0);
        }
    }
}

/// Scratch space reused across forward/backward passes.
struct Workspace {
    // post-activation per layer (ReLU applied on hidden layers)
    acts: Vec<Vec<f64>>,
    deltas: Vec<Vec<f64>>,
    probs: Vec<f64>,
    dense_input: Vec<f64>,
}

impl Network {
    /// Builds a network `feature_dim -> hidden... -> num_classes` with
    /// seeded initialization.
    pub fn init(feature_dim: usize, hidden: &[usize], num_classes: usize, rng: &mut SeededRng) -> Network {
        let mut dims = vec![feature_dim];
        dims.extend_from_slice(hidden);
        dims.push(num_classes);
        let layers = dims
            .windows(2)
            .map(|w| Layer::init(w[0], w[1], rng))
            .collect();
        Network { layers }
    }

    pub fn num_classes(&self) -> usize {
        self.layers.last().expect("non-empty network").out_dim
    }

    pub fn feature_dim(&self) -> usize {
        self.layers.first().expect("non-empty network").in_dim
    }

    /// Class log-odds for one input.
    pub fn logits(&self, x: &FeatureVector) -> Vec<f64> {
        let mut cur = Vec::new();
        self.layers[0].forward_feature(x, &mut cur);
        let mut next = Vec::new();
        for layer in &self.layers[1..] {
            relu_inplace(&mut cur);
            layer.forward_dense(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    /// Mean softmax cross-entropy over the batch plus `l2/2 * ||W||^2`.
    pub fn loss(&self, batch: &[(&FeatureVector, usize)], l2: f64) -> f64 {
        let mut total = 0.0;
        for &(x, y) in batch {
            let logits = self.logits(x);
            total += cross_entropy(&logits, y);
        }
        total / batch.len() as f64 + 0.5 * l2 * self.weight_sq_norm()
    }

    pub fn weight_sq_norm(&self) -> f64 {
        self.layers.iter().map(|l| dot(&l.w, &l.w)).sum()
    }

    /// Mean loss over the batch and its gradient (including the l2 term).
    pub fn loss_and_grad(&self, batch: &[(&FeatureVector, usize)], l2: f64) -> (f64, Gradients) {
        let mut grads = Gradients::zeros_like(self);
        let loss = self.batch_gradient(batch, l2, &mut grads);
        (loss, grads)
    }

    /// Fills `grads` with the regularized mean-batch gradient (overwriting
    /// previous contents) and returns the regularized mean loss.
    pub fn batch_gradient(
        &self,
        batch: &[(&FeatureVector, usize)],
        l2: f64,
        grads: &mut Gradients,
    ) -> f64 {
        grads.reset();
        let ce = self.accumulate_batch(batch, grads);
        if l2 > 0.0 {
            for (g, l) in grads.layers.iter_mut().zip(&self.layers) {
                axpy(&mut g.w, l2, &l.w);
            }
        }
        ce + 0.5 * l2 * self.weight_sq_norm()
    }

    /// Adds the mean cross-entropy gradient of `batch` into `grads` and
    /// returns the mean cross-entropy. `grads` must start zeroed.
    fn accumulate_batch(&self, batch: &[(&FeatureVector, usize)], grads: &mut Gradients) -> f64 {
        let n_layers = self.layers.len();
        let mut ws = Workspace {
            acts: self.layers.iter().map(|l| Vec::with_capacity(l.out_dim)).collect(),
            deltas: self.layers.iter().map(|l| Vec::with_capacity(l.out_dim)).collect(),
            probs: Vec::new(),
            dense_input: Vec::new(),
        };
        let scale = 1.0 / batch.len() as f64;
        let mut total_ce = 0.0;

        for &(x, y) in batch {
            // forward, keeping post-activations
            let densify = n_layers > 1 && !matches!(x, FeatureVector::Dense(_));
            if densify {
                ws.dense_input = x.to_dense();
            }
            for li in 0..n_layers {
                let (done, rest) = ws.acts.split_at_mut(li);
                let out = &mut rest[0];
                if li == 0 {
                    if densify {
                        self.layers[0].forward_dense(&ws.dense_input, out);
                    } else {
                        self.layers[0].forward_feature(x, out);
                    }
                } else {
                    self.layers[li].forward_dense(&done[li - 1], out);
                }
                if li + 1 < n_layers {
                    relu_inplace(out);
                }
            }

            let logits = &ws.acts[n_layers - 1];
            total_ce += cross_entropy(logits, y);
            softmax_into(logits, &mut ws.probs);

            // output delta = (p - onehot(y)) * scale
            let delta_top = &mut ws.deltas[n_layers - 1];
            delta_top.clear();
            delta_top.extend(ws.probs.iter().map(|&p| p * scale));
            delta_top[y] -= scale;

            // backprop through hidden layers
            for li in (0..n_layers).rev() {
                if li > 0 {
                    let (lower, upper) = ws.deltas.split_at_mut(li);
                    let delta = &upper[0];
                    let prev = &mut lower[li - 1];
                    prev.clear();
                    prev.resize(self.layers[li].in_dim, 0.0);
                    for (o, &d) in delta.iter().enumerate() {
                        if d != 0.0 {
                            let row = &self.layers[li].w
                                [o * self.layers[li].in_dim..(o + 1) * self.layers[li].in_dim];
                            axpy(prev, d, row);
                        }
                    }
                    // ReLU derivative gates on the post-activation
                    for (p, &a) in prev.iter_mut().zip(ws.acts[li - 1].iter()) {
                        if a <= 0.0 {
                            *p = 0.0;
                        }
                    }
                }

                // accumulate dW = delta ^T input, db = delta
                let g = &mut grads.layers[li];
                let delta = &ws.deltas[li];
                for (o, &d) in delta.iter().enumerate() {
                    g.b[o] += d;
                }
                if li == 0 {
                    if densify {
                        for (o, &d) in delta.iter().enumerate() {
                            if d != 0.0 {
                                axpy(&mut g.w[o * g.in_dim..(o + 1) * g.in_dim], d, &ws.dense_input);
                            }
                        }
                    } else {
                        match x {
                            FeatureVector::Dense(v) => {
                                for (o, &d) in delta.iter().enumerate() {
                                    if d != 0.0 {
                                        axpy(&mut g.w[o * g.in_dim..(o + 1) * g.in_dim], d, v);
                                    }
                                }
                            }
                            sp => {
                                for (i, v) in sp.nonzeros() {
                                    for (o, &d) in delta.iter().enumerate() {
                                        g.w[o * g.in_dim + i] += d * v;
                                    }
                                }
                            }
                        }
                    }
                } else {
                    let input = &ws.acts[li - 1];
                    for (o, &d) in delta.iter().enumerate() {
                        if d != 0.0 {
                            axpy(&mut g.w[o * g.in_dim..(o + 1) * g.in_dim], d, input);
                        }
                    }
                }
            }
        }
        total_ce * scale
    }

    /// Flat view of all parameters, for finite-difference checks.
    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for l in &self.layers {
            out.extend_from_slice(&l.w);
            out.extend_from_slice(&l.b);
        }
        out
    }

    pub fn set_params(&mut self, params: &[f64]) {
        let mut at = 0;
        for l in self.layers.iter_mut() {
            let w_len = l.w.len();
            l.w.copy_from_slice(&params[at..at + w_len]);
            at += w_len;
            let b_len = l.b.len();
            l.b.copy_from_slice(&params[at..at + b_len]);
            at += b_len;
        }
        debug_assert_eq!(at, params.len());
    }
}

impl Gradients {
    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for l in &self.layers {
            out.extend_from_slice(&l.w);
            out.extend_from_slice(&l.b);
        }
        out
    }
}

fn relu_inplace(v: &mut [f64]) {
    for x in v.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
}

/// Numerically stable softmax.
pub(crate) fn softmax_into(logits: &[f64], out: &mut Vec<f64>) {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.clear();
    out.extend(logits.iter().map(|&z| (z - max).exp()));
    let sum: f64 = out.iter().sum();
    for p in out.iter_mut() {
        *p /= sum;
    }
}

/// `-log p_y` via log-sum-exp.
pub(crate) fn cross_entropy(logits: &[f64], y: usize) -> f64 {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse: f64 = logits.iter().map(|&z| (z - max).exp()).sum::<f64>().ln() + max;
    lse - logits[y]
}

/// Plain SGD with momentum 0.9 over minibatches.
pub(crate) struct MomentumSgd {
    velocity: Vec<Layer>,
    pub learning_rate: f64,
}

const MOMENTUM: f64 = 0.9;

impl MomentumSgd {
    pub fn new(net: &Network, learning_rate: f64) -> MomentumSgd {
        MomentumSgd {
            velocity: net
                .layers
                .iter()
                .map(|l| Layer::new_zero(l.in_dim, l.out_dim))
                .collect(),
            learning_rate,
        }
    }

    pub fn step(&mut self, net: &mut Network, grads: &Gradients) {
        for ((layer, v), g) in net.layers.iter_mut().zip(&mut self.velocity).zip(&grads.layers) {
            for i in 0..layer.w.len() {
                v.w[i] = MOMENTUM * v.w[i] - self.learning_rate * g.w[i];
                layer.w[i] += v.w[i];
            }
            for i in 0..layer.b.len() {
                v.b[i] = MOMENTUM * v.b[i] - self.learning_rate * g.b[i];
                layer.b[i] += v.b[i];
            }
        }
    }
}

