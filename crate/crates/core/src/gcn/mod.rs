//! Two-layer graph convolutional network.
//!
//! [`GcnEncoder`] is the shared embedding backbone
//! `Θ = ReLU(Â · ReLU(Â X W1) · W2)`; the node classifier adds a softmax
//! output layer on top, and the link-prediction and generation detectors put
//! bilinear pair scorers on top of it. All gradients are derived by hand.

mod adjacency;

pub use adjacency::{normalized_adjacency, NormAdj};

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::Graph;
use crate::numkit::{
    adam_step, argmax, cross_entropy, glorot_uniform, relu, softmax, AdamState, Matrix, PrngStream,
};

pub const DEFAULT_HIDDEN: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GcnEncoder {
    pub w1: Matrix,
    pub w2: Matrix,
}

/// Intermediate activations of one encoder forward pass.
#[derive(Clone, Debug)]
pub struct EncoderPass {
    z1: Matrix,
    h1: Matrix,
    z2: Matrix,
    /// Node embeddings (`n × hidden`).
    pub h2: Matrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EncoderGrads {
    pub w1: Matrix,
    pub w2: Matrix,
}

impl EncoderGrads {
    pub fn zeros_like(enc: &GcnEncoder) -> Self {
        Self {
            w1: Matrix::zeros(enc.w1.rows(), enc.w1.cols()),
            w2: Matrix::zeros(enc.w2.rows(), enc.w2.cols()),
        }
    }

    pub fn accumulate(&mut self, other: &EncoderGrads) {
        self.w1.add_scaled(&other.w1, 1.0).expect("same shape");
        self.w2.add_scaled(&other.w2, 1.0).expect("same shape");
    }
}

fn relu_mask_inplace(grad: &mut Matrix, pre: &Matrix) {
    for (g, &z) in grad.as_mut_slice().iter_mut().zip(pre.as_slice()) {
        if z <= 0.0 {
            *g = 0.0;
        }
    }
}

impl GcnEncoder {
    pub fn init(input_dim: usize, hidden: usize, rng: &mut PrngStream) -> Self {
        Self {
            w1: glorot_uniform(input_dim, hidden, rng),
            w2: glorot_uniform(hidden, hidden, rng),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.w1.rows()
    }

    pub fn hidden(&self) -> usize {
        self.w2.cols()
    }

    /// `X · W1`; constant for a fixed feature matrix, so callers that run the
    /// encoder on many adjacency variants compute it once.
    pub fn project(&self, x: &Matrix) -> Result<Matrix> {
        if x.cols() != self.w1.rows() {
            return Err(domain!(
                "feature dimension {} does not match model input {}",
                x.cols(),
                self.w1.rows()
            ));
        }
        x.matmul(&self.w1)
    }

    pub fn forward(&self, adj: &NormAdj, x: &Matrix) -> Result<EncoderPass> {
        let xw = self.project(x)?;
        Ok(self.forward_projected(adj, &xw))
    }

    pub fn forward_projected(&self, adj: &NormAdj, xw: &Matrix) -> EncoderPass {
        let z1 = adj.apply(xw);
        let h1 = z1.map(relu);
        let z2 = adj.apply(&h1.matmul(&self.w2).expect("hidden widths agree"));
        let h2 = z2.map(relu);
        EncoderPass { z1, h1, z2, h2 }
    }

    /// Gradients of a loss w.r.t. W1 and W2 given `∂L/∂Θ` (`d_h2`).
    pub fn backward(&self, adj: &NormAdj, x: &Matrix, pass: &EncoderPass, d_h2: &Matrix) -> EncoderGrads {
        let (w2, a_dz1) = self.backward_partial(adj, pass, d_h2);
        let w1 = x.t_matmul(&a_dz1).expect("shapes agree");
        EncoderGrads { w1, w2 }
    }

    /// Like [`backward`](Self::backward) but stops before the input layer:
    /// returns the W2 gradient and `Â · ∂L/∂Z1`, whose product with `Xᵀ` is
    /// the W1 gradient. Sums of the second part over several passes on the
    /// same features can share one final `Xᵀ` product.
    pub fn backward_partial(&self, adj: &NormAdj, pass: &EncoderPass, d_h2: &Matrix) -> (Matrix, Matrix) {
        let mut dz2 = d_h2.clone();
        relu_mask_inplace(&mut dz2, &pass.z2);
        // Â is symmetric, so (ÂH)ᵀ G = Hᵀ (Â G)
        let a_dz2 = adj.apply(&dz2);
        let w2 = pass.h1.t_matmul(&a_dz2).expect("shapes agree");
        let mut dz1 = a_dz2.matmul_t(&self.w2).expect("shapes agree");
        relu_mask_inplace(&mut dz1, &pass.z1);
        (w2, adj.apply(&dz1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GcnHyper {
    pub hidden: usize,
    pub epochs: usize,
    pub lr: f64,
    pub seed: u64,
}

impl GcnHyper {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            hidden: DEFAULT_HIDDEN,
            epochs: 200,
            lr: 0.01,
            seed,
        }
    }
}

/// Node classifier: encoder plus softmax output layer `W_out` (`hidden × c`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GcnModel {
    pub encoder: GcnEncoder,
    pub w_out: Matrix,
    pub hyper: GcnHyper,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GcnGrads {
    pub encoder: EncoderGrads,
    pub w_out: Matrix,
}

impl GcnModel {
    pub fn init(input_dim: usize, classes: usize, hyper: GcnHyper) -> Self {
        let mut rng = PrngStream::new(hyper.seed).derive("gcn-init");
        let encoder = GcnEncoder::init(input_dim, hyper.hidden, &mut rng);
        let w_out = glorot_uniform(hyper.hidden, classes, &mut rng);
        Self {
            encoder,
            w_out,
            hyper,
        }
    }

    pub fn num_classes(&self) -> usize {
        self.w_out.cols()
    }

    pub fn input_dim(&self) -> usize {
        self.encoder.input_dim()
    }

    /// Row-wise class probabilities for every node.
    pub fn probabilities(&self, adj: &NormAdj, x: &Matrix) -> Result<Matrix> {
        let pass = self.encoder.forward(adj, x)?;
        Ok(self.probabilities_from(&pass))
    }

    /// Probabilities from precomputed `X · W1` (see [`GcnEncoder::project`]).
    pub fn probabilities_projected(&self, adj: &NormAdj, xw: &Matrix) -> Matrix {
        self.probabilities_from(&self.encoder.forward_projected(adj, xw))
    }

    fn probabilities_from(&self, pass: &EncoderPass) -> Matrix {
        let logits = pass.h2.matmul(&self.w_out).expect("hidden widths agree");
        let mut probs = Matrix::zeros(logits.rows(), logits.cols());
        for i in 0..logits.rows() {
            probs.row_mut(i).copy_from_slice(&softmax(logits.row(i)));
        }
        probs
    }

    /// Mean cross-entropy over the graph's training nodes and its gradient.
    pub fn loss_and_grads(&self, g: &Graph) -> Result<(f64, GcnGrads)> {
        let train = checked_training_nodes(g, self.num_classes())?;
        let adj = NormAdj::from_graph(g);
        let pass = self.encoder.forward(&adj, g.features())?;
        let probs = self.probabilities_from(&pass);
        let scale = 1.0 / train.len() as f64;
        let mut loss = 0.0;
        let mut d_logits = Matrix::zeros(probs.rows(), probs.cols());
        for &(u, y) in &train {
            loss += cross_entropy(probs.row(u), y)?;
            let row = d_logits.row_mut(u);
            row.copy_from_slice(probs.row(u));
            row[y] -= 1.0;
            row.iter_mut().for_each(|v| *v *= scale);
        }
        let w_out = pass.h2.t_matmul(&d_logits)?;
        let d_h2 = d_logits.matmul_t(&self.w_out)?;
        let encoder = self.encoder.backward(&adj, g.features(), &pass, &d_h2);
        Ok((loss * scale, GcnGrads { encoder, w_out }))
    }
}

fn checked_training_nodes(g: &Graph, classes: usize) -> Result<Vec<(usize, usize)>> {
    let nodes = g.training_nodes();
    if nodes.is_empty() {
        return Err(domain!("no labeled training nodes"));
    }
    nodes
        .into_iter()
        .map(|u| {
            let y = g.label(u).expect("training nodes are labeled");
            if y >= classes {
                Err(domain!("label {} of node {} exceeds {} classes", y, u, classes))
            } else {
                Ok((u, y))
            }
        })
        .collect()
}

/// Per-node class probabilities (`n × c`).
pub fn gcn_forward(m: &GcnModel, g: &Graph) -> Result<Matrix> {
    m.probabilities(&NormAdj::from_graph(g), g.features())
}

/// Trains with the default settings (hidden 16, 200 epochs, Adam lr 0.01).
pub fn train_node_classifier(g: &Graph, seed: u64) -> Result<GcnModel> {
    train_node_classifier_with(g, GcnHyper::with_seed(seed)).map(|(m, _)| m)
}

/// Full-batch Adam training; also returns the loss before every epoch's step.
pub fn train_node_classifier_with(g: &Graph, hyper: GcnHyper) -> Result<(GcnModel, Vec<f64>)> {
    if g.training_nodes().is_empty() {
        return Err(domain!("node classifier needs at least one labeled training node"));
    }
    let mut model = GcnModel::init(g.feature_dim(), g.num_classes(), hyper);
    let mut s1 = AdamState::for_param(&model.encoder.w1);
    let mut s2 = AdamState::for_param(&model.encoder.w2);
    let mut so = AdamState::for_param(&model.w_out);
    let mut history = Vec::with_capacity(hyper.epochs);
    for _ in 0..hyper.epochs {
        let (loss, grads) = model.loss_and_grads(g)?;
        history.push(loss);
        adam_step(&mut model.encoder.w1, &grads.encoder.w1, &mut s1, hyper.lr)?;
        adam_step(&mut model.encoder.w2, &grads.encoder.w2, &mut s2, hyper.lr)?;
        adam_step(&mut model.w_out, &grads.w_out, &mut so, hyper.lr)?;
    }
    Ok((model, history))
}

/// Argmax class per node, ties toward the smallest class id.
pub fn predict_labels(m: &GcnModel, g: &Graph) -> Result<Vec<usize>> {
    let probs = gcn_forward(m, g)?;
    Ok((0..probs.rows()).map(|i| argmax(probs.row(i))).collect())
}

/// Cross-entropy of node `v`'s prediction against class `y`.
pub fn target_loss(m: &GcnModel, g: &Graph, v: usize, y: usize) -> Result<f64> {
    if v >= g.num_nodes() {
        return Err(domain!("node {} out of range", v));
    }
    if y >= m.num_classes() {
        return Err(Error::Domain(alloc::format!(
            "class {} out of range for {} classes",
            y,
            m.num_classes()
        )));
    }
    let probs = gcn_forward(m, g)?;
    cross_entropy(probs.row(v), y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{finite_diff_grad, max_relative_error, DEFAULT_FD_STEP};
    use crate::testutil::two_cliques;
    use alloc::vec;
    use rand::Rng;

    fn random_graph(n: usize, d: usize, seed: u64) -> Graph {
        let mut rng = PrngStream::new(seed);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.random::<f64>() < 0.35 {
                    edges.push((a, b));
                }
            }
        }
        let feats = Matrix::from_fn(n, d, |_, _| rng.random_range(-1.0..1.0));
        let labels = (0..n).map(|_| Some(rng.random_range(0..3))).collect();
        Graph::new(n, edges)
            .unwrap()
            .with_features(feats)
            .unwrap()
            .with_labels(labels)
            .unwrap()
    }

    #[test]
    fn zero_weights_give_uniform_and_class_zero() {
        let g = two_cliques(3);
        let mut m = GcnModel::init(4, 2, GcnHyper::with_seed(1));
        m.encoder.w1.scale(0.0);
        m.encoder.w2.scale(0.0);
        m.w_out.scale(0.0);
        let p = gcn_forward(&m, &g).unwrap();
        assert!(p.as_slice().iter().all(|&x| (x - 0.5).abs() < 1e-15));
        assert!(predict_labels(&m, &g).unwrap().iter().all(|&c| c == 0));
        assert!((target_loss(&m, &g, 0, 1).unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn feature_dimension_mismatch() {
        let g = two_cliques(3);
        let m = GcnModel::init(5, 2, GcnHyper::with_seed(1));
        assert!(gcn_forward(&m, &g).is_err());
    }

    #[test]
    fn gradients_match_finite_differences() {
        for seed in 0..4 {
            let n = 8 + seed as usize;
            let d = 3 + (seed as usize % 3);
            let g = random_graph(n, d, seed);
            let hyper = GcnHyper {
                hidden: 4,
                epochs: 0,
                lr: 0.0,
                seed,
            };
            let model = GcnModel::init(d, 3, hyper);
            let (_, grads) = model.loss_and_grads(&g).unwrap();
            let w1_fd = finite_diff_grad(
                |w| {
                    let mut m = model.clone();
                    m.encoder.w1 = w.clone();
                    m.loss_and_grads(&g).unwrap().0
                },
                &model.encoder.w1,
                DEFAULT_FD_STEP,
            );
            let w2_fd = finite_diff_grad(
                |w| {
                    let mut m = model.clone();
                    m.encoder.w2 = w.clone();
                    m.loss_and_grads(&g).unwrap().0
                },
                &model.encoder.w2,
                DEFAULT_FD_STEP,
            );
            let wo_fd = finite_diff_grad(
                |w| {
                    let mut m = model.clone();
                    m.w_out = w.clone();
                    m.loss_and_grads(&g).unwrap().0
                },
                &model.w_out,
                DEFAULT_FD_STEP,
            );
            assert!(max_relative_error(&grads.encoder.w1, &w1_fd, 1e-6) < 1e-4);
            assert!(max_relative_error(&grads.encoder.w2, &w2_fd, 1e-6) < 1e-4);
            assert!(max_relative_error(&grads.w_out, &wo_fd, 1e-6) < 1e-4);
        }
    }

    #[test]
    fn separable_cliques_are_learned() {
        let g = two_cliques(6);
        let (m, history) = train_node_classifier_with(&g, GcnHyper::with_seed(3)).unwrap();
        let pred = predict_labels(&m, &g).unwrap();
        for &u in g.train_mask().unwrap() {
            assert_eq!(Some(pred[u]), g.label(u));
        }
        let truth: Vec<usize> = g.labels().iter().map(|l| l.unwrap()).collect();
        assert_eq!(pred, truth);
        // running minimum never moves up and late losses stay near it
        let mut best = f64::INFINITY;
        for &l in &history {
            assert!(l <= best * 1.05 || best == f64::INFINITY);
            best = best.min(l);
        }
        assert!(history.last().unwrap() < &history[0]);
    }

    #[test]
    fn zero_epochs_returns_initial_model() {
        let g = two_cliques(3);
        let hyper = GcnHyper {
            epochs: 0,
            ..GcnHyper::with_seed(5)
        };
        let (m, history) = train_node_classifier_with(&g, hyper).unwrap();
        assert!(history.is_empty());
        assert_eq!(m, GcnModel::init(4, 2, hyper));
    }

    #[test]
    fn training_is_deterministic() {
        let g = two_cliques(4);
        assert_eq!(train_node_classifier(&g, 9).unwrap(), train_node_classifier(&g, 9).unwrap());
    }

    #[test]
    fn empty_train_set_is_rejected() {
        let g = two_cliques(3).with_labels(vec![None; 6]).unwrap();
        assert!(train_node_classifier(&g, 1).is_err());
    }

    #[test]
    fn target_loss_matches_composition() {
        let g = random_graph(9, 4, 12);
        let m = GcnModel::init(4, 3, GcnHyper::with_seed(2));
        let p = gcn_forward(&m, &g).unwrap();
        for v in 0..9 {
            for y in 0..3 {
                let direct = target_loss(&m, &g, v, y).unwrap();
                assert_eq!(direct, cross_entropy(p.row(v), y).unwrap());
            }
        }
        assert!(target_loss(&m, &g, 9, 0).is_err());
        assert!(target_loss(&m, &g, 0, 3).is_err());
    }

    #[test]
    fn permutation_equivariance() {
        let g = random_graph(7, 3, 4);
        let perm = [3usize, 0, 6, 1, 5, 2, 4];
        let edges: Vec<(usize, usize)> = g.edges().map(|e| (perm[e.u()], perm[e.v()])).collect();
        let mut feats = Matrix::zeros(7, 3);
        for u in 0..7 {
            feats.row_mut(perm[u]).copy_from_slice(g.feature(u));
        }
        let h = Graph::new(7, edges).unwrap().with_features(feats).unwrap();
        let m = GcnModel::init(3, 2, GcnHyper::with_seed(8));
        let pg = gcn_forward(&m, &g).unwrap();
        let ph = gcn_forward(&m, &h).unwrap();
        for u in 0..7 {
            for c in 0..2 {
                assert!((pg[(u, c)] - ph[(perm[u], c)]).abs() < 1e-12);
            }
        }
    }
}
