//! Link-prediction detector and the plain link-feature baseline.
//!
//! The detector embeds nodes with the GCN encoder, turns each pair into a
//! latent feature `σ(θ_uᵀ W_edge θ_v)`, appends it to the five standardized
//! link features and feeds the 6-vector to a logistic unit. Everything is
//! trained end-to-end with full-batch SGD on existing edges against an equal
//! number of freshly resampled non-edges per epoch. An existing edge with a
//! low link probability is suspicious.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::gcn::{EncoderGrads, GcnEncoder, NormAdj, DEFAULT_HIDDEN};
use crate::graph::{sample_non_edges, Graph, NodePair};
use crate::metrics::{ald_features, ALD_DIM};
use crate::numkit::{binary_cross_entropy, dot, glorot_uniform, sgd_step, stable_sigmoid, Matrix, PrngStream};
use crate::scores::EdgeScores;

/// Width of the logistic input: five link features plus the latent feature.
pub const LP_FEATURES: usize = ALD_DIM + 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpHyper {
    pub hidden: usize,
    pub epochs: usize,
    pub lr: f64,
    pub seed: u64,
}

impl LpHyper {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            hidden: DEFAULT_HIDDEN,
            epochs: 500,
            lr: 0.01,
            seed,
        }
    }
}

/// Per-dimension z-scoring of the link features.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: [f64; ALD_DIM],
    pub std: [f64; ALD_DIM],
}

impl Standardizer {
    pub fn identity() -> Self {
        Self {
            mean: [0.0; ALD_DIM],
            std: [1.0; ALD_DIM],
        }
    }

    /// Population statistics of `rows`; constant columns get unit scale.
    pub fn fit(rows: &[[f64; ALD_DIM]]) -> Self {
        let n = rows.len().max(1) as f64;
        let mut mean = [0.0; ALD_DIM];
        for r in rows {
            for k in 0..ALD_DIM {
                mean[k] += r[k] / n;
            }
        }
        let mut std = [0.0; ALD_DIM];
        for r in rows {
            for k in 0..ALD_DIM {
                std[k] += (r[k] - mean[k]) * (r[k] - mean[k]) / n;
            }
        }
        for s in std.iter_mut() {
            *s = libm::sqrt(*s);
            if *s < 1e-12 {
                *s = 1.0;
            }
        }
        Self { mean, std }
    }

    pub fn apply(&self, raw: &[f64; ALD_DIM]) -> [f64; ALD_DIM] {
        let mut out = [0.0; ALD_DIM];
        for k in 0..ALD_DIM {
            out[k] = (raw[k] - self.mean[k]) / self.std[k];
        }
        out
    }
}

/// A labeled set of pairs with standardized link features.
#[derive(Clone, Debug)]
pub struct LinkBatch {
    pub pairs: Vec<NodePair>,
    pub labels: Vec<f64>,
    pub features: Vec<[f64; ALD_DIM]>,
}

/// Draws one epoch of balanced training pairs.
///
/// Positive features are computed once; negatives are resampled every epoch
/// and the standardizer is refit on the pooled raw features.
struct LinkSampler {
    positives: Vec<NodePair>,
    positive_raw: Vec<[f64; ALD_DIM]>,
    rng: PrngStream,
}

impl LinkSampler {
    fn new(g: &Graph, rng: PrngStream) -> Result<Self> {
        if g.num_edges() == 0 {
            return Err(domain!("link prediction needs at least one edge"));
        }
        if g.num_non_edges() < g.num_edges() {
            return Err(domain!(
                "graph too dense: {} non-edges for {} edges",
                g.num_non_edges(),
                g.num_edges()
            ));
        }
        let positives = g.edge_list();
        let positive_raw = positives
            .iter()
            .map(|&p| ald_features(g, p).map(|f| f.to_array()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            positives,
            positive_raw,
            rng,
        })
    }

    fn epoch(&mut self, g: &Graph) -> Result<(LinkBatch, Standardizer)> {
        let negatives = sample_non_edges(g, self.positives.len(), &mut self.rng)?;
        let mut raw = self.positive_raw.clone();
        for &p in &negatives {
            raw.push(ald_features(g, p)?.to_array());
        }
        let stats = Standardizer::fit(&raw);
        let mut pairs = self.positives.clone();
        pairs.extend_from_slice(&negatives);
        let mut labels = vec![1.0; self.positives.len()];
        labels.resize(pairs.len(), 0.0);
        let features = raw.iter().map(|r| stats.apply(r)).collect();
        Ok((
            LinkBatch {
                pairs,
                labels,
                features,
            },
            stats,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpModel {
    pub encoder: GcnEncoder,
    pub w_edge: Matrix,
    /// Logistic weights in the order `[5 link features, latent]`.
    pub head: [f64; LP_FEATURES],
    pub bias: f64,
    pub standardizer: Standardizer,
    pub hyper: LpHyper,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpGrads {
    pub encoder: EncoderGrads,
    pub w_edge: Matrix,
    pub head: [f64; LP_FEATURES],
    pub bias: f64,
}

impl LpModel {
    /// Glorot encoder and bilinear layer; zero logistic head.
    pub fn init(input_dim: usize, hyper: LpHyper) -> Self {
        let mut rng = PrngStream::new(hyper.seed).derive("lp-init");
        let encoder = GcnEncoder::init(input_dim, hyper.hidden, &mut rng);
        let mut w_edge = glorot_uniform(hyper.hidden, hyper.hidden, &mut rng);
        w_edge.symmetrize();
        Self {
            encoder,
            w_edge,
            head: [0.0; LP_FEATURES],
            bias: 0.0,
            standardizer: Standardizer::identity(),
            hyper,
        }
    }

    fn latent(&self, theta: &Matrix, pair: NodePair) -> f64 {
        let wv = self.w_edge.mul_vec(theta.row(pair.v()));
        stable_sigmoid(dot(theta.row(pair.u()), &wv))
    }

    fn link_probability(&self, theta: &Matrix, pair: NodePair, feats: &[f64; ALD_DIM]) -> f64 {
        let latent = self.latent(theta, pair);
        let z = dot(&self.head[..ALD_DIM], feats) + self.head[ALD_DIM] * latent + self.bias;
        stable_sigmoid(z)
    }

    /// Mean binary cross-entropy over `batch` and its gradient.
    pub fn loss_and_grads(&self, adj: &NormAdj, x: &Matrix, batch: &LinkBatch) -> Result<(f64, LpGrads)> {
        let pass = self.encoder.forward(adj, x)?;
        let theta = &pass.h2;
        let n = batch.pairs.len() as f64;
        let mut loss = 0.0;
        let mut head = [0.0; LP_FEATURES];
        let mut bias = 0.0;
        let mut w_edge = Matrix::zeros(self.w_edge.rows(), self.w_edge.cols());
        let mut d_theta = Matrix::zeros(theta.rows(), theta.cols());
        for ((&pair, &y), feats) in batch.pairs.iter().zip(&batch.labels).zip(&batch.features) {
            let (tu, tv) = (theta.row(pair.u()), theta.row(pair.v()));
            let w_tv = self.w_edge.mul_vec(tv);
            let latent = stable_sigmoid(dot(tu, &w_tv));
            let z = dot(&self.head[..ALD_DIM], feats) + self.head[ALD_DIM] * latent + self.bias;
            let p = stable_sigmoid(z);
            loss += binary_cross_entropy(y, p);

            let dz = (p - y) / n;
            for k in 0..ALD_DIM {
                head[k] += dz * feats[k];
            }
            head[ALD_DIM] += dz * latent;
            bias += dz;
            let ds = dz * self.head[ALD_DIM] * latent * (1.0 - latent);
            if ds == 0.0 {
                continue;
            }
            let wt_tu = self.w_edge.vec_mul(tu);
            for i in 0..tu.len() {
                for j in 0..tv.len() {
                    w_edge[(i, j)] += ds * tu[i] * tv[j];
                }
            }
            for (d, w) in d_theta.row_mut(pair.u()).iter_mut().zip(&w_tv) {
                *d += ds * w;
            }
            for (d, w) in d_theta.row_mut(pair.v()).iter_mut().zip(&wt_tu) {
                *d += ds * w;
            }
        }
        let encoder = self.encoder.backward(adj, x, &pass, &d_theta);
        Ok((
            loss / n,
            LpGrads {
                encoder,
                w_edge,
                head,
                bias,
            },
        ))
    }

    fn apply_sgd(&mut self, grads: &LpGrads, lr: f64) -> Result<()> {
        sgd_step(&mut self.encoder.w1, &grads.encoder.w1, lr)?;
        sgd_step(&mut self.encoder.w2, &grads.encoder.w2, lr)?;
        sgd_step(&mut self.w_edge, &grads.w_edge, lr)?;
        self.w_edge.symmetrize();
        for (w, g) in self.head.iter_mut().zip(&grads.head) {
            *w -= lr * g;
        }
        self.bias -= lr * grads.bias;
        Ok(())
    }

    /// Link probabilities of arbitrary pairs on `g`.
    pub fn link_probabilities(&self, g: &Graph, pairs: &[NodePair]) -> Result<Vec<f64>> {
        let pass = self.encoder.forward(&NormAdj::from_graph(g), g.features())?;
        pairs
            .iter()
            .map(|&p| {
                let raw = ald_features(g, p)?.to_array();
                Ok(self.link_probability(&pass.h2, p, &self.standardizer.apply(&raw)))
            })
            .collect()
    }
}

/// Trains the link-prediction detector with default settings.
pub fn train_lp(g: &Graph, seed: u64) -> Result<LpModel> {
    train_lp_with(g, LpHyper::with_seed(seed))
}

pub fn train_lp_with(g: &Graph, hyper: LpHyper) -> Result<LpModel> {
    let mut sampler = LinkSampler::new(g, PrngStream::new(hyper.seed).derive("lp-negatives"))?;
    let mut model = LpModel::init(g.feature_dim(), hyper);
    let adj = NormAdj::from_graph(g);
    for _ in 0..hyper.epochs {
        let (batch, stats) = sampler.epoch(g)?;
        model.standardizer = stats;
        let (_, grads) = model.loss_and_grads(&adj, g.features(), &batch)?;
        model.apply_sgd(&grads, hyper.lr)?;
    }
    Ok(model)
}

/// Maliciousness `1 − link probability` for each requested pair.
pub fn lp_pair_scores(m: &LpModel, g: &Graph, targets: &[NodePair]) -> Result<EdgeScores> {
    let probs = m.link_probabilities(g, targets)?;
    Ok(EdgeScores::from_pairs(
        "lp",
        targets.iter().copied().zip(probs.into_iter().map(|p| 1.0 - p)),
    ))
}

/// Logistic regression on the five link features alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AldModel {
    pub weights: [f64; ALD_DIM],
    pub bias: f64,
    pub standardizer: Standardizer,
}

impl AldModel {
    pub fn link_probability(&self, g: &Graph, pair: NodePair) -> Result<f64> {
        let feats = self.standardizer.apply(&ald_features(g, pair)?.to_array());
        Ok(stable_sigmoid(dot(&self.weights, &feats) + self.bias))
    }
}

/// Trains the link-feature logistic regression (500 epochs, SGD lr 0.01).
pub fn train_ald(g: &Graph, seed: u64) -> Result<AldModel> {
    let hyper = LpHyper::with_seed(seed);
    let mut sampler = LinkSampler::new(g, PrngStream::new(seed).derive("ald-negatives"))?;
    let mut model = AldModel {
        weights: [0.0; ALD_DIM],
        bias: 0.0,
        standardizer: Standardizer::identity(),
    };
    for _ in 0..hyper.epochs {
        let (batch, stats) = sampler.epoch(g)?;
        model.standardizer = stats;
        let n = batch.pairs.len() as f64;
        let mut gw = [0.0; ALD_DIM];
        let mut gb = 0.0;
        for (feats, &y) in batch.features.iter().zip(&batch.labels) {
            let p = stable_sigmoid(dot(&model.weights, feats) + model.bias);
            let dz = (p - y) / n;
            for k in 0..ALD_DIM {
                gw[k] += dz * feats[k];
            }
            gb += dz;
        }
        for k in 0..ALD_DIM {
            model.weights[k] -= hyper.lr * gw[k];
        }
        model.bias -= hyper.lr * gb;
    }
    Ok(model)
}

/// Link-feature baseline over every existing edge.
pub fn ald_detector(g: &Graph, seed: u64) -> Result<EdgeScores> {
    let model = train_ald(g, seed)?;
    let mut out = EdgeScores::new("ald");
    for e in g.edges() {
        out.insert(e, 1.0 - model.link_probability(g, e)?);
    }
    Ok(out)
}
