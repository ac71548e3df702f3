//! Sequential graph-generation detector.
//!
//! A GCN encoder with a bilinear pair scorer is trained to regrow each
//! two-hop subgraph one edge at a time: starting from the bare node set, the
//! subgraph's edges are added in a random order and before every addition
//! the model predicts the link probability `σ(θ_uᵀ W θ_v)` of each pair
//! still missing, with `θ` computed on the edges placed so far. An existing
//! edge whose averaged probability stays low is hard to generate and
//! therefore suspicious.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::gcn::{EncoderPass, GcnEncoder, NormAdj, DEFAULT_HIDDEN};
use crate::graph::{sample_non_edges, sample_subgraphs, Graph, NodePair, Subgraph};
use crate::lp::{lp_pair_scores, train_lp, LpModel};
use crate::numkit::{adam_step, binary_cross_entropy, derive_seed, dot, AdamState, Matrix, PrngStream, PROB_FLOOR,
    stable_sigmoid};
use crate::scores::EdgeScores;

/// Snapshots are kept for training epochs in this range (1-based).
pub const CHECKPOINT_EPOCHS: core::ops::RangeInclusive<usize> = 6..=15;

/// Averaged probability reported for a pair that was never scored.
pub const EMPTY_AVERAGE: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GgdHyper {
    pub hidden: usize,
    pub epochs: usize,
    pub lr: f64,
    pub seed: u64,
    /// Score targets only at every `gen_stride`-th generation step.
    pub gen_stride: usize,
}

impl GgdHyper {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            hidden: DEFAULT_HIDDEN,
            epochs: 15,
            lr: 0.001,
            seed,
            gen_stride: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GgdParams {
    pub encoder: GcnEncoder,
    /// Symmetric bilinear form of the pair scorer.
    pub w: Matrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GgdGrads {
    pub w1: Matrix,
    pub w2: Matrix,
    pub w: Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GgdSnapshot {
    pub epoch: usize,
    pub params: GgdParams,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GgdModel {
    pub params: GgdParams,
    pub checkpoints: Vec<GgdSnapshot>,
    pub hyper: GgdHyper,
}

impl GgdModel {
    /// Parameter sets used for detection: the checkpoints, or the final
    /// parameters when none were recorded.
    pub fn detection_params(&self) -> Vec<&GgdParams> {
        if self.checkpoints.is_empty() {
            vec![&self.params]
        } else {
            self.checkpoints.iter().map(|c| &c.params).collect()
        }
    }
}

struct Step {
    adj: NormAdj,
    pass: EncoderPass,
    scored: Vec<(usize, f64)>,
}

struct Generation {
    lists: Vec<Vec<f64>>,
    steps: Vec<Step>,
}

fn check_order(g: &Graph, order: &[NodePair]) -> Result<()> {
    let mut seen = alloc::collections::BTreeSet::new();
    if order.len() != g.num_edges() || !order.iter().all(|&e| g.contains_pair(e) && seen.insert(e)) {
        return Err(domain!("edge order is not a permutation of the graph's {} edges", g.num_edges()));
    }
    Ok(())
}

fn check_targets(g: &Graph, targets: &[NodePair]) -> Result<()> {
    if let Some(t) = targets.iter().find(|t| t.v() >= g.num_nodes()) {
        return Err(domain!("target ({}, {}) outside the {}-node graph", t.u(), t.v(), g.num_nodes()));
    }
    Ok(())
}

impl GgdParams {
    /// Glorot encoder, zero bilinear form.
    pub fn init(input_dim: usize, hidden: usize, rng: &mut PrngStream) -> Self {
        Self {
            encoder: GcnEncoder::init(input_dim, hidden, rng),
            w: Matrix::zeros(hidden, hidden),
        }
    }

    /// Replays the generation of `order` over `g`'s node set and collects
    /// every probability assigned to each target. `outer` pairs a node of
    /// `g` with a node held isolated outside it, whose rows of `W θ` are
    /// given in `outer_wtheta`; their lists follow the inside targets.
    #[allow(clippy::too_many_arguments)]
    fn generate(
        &self,
        g: &Graph,
        xw: &Matrix,
        order: &[NodePair],
        targets: &[NodePair],
        outer: &[(usize, usize)],
        outer_wtheta: Option<&Matrix>,
        stride: usize,
        record: bool,
    ) -> Generation {
        let position: BTreeMap<NodePair, usize> = order.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let last_use: Vec<usize> = targets
            .iter()
            .map(|t| position.get(t).copied().unwrap_or(usize::MAX))
            .collect();
        let mut horizon = last_use.iter().copied().max().unwrap_or(0);
        if !outer.is_empty() {
            horizon = usize::MAX;
        }
        let horizon = horizon.min(order.len().saturating_sub(1));
        let stride = stride.max(1);
        let mut lists = vec![Vec::new(); targets.len() + outer.len()];
        let mut steps = Vec::new();
        let mut adj_lists: Vec<Vec<usize>> = vec![Vec::new(); g.num_nodes()];
        for (t, &e) in order.iter().enumerate().take(horizon + 1) {
            if t % stride == 0 {
                let adj = NormAdj::from_lists(&adj_lists);
                let pass = self.encoder.forward_projected(&adj, xw);
                let mut scored = Vec::new();
                // row v holds W θ_v
                let w_theta = pass.h2.matmul_t(&self.w).expect("hidden widths agree");
                for (i, &target) in targets.iter().enumerate() {
                    if t > last_use[i] {
                        continue;
                    }
                    let logit = dot(pass.h2.row(target.u()), w_theta.row(target.v()));
                    let p = stable_sigmoid(logit);
                    lists[i].push(p);
                    if record {
                        scored.push((i, p));
                    }
                }
                if let Some(owt) = outer_wtheta {
                    for (k, &(a, b)) in outer.iter().enumerate() {
                        let i = targets.len() + k;
                        let p = stable_sigmoid(dot(pass.h2.row(a), owt.row(b)));
                        lists[i].push(p);
                        if record {
                            scored.push((i, p));
                        }
                    }
                }
                if record {
                    steps.push(Step { adj, pass, scored });
                }
            }
            adj_lists[e.u()].push(e.v());
            adj_lists[e.v()].push(e.u());
        }
        Generation { lists, steps }
    }

    /// Per-target probability lists for one generation run over the local
    /// graph `g` with a given edge order.
    pub fn generation_probabilities(
        &self,
        g: &Graph,
        order: &[NodePair],
        targets: &[NodePair],
        stride: usize,
    ) -> Result<Vec<Vec<f64>>> {
        check_order(g, order)?;
        check_targets(g, targets)?;
        let xw = self.encoder.project(g.features())?;
        Ok(self.generate(g, &xw, order, targets, &[], None, stride, false).lists)
    }

    /// Averaged link probability of each target inside `sub`, using one
    /// random edge order drawn from `rng`.
    pub fn edge_link_probs(
        &self,
        sub: &Subgraph,
        targets: &[NodePair],
        stride: usize,
        rng: &mut PrngStream,
    ) -> Result<BTreeMap<NodePair, f64>> {
        let local = targets
            .iter()
            .map(|&t| {
                sub.local_pair(t)
                    .ok_or_else(|| domain!("target ({}, {}) is not inside the subgraph", t.u(), t.v()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut order = sub.graph().edge_list();
        order.shuffle(rng);
        let xw = self.encoder.project(sub.graph().features())?;
        let run = self.generate(sub.graph(), &xw, &order, &local, &[], None, stride, false);
        Ok(targets.iter().copied().zip(run.lists.iter().map(|l| average(l))).collect())
    }

    /// Mean binary cross-entropy of averaged probabilities against `labels`
    /// for one generation run over `g`, with its gradient.
    pub fn generation_loss_and_grads(
        &self,
        g: &Graph,
        order: &[NodePair],
        targets: &[NodePair],
        labels: &[f64],
        stride: usize,
    ) -> Result<(f64, GgdGrads)> {
        check_order(g, order)?;
        check_targets(g, targets)?;
        self.replay_loss(g, order, targets, None, labels, stride)
    }

    /// Mean binary cross-entropy over pairs of the parent graph `g` for one
    /// generation run of `sub`'s edges (`order` in local ids). Nodes outside
    /// the subgraph take part as isolated nodes, so pairs touching them are
    /// scored too.
    pub fn subgraph_loss_and_grads(
        &self,
        g: &Graph,
        sub: &Subgraph,
        order: &[NodePair],
        pairs: &[NodePair],
        labels: &[f64],
        stride: usize,
    ) -> Result<(f64, GgdGrads)> {
        let local = sub.graph();
        check_order(local, order)?;
        check_targets(g, pairs)?;
        if labels.len() != pairs.len() {
            return Err(domain!("{} labels for {} targets", labels.len(), pairs.len()));
        }
        let mut inside = Vec::new();
        let mut outside = Outside {
            x: g.features(),
            cross: Vec::new(),
            fixed: Vec::new(),
        };
        let mut by_kind = (Vec::new(), Vec::new(), Vec::new());
        for (&pair, &y) in pairs.iter().zip(labels) {
            match (sub.local_id(pair.u()), sub.local_id(pair.v())) {
                (Some(a), Some(b)) => {
                    inside.push(NodePair::new(a, b)?);
                    by_kind.0.push(y);
                }
                (Some(a), None) => {
                    outside.cross.push((a, pair.v()));
                    by_kind.1.push(y);
                }
                (None, Some(b)) => {
                    outside.cross.push((b, pair.u()));
                    by_kind.1.push(y);
                }
                (None, None) => {
                    outside.fixed.push((pair.u(), pair.v()));
                    by_kind.2.push(y);
                }
            }
        }
        let mut ordered = by_kind.0;
        ordered.extend(by_kind.1);
        ordered.extend(by_kind.2);
        self.replay_loss(local, order, &inside, Some(&outside), &ordered, stride)
    }

    /// Loss and gradient of one recorded generation run. `labels` lists the
    /// inside targets, then the cross pairs, then the fixed pairs.
    fn replay_loss(
        &self,
        g: &Graph,
        order: &[NodePair],
        targets: &[NodePair],
        outside: Option<&Outside>,
        labels: &[f64],
        stride: usize,
    ) -> Result<(f64, GgdGrads)> {
        let (cross, fixed): (&[(usize, usize)], &[(usize, usize)]) = match outside {
            Some(o) => (&o.cross, &o.fixed),
            None => (&[], &[]),
        };
        if labels.len() != targets.len() + cross.len() + fixed.len() {
            return Err(domain!("{} labels for {} targets", labels.len(), targets.len()));
        }
        if order.is_empty() || labels.is_empty() {
            return Err(domain!("generation loss needs at least one edge and one target"));
        }
        let x = g.features();
        let xw = self.encoder.project(x)?;
        let isolated = match outside {
            Some(o) => {
                let adj = NormAdj::from_lists(&vec![Vec::new(); o.x.rows()]);
                let pass = self.encoder.forward_projected(&adj, &self.encoder.project(o.x)?);
                let w_theta = pass.h2.matmul_t(&self.w)?;
                Some((adj, pass, w_theta))
            }
            None => None,
        };
        let run = self.generate(g, &xw, order, targets, cross, isolated.as_ref().map(|i| &i.2), stride, true);

        let count = labels.len() as f64;
        let hidden = self.w.rows();
        let mut loss = 0.0;
        let mut d_list = Vec::with_capacity(run.lists.len());
        for (list, &y) in run.lists.iter().zip(labels) {
            let p = average(list);
            loss += binary_cross_entropy(y, p);
            d_list.push(bce_slope(y, p) / (count * list.len() as f64));
        }
        let mut w_grad = Matrix::zeros(hidden, hidden);
        let mut w2_grad = Matrix::zeros(hidden, hidden);
        let mut w1_grad = Matrix::zeros(self.encoder.input_dim(), hidden);
        let mut d_isolated = isolated.as_ref().map(|i| Matrix::zeros(i.1.h2.rows(), hidden));

        if let (Some((_, pass, w_theta)), Some(d_iso)) = (isolated.as_ref(), d_isolated.as_mut()) {
            for (&(u, v), &y) in fixed.iter().zip(&labels[targets.len() + cross.len()..]) {
                let p = stable_sigmoid(dot(pass.h2.row(u), w_theta.row(v)));
                loss += binary_cross_entropy(y, p);
                let ds = bce_slope(y, p) / count * p * (1.0 - p);
                let (du, dv) = pair_grad(&self.w, ds, pass.h2.row(u), pass.h2.row(v), &mut w_grad);
                add_to_row(d_iso, u, &du);
                add_to_row(d_iso, v, &dv);
            }
        }

        let mut a_dz1 = Matrix::zeros(g.num_nodes(), hidden);
        // right-hand factors of the isolated nodes' embedding gradients
        let mut iso_right = isolated.as_ref().map(|i| Matrix::zeros(i.1.h2.rows(), hidden));
        for step in &run.steps {
            let theta = &step.pass.h2;
            // ∂L/∂θ = left·Wᵀ + right·W and ∂L/∂W = θᵀ·left
            let mut left = Matrix::zeros(theta.rows(), hidden);
            let mut right = Matrix::zeros(theta.rows(), hidden);
            for &(i, p) in &step.scored {
                let ds = d_list[i] * p * (1.0 - p);
                if ds == 0.0 {
                    continue;
                }
                if i < targets.len() {
                    let (u, v) = (targets[i].u(), targets[i].v());
                    add_scaled_row(&mut left, u, ds, theta.row(v));
                    add_scaled_row(&mut right, v, ds, theta.row(u));
                } else if let (Some((_, pass, _)), Some(e)) = (isolated.as_ref(), iso_right.as_mut()) {
                    let (a, b) = cross[i - targets.len()];
                    add_scaled_row(&mut left, a, ds, pass.h2.row(b));
                    add_scaled_row(e, b, ds, theta.row(a));
                }
            }
            w_grad.add_scaled(&theta.t_matmul(&left)?, 1.0)?;
            let mut d_theta = left.matmul_t(&self.w)?;
            d_theta.add_scaled(&right.matmul(&self.w)?, 1.0)?;
            let (w2, partial) = self.encoder.backward_partial(&step.adj, &step.pass, &d_theta);
            w2_grad.add_scaled(&w2, 1.0)?;
            a_dz1.add_scaled(&partial, 1.0)?;
        }
        if let (Some(d_iso), Some(e)) = (d_isolated.as_mut(), iso_right.as_ref()) {
            d_iso.add_scaled(&e.matmul(&self.w)?, 1.0)?;
        }
        w1_grad.add_scaled(&x.t_matmul(&a_dz1)?, 1.0)?;
        if let (Some((adj, pass, _)), Some(d_iso), Some(o)) = (isolated.as_ref(), d_isolated.as_ref(), outside) {
            let (w2, partial) = self.encoder.backward_partial(adj, pass, d_iso);
            w2_grad.add_scaled(&w2, 1.0)?;
            w1_grad.add_scaled(&o.x.t_matmul(&partial)?, 1.0)?;
        }
        Ok((
            loss / count,
            GgdGrads {
                w1: w1_grad,
                w2: w2_grad,
                w: w_grad,
            },
        ))
    }
}

struct Outside<'a> {
    /// Features of the parent graph.
    x: &'a Matrix,
    /// (node inside, parent node outside)
    cross: Vec<(usize, usize)>,
    /// Parent pairs with both nodes outside.
    fixed: Vec<(usize, usize)>,
}

/// d BCE / d p, zero where the probability is clamped.
fn bce_slope(y: f64, p: f64) -> f64 {
    if p > PROB_FLOOR && p < 1.0 - PROB_FLOOR {
        (p - y) / (p * (1.0 - p))
    } else {
        0.0
    }
}

/// Adds `ds·θ_u θ_vᵀ` to `w_grad`; returns the gradients `ds·W θ_v` and
/// `ds·Wᵀ θ_u` of the two embeddings.
fn pair_grad(w: &Matrix, ds: f64, tu: &[f64], tv: &[f64], w_grad: &mut Matrix) -> (Vec<f64>, Vec<f64>) {
    for (a, &x) in tu.iter().enumerate() {
        for (b, &y) in tv.iter().enumerate() {
            w_grad[(a, b)] += ds * x * y;
        }
    }
    let du = w.mul_vec(tv).into_iter().map(|x| ds * x).collect();
    let dv = w.vec_mul(tu).into_iter().map(|x| ds * x).collect();
    (du, dv)
}

fn add_scaled_row(m: &mut Matrix, row: usize, s: f64, delta: &[f64]) {
    for (d, x) in m.row_mut(row).iter_mut().zip(delta) {
        *d += s * x;
    }
}

fn add_to_row(m: &mut Matrix, row: usize, delta: &[f64]) {
    for (d, x) in m.row_mut(row).iter_mut().zip(delta) {
        *d += x;
    }
}

fn average(list: &[f64]) -> f64 {
    if list.is_empty() {
        EMPTY_AVERAGE
    } else {
        list.iter().sum::<f64>() / list.len() as f64
    }
}

/// Averaged link probabilities of `targets` inside `sub` under the model's
/// final parameters.
pub fn edge_link_probs(
    m: &GgdModel,
    sub: &Subgraph,
    targets: &[NodePair],
    rng: &mut PrngStream,
) -> Result<BTreeMap<NodePair, f64>> {
    m.params.edge_link_probs(sub, targets, m.hyper.gen_stride, rng)
}

struct AdamSet {
    w1: AdamState,
    w2: AdamState,
    w: AdamState,
}

/// Trains the generation model with default settings.
pub fn train_ggd(g: &Graph, seed: u64) -> Result<GgdModel> {
    train_ggd_with(g, GgdHyper::with_seed(seed)).map(|(m, _)| m)
}

/// Trains the generation model; also returns the mean per-pair loss of
/// every epoch (measured before each subgraph's update).
pub fn train_ggd_with(g: &Graph, hyper: GgdHyper) -> Result<(GgdModel, Vec<f64>)> {
    if g.num_edges() == 0 {
        return Err(domain!("generation training needs at least one edge"));
    }
    if g.num_non_edges() < g.num_edges() {
        return Err(domain!(
            "graph too dense: {} non-edges for {} edges",
            g.num_non_edges(),
            g.num_edges()
        ));
    }
    let root = PrngStream::new(hyper.seed);
    let mut params = GgdParams::init(g.feature_dim(), hyper.hidden, &mut root.derive("ggd-init"));
    let mut negative_rng = root.derive("ggd-negatives");
    let mut order_rng = root.derive("ggd-order");
    let mut adam = AdamSet {
        w1: AdamState::for_param(&params.encoder.w1),
        w2: AdamState::for_param(&params.encoder.w2),
        w: AdamState::for_param(&params.w),
    };
    let subgraphs = sample_subgraphs(g);
    let mut labels = vec![1.0; g.num_edges()];
    labels.resize(2 * g.num_edges(), 0.0);
    let mut checkpoints = Vec::new();
    let mut history = Vec::with_capacity(hyper.epochs);
    for epoch in 1..=hyper.epochs {
        let mut pairs = g.edge_list();
        pairs.extend(sample_non_edges(g, g.num_edges(), &mut negative_rng)?);
        let (mut total, mut scored) = (0.0, 0usize);
        for sub in &subgraphs {
            let local = sub.graph();
            if local.num_edges() == 0 {
                continue;
            }
            let mut order = local.edge_list();
            order.shuffle(&mut order_rng);
            let (loss, grads) = params.subgraph_loss_and_grads(g, sub, &order, &pairs, &labels, hyper.gen_stride)?;
            total += loss * pairs.len() as f64;
            scored += pairs.len();
            adam_step(&mut params.encoder.w1, &grads.w1, &mut adam.w1, hyper.lr)?;
            adam_step(&mut params.encoder.w2, &grads.w2, &mut adam.w2, hyper.lr)?;
            adam_step(&mut params.w, &grads.w, &mut adam.w, hyper.lr)?;
            params.w.symmetrize();
        }
        history.push(total / scored.max(1) as f64);
        if CHECKPOINT_EPOCHS.contains(&epoch) {
            checkpoints.push(GgdSnapshot {
                epoch,
                params: params.clone(),
            });
        }
    }
    Ok((
        GgdModel {
            params,
            checkpoints,
            hyper,
        },
        history,
    ))
}

/// One detection pass with a single parameter set: maliciousness
/// `1 − pooled averaged probability`, [`EMPTY_AVERAGE`] for uncovered pairs.
pub fn ggd_detect_params(
    params: &GgdParams,
    g: &Graph,
    targets: &[NodePair],
    stride: usize,
    rng: &mut PrngStream,
) -> Result<EdgeScores> {
    detect_on_subgraphs(params, &sample_subgraphs(g), g, targets, stride, rng)
}

fn detect_on_subgraphs(
    params: &GgdParams,
    subgraphs: &[Subgraph],
    g: &Graph,
    targets: &[NodePair],
    stride: usize,
    rng: &mut PrngStream,
) -> Result<EdgeScores> {
    check_targets(g, targets)?;
    let mut pool: BTreeMap<NodePair, (f64, usize)> = BTreeMap::new();
    for sub in subgraphs {
        if sub.graph().num_edges() == 0 {
            continue;
        }
        let inside: Vec<NodePair> = targets
            .iter()
            .copied()
            .filter(|t| sub.contains(t.u()) && sub.contains(t.v()))
            .collect();
        if inside.is_empty() {
            continue;
        }
        for (pair, p) in params.edge_link_probs(sub, &inside, stride, rng)? {
            let slot = pool.entry(pair).or_insert((0.0, 0));
            slot.0 += p;
            slot.1 += 1;
        }
    }
    let mut out = EdgeScores::new("ggd");
    for &t in targets {
        let p = match pool.get(&t) {
            Some(&(sum, n)) => sum / n as f64,
            None => EMPTY_AVERAGE,
        };
        out.insert(t, 1.0 - p);
    }
    Ok(out)
}

/// Generation-based maliciousness of `targets`, averaged over the model's
/// checkpoints.
pub fn ggd_detect(m: &GgdModel, g: &Graph, targets: &[NodePair], seed: u64) -> Result<EdgeScores> {
    let subgraphs = sample_subgraphs(g);
    let root = PrngStream::new(seed);
    let params = m.detection_params();
    let mut sums: BTreeMap<NodePair, f64> = BTreeMap::new();
    for (i, p) in params.iter().enumerate() {
        let mut rng = root.derive_indexed("ggd-detect", i as u64);
        let scores = detect_on_subgraphs(p, &subgraphs, g, targets, m.hyper.gen_stride, &mut rng)?;
        for (pair, s) in scores.iter() {
            *sums.entry(pair).or_insert(0.0) += s;
        }
    }
    let k = params.len() as f64;
    Ok(EdgeScores::from_pairs("ggd", sums.into_iter().map(|(p, s)| (p, s / k))))
}

/// Generation detector trained on `g` itself, scoring every edge.
pub fn ggd_scores(g: &Graph, seed: u64) -> Result<EdgeScores> {
    let m = train_ggd(g, derive_seed(seed, "ggd"))?;
    ggd_detect(&m, g, &g.edge_list(), derive_seed(seed, "ggd-detect"))
}

/// `g` without its `count` highest-scored edges (ties in canonical order).
pub fn remove_top_scored(g: &Graph, scores: &EdgeScores, count: usize) -> Result<Graph> {
    let mut out = g.clone();
    for (pair, _) in scores.ranked().into_iter().take(count) {
        if !out.remove_edge(pair) {
            return Err(domain!("scored pair ({}, {}) is not an edge", pair.u(), pair.v()));
        }
    }
    Ok(out)
}

/// Number of edges the filter removes: half, rounded up.
pub fn filter_count(num_edges: usize) -> usize {
    num_edges.div_ceil(2)
}

/// Generation model trained on the LP-filtered graph.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredGgd {
    pub filtered: Graph,
    pub model: GgdModel,
}

/// Removes the top half of `g`'s edges by LP maliciousness and trains the
/// generation model on what remains.
pub fn fit_filtered_ggd(g: &Graph, lp: &LpModel, seed: u64) -> Result<FilteredGgd> {
    if g.num_edges() < 2 {
        return Err(domain!("filtering needs at least two edges, got {}", g.num_edges()));
    }
    let scores = lp_pair_scores(lp, g, &g.edge_list())?;
    let filtered = remove_top_scored(g, &scores, filter_count(g.num_edges()))?;
    let model = train_ggd(&filtered, derive_seed(seed, "ggd"))?;
    Ok(FilteredGgd { filtered, model })
}

/// Generation detector trained on the LP-filtered graph, scoring every edge
/// of the original graph.
pub fn lp_filter_ggd(g: &Graph, seed: u64) -> Result<EdgeScores> {
    let lp = train_lp(g, derive_seed(seed, "lp"))?;
    let fitted = fit_filtered_ggd(g, &lp, seed)?;
    let mut out = ggd_detect(&fitted.model, g, &g.edge_list(), derive_seed(seed, "ggd-detect"))?;
    out.set_detector("lp+ggd");
    Ok(out)
}
