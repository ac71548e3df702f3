//! Greedy evasion attacks against a fixed node classifier.
//!
//! Target attacks add, one at a time, the candidate edge that most increases
//! the target's cross-entropy under the trained model, until the target is
//! misclassified or the budget runs out. The global attack does the same for
//! the summed training loss over a sampled candidate pool per step.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::gcn::{GcnModel, NormAdj};
use crate::graph::{sample_non_edges, Graph, NodePair};
use crate::numkit::{argmax, cross_entropy, relu, softmax, Matrix, PrngStream};

/// Candidate pairs drawn per step by the global attack.
pub const META_CANDIDATES: usize = 500;
/// Fraction of the lowest-scored candidates an adaptive attacker keeps.
pub const ADAPTIVE_FRACTION: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackProfile {
    #[serde(rename = "single")]
    SingleEdge,
    MultiDirect,
    MultiIndirect,
    Meta,
}

impl AttackProfile {
    pub const ALL: [AttackProfile; 4] = [
        AttackProfile::SingleEdge,
        AttackProfile::MultiDirect,
        AttackProfile::MultiIndirect,
        AttackProfile::Meta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AttackProfile::SingleEdge => "single",
            AttackProfile::MultiDirect => "multi-direct",
            AttackProfile::MultiIndirect => "multi-indirect",
            AttackProfile::Meta => "meta",
        }
    }

    /// Maximum number of added edges on the clean graph `g`.
    pub fn budget(self, g: &Graph, target: Option<usize>) -> Result<usize> {
        let degree = || {
            target
                .filter(|&t| t < g.num_nodes())
                .map(|t| g.degree(t))
                .ok_or_else(|| domain!("{} attack needs a target inside the graph", self.name()))
        };
        Ok(match self {
            AttackProfile::SingleEdge => 1,
            AttackProfile::MultiDirect | AttackProfile::MultiIndirect => degree()?,
            AttackProfile::Meta => g.num_edges() / 20,
        })
    }
}

impl fmt::Display for AttackProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttackProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AttackProfile::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| domain!("unknown attack profile '{}'", s))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackResult {
    pub profile: AttackProfile,
    pub target: Option<usize>,
    pub added_edges: Vec<NodePair>,
    pub success: bool,
    pub pre_label: Option<usize>,
    pub post_label: Option<usize>,
    pub pre_rate: Option<f64>,
    pub post_rate: Option<f64>,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AttackOptions {
    /// Single-edge attack may pick any non-edge instead of target-incident ones.
    pub single_any_pair: bool,
    pub meta_candidates: usize,
}

impl Default for AttackOptions {
    fn default() -> Self {
        Self {
            single_any_pair: false,
            meta_candidates: META_CANDIDATES,
        }
    }
}

/// Checks an attack result against the constraints of its profile.
pub fn validate_attack(g: &Graph, r: &AttackResult) -> Result<()> {
    let bad = |msg: String| Err(domain!("invalid {} attack: {}", r.profile.name(), msg));
    let mut seen = alloc::collections::BTreeSet::new();
    for &e in &r.added_edges {
        if e.v() >= g.num_nodes() {
            return bad(alloc::format!("edge ({}, {}) out of range", e.u(), e.v()));
        }
        if g.contains_pair(e) {
            return bad(alloc::format!("edge ({}, {}) already present", e.u(), e.v()));
        }
        if !seen.insert(e) {
            return bad(alloc::format!("edge ({}, {}) added twice", e.u(), e.v()));
        }
    }
    let budget = r.profile.budget(g, r.target)?;
    if r.added_edges.len() > budget {
        return bad(alloc::format!("{} edges exceed budget {}", r.added_edges.len(), budget));
    }
    match (r.profile, r.target) {
        (AttackProfile::Meta, None) => {}
        (AttackProfile::Meta, Some(_)) => return bad("global attack has no target".into()),
        (_, None) => return bad("target attack without target".into()),
        (AttackProfile::MultiDirect, Some(t)) => {
            if r.added_edges.iter().any(|e| !e.contains(t)) {
                return bad("edge not incident to the target".into());
            }
        }
        (AttackProfile::MultiIndirect, Some(t)) => {
            if r.added_edges.iter().any(|e| e.contains(t)) {
                return bad("edge incident to the target".into());
            }
        }
        (AttackProfile::SingleEdge, Some(_)) => {}
    }
    Ok(())
}

/// Evaluates one node's class probabilities after edge additions without a
/// full forward pass: only the two-hop neighborhood is recomputed.
pub struct TargetEvaluator<'a> {
    model: &'a GcnModel,
    xw: Matrix,
    adj: Vec<Vec<usize>>,
}

impl<'a> TargetEvaluator<'a> {
    pub fn new(model: &'a GcnModel, g: &Graph) -> Result<Self> {
        Ok(Self {
            model,
            xw: model.encoder.project(g.features())?,
            adj: g.adjacency_lists().to_vec(),
        })
    }

    fn inv_sqrt_degree(&self, x: usize) -> f64 {
        1.0 / libm::sqrt((self.adj[x].len() + 1) as f64)
    }

    fn hidden1(&self, j: usize) -> Vec<f64> {
        let dj = self.inv_sqrt_degree(j);
        let mut z = vec![0.0; self.xw.cols()];
        for k in core::iter::once(j).chain(self.adj[j].iter().copied()) {
            let w = dj * self.inv_sqrt_degree(k);
            for (zi, x) in z.iter_mut().zip(self.xw.row(k)) {
                *zi += w * x;
            }
        }
        z.into_iter().map(relu).collect()
    }

    /// Class probabilities of `t` on the current graph.
    pub fn probabilities(&self, t: usize) -> Vec<f64> {
        let dt = self.inv_sqrt_degree(t);
        let mut mixed = vec![0.0; self.xw.cols()];
        for j in core::iter::once(t).chain(self.adj[t].iter().copied()) {
            let w = dt * self.inv_sqrt_degree(j);
            for (m, h) in mixed.iter_mut().zip(self.hidden1(j)) {
                *m += w * h;
            }
        }
        let h2: Vec<f64> = self.model.encoder.w2.vec_mul(&mixed).into_iter().map(relu).collect();
        softmax(&self.model.w_out.vec_mul(&h2))
    }

    pub fn add(&mut self, e: NodePair) {
        self.adj[e.u()].push(e.v());
        self.adj[e.v()].push(e.u());
    }

    fn remove_last(&mut self, e: NodePair) {
        self.adj[e.u()].pop();
        self.adj[e.v()].pop();
    }

    /// Cross-entropy of `t` against `y` if `e` were added.
    pub fn loss_with(&mut self, t: usize, y: usize, e: NodePair) -> Result<f64> {
        self.add(e);
        let loss = cross_entropy(&self.probabilities(t), y);
        self.remove_last(e);
        loss
    }
}

/// Candidate pairs of a target profile on the clean graph, canonical order.
pub fn candidate_pairs(g: &Graph, target: usize, profile: AttackProfile, opts: &AttackOptions) -> Result<Vec<NodePair>> {
    if target >= g.num_nodes() {
        return Err(domain!("target {} out of range", target));
    }
    let n = g.num_nodes();
    let mut out = Vec::new();
    match profile {
        AttackProfile::SingleEdge if opts.single_any_pair => {
            for a in 0..n {
                for b in (a + 1)..n {
                    if !g.has_edge(a, b) {
                        out.push(NodePair::new(a, b)?);
                    }
                }
            }
        }
        AttackProfile::SingleEdge | AttackProfile::MultiDirect => {
            for w in (0..n).filter(|&w| w != target && !g.has_edge(target, w)) {
                out.push(NodePair::new(target, w)?);
            }
        }
        AttackProfile::MultiIndirect => {
            let near = g.neighbors(target);
            for a in (0..n).filter(|&a| a != target) {
                for b in ((a + 1)..n).filter(|&b| b != target) {
                    let touches = near.binary_search(&a).is_ok() || near.binary_search(&b).is_ok();
                    if touches && !g.has_edge(a, b) {
                        out.push(NodePair::new(a, b)?);
                    }
                }
            }
        }
        AttackProfile::Meta => return Err(domain!("the global attack has no target candidates")),
    }
    Ok(out)
}

fn correct_label(m: &GcnModel, g: &Graph, target: usize) -> Result<usize> {
    let y = g
        .label(target)
        .ok_or_else(|| Error::Precondition(alloc::format!("target {} has no label", target)))?;
    let eval = TargetEvaluator::new(m, g)?;
    let predicted = argmax(&eval.probabilities(target));
    if predicted != y {
        return Err(Error::Precondition(alloc::format!(
            "target {} is already misclassified ({} instead of {})",
            target,
            predicted,
            y
        )));
    }
    Ok(y)
}

fn greedy_over(
    g: &Graph,
    m: &GcnModel,
    target: usize,
    profile: AttackProfile,
    candidates: Vec<NodePair>,
    seed: u64,
) -> Result<AttackResult> {
    let y = correct_label(m, g, target)?;
    let budget = profile.budget(g, Some(target))?;
    let mut eval = TargetEvaluator::new(m, g)?;
    let mut current = cross_entropy(&eval.probabilities(target), y)?;
    let mut pool = candidates;
    let mut added = Vec::new();
    let mut label = y;
    while added.len() < budget && label == y {
        let mut best: Option<(usize, f64)> = None;
        for (i, &e) in pool.iter().enumerate() {
            let loss = eval.loss_with(target, y, e)?;
            if best.is_none_or(|(_, b)| loss > b) {
                best = Some((i, loss));
            }
        }
        let Some((i, loss)) = best else { break };
        if loss <= current {
            break;
        }
        let e = pool.remove(i);
        eval.add(e);
        added.push(e);
        current = loss;
        label = argmax(&eval.probabilities(target));
    }
    Ok(AttackResult {
        profile,
        target: Some(target),
        added_edges: added,
        success: label != y,
        pre_label: Some(y),
        post_label: Some(label),
        pre_rate: None,
        post_rate: None,
        seed,
    })
}

/// Greedy loss-maximizing target attack under `profile`'s constraints.
pub fn greedy_target_attack(g: &Graph, m: &GcnModel, target: usize, profile: AttackProfile, seed: u64) -> Result<AttackResult> {
    greedy_target_attack_with(g, m, target, profile, seed, &AttackOptions::default())
}

pub fn greedy_target_attack_with(
    g: &Graph,
    m: &GcnModel,
    target: usize,
    profile: AttackProfile,
    seed: u64,
    opts: &AttackOptions,
) -> Result<AttackResult> {
    let candidates = candidate_pairs(g, target, profile, opts)?;
    greedy_over(g, m, target, profile, candidates, seed)
}

/// The lowest-scored quarter (rounded up) of `candidates`, ties in
/// canonical order.
pub fn restrict_candidates(candidates: &[NodePair], scores: &[f64]) -> Result<Vec<NodePair>> {
    if candidates.len() != scores.len() {
        return Err(domain!("{} scores for {} candidates", scores.len(), candidates.len()));
    }
    let mut ranked: Vec<(f64, NodePair)> = scores.iter().copied().zip(candidates.iter().copied()).collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let keep = libm::ceil(candidates.len() as f64 * ADAPTIVE_FRACTION) as usize;
    let mut kept: Vec<NodePair> = ranked.into_iter().take(keep).map(|(_, p)| p).collect();
    kept.sort_unstable();
    Ok(kept)
}

/// Target attack restricted to the candidates the defender's scorer finds
/// least suspicious on the clean graph.
pub fn adaptive_attack(
    g: &Graph,
    m: &GcnModel,
    target: usize,
    profile: AttackProfile,
    scorer: &mut dyn FnMut(&Graph, &[NodePair]) -> Result<Vec<f64>>,
    seed: u64,
) -> Result<AttackResult> {
    let candidates = candidate_pairs(g, target, profile, &AttackOptions::default())?;
    let scores = scorer(g, &candidates)?;
    let restricted = restrict_candidates(&candidates, &scores)?;
    greedy_over(g, m, target, profile, restricted, seed)
}

fn misclassification(probs: &Matrix, g: &Graph) -> f64 {
    let labeled: Vec<(usize, usize)> = (0..g.num_nodes()).filter_map(|u| g.label(u).map(|y| (u, y))).collect();
    if labeled.is_empty() {
        return 0.0;
    }
    let wrong = labeled.iter().filter(|&&(u, y)| argmax(probs.row(u)) != y).count();
    wrong as f64 / labeled.len() as f64
}

fn training_loss(probs: &Matrix, train: &[(usize, usize)]) -> Result<f64> {
    train.iter().map(|&(u, y)| cross_entropy(probs.row(u), y)).sum()
}

/// Global greedy attack: each step adds the sampled non-edge that most
/// increases the summed training cross-entropy, up to 5% of `|E|` edges.
pub fn meta_attack(g: &Graph, m: &GcnModel, seed: u64) -> Result<AttackResult> {
    meta_attack_with(g, m, seed, &AttackOptions::default())
}

pub fn meta_attack_with(g: &Graph, m: &GcnModel, seed: u64, opts: &AttackOptions) -> Result<AttackResult> {
    let budget = AttackProfile::Meta.budget(g, None)?;
    if budget == 0 {
        return Err(domain!("global attack budget is zero for {} edges", g.num_edges()));
    }
    let train: Vec<(usize, usize)> = g
        .training_nodes()
        .into_iter()
        .map(|u| (u, g.label(u).expect("training nodes are labeled")))
        .collect();
    if train.is_empty() {
        return Err(domain!("global attack needs labeled training nodes"));
    }
    let xw = m.encoder.project(g.features())?;
    let mut rng = PrngStream::new(seed).derive("meta-candidates");
    let mut current = g.clone();
    let pre_probs = m.probabilities_projected(&NormAdj::from_graph(g), &xw);
    let pre_rate = misclassification(&pre_probs, g);
    let mut added = Vec::new();
    while added.len() < budget {
        let k = opts.meta_candidates.min(current.num_non_edges());
        if k == 0 {
            break;
        }
        let mut pool = sample_non_edges(&current, k, &mut rng)?;
        pool.sort_unstable();
        let mut lists = current.adjacency_lists().to_vec();
        let mut best: Option<(NodePair, f64)> = None;
        for &e in &pool {
            lists[e.u()].push(e.v());
            lists[e.v()].push(e.u());
            let probs = m.probabilities_projected(&NormAdj::from_lists(&lists), &xw);
            lists[e.u()].pop();
            lists[e.v()].pop();
            let loss = training_loss(&probs, &train)?;
            if best.is_none_or(|(_, b)| loss > b) {
                best = Some((e, loss));
            }
        }
        let (e, _) = best.expect("non-empty pool");
        current.add_edge(e)?;
        added.push(e);
    }
    let post_probs = m.probabilities_projected(&NormAdj::from_graph(&current), &xw);
    let post_rate = misclassification(&post_probs, g);
    Ok(AttackResult {
        profile: AttackProfile::Meta,
        target: None,
        added_edges: added,
        success: post_rate > pre_rate,
        pre_label: None,
        post_label: None,
        pre_rate: Some(pre_rate),
        post_rate: Some(post_rate),
        seed,
    })
}

/// Runs `profile` against `target` (ignored for the global attack).
pub fn run_attack(g: &Graph, m: &GcnModel, profile: AttackProfile, target: Option<usize>, seed: u64) -> Result<AttackResult> {
    match (profile, target) {
        (AttackProfile::Meta, _) => meta_attack(g, m, seed),
        (_, Some(t)) => greedy_target_attack(g, m, t, profile, seed),
        (_, None) => Err(domain!("{} attack needs a target", profile.name())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcn::{gcn_forward, train_node_classifier};
    use crate::graph::{gen_barabasi_albert, synth_annotate, assign_train_split};
    use crate::testutil::two_cliques;

    fn p(a: usize, b: usize) -> NodePair {
        NodePair::new(a, b).unwrap()
    }

    fn ba_fixture(seed: u64) -> Graph {
        let g = gen_barabasi_albert(60, 2, seed).unwrap();
        let g = synth_annotate(&g, 12, 3, seed).unwrap();
        assign_train_split(&g, 0.5, seed).unwrap()
    }

    #[test]
    fn local_evaluator_matches_full_forward() {
        let g = ba_fixture(1);
        let m = train_node_classifier(&g, 1).unwrap();
        let mut eval = TargetEvaluator::new(&m, &g).unwrap();
        let extra: Vec<NodePair> = [(0, 40), (3, 41), (17, 59), (1, 30)]
            .iter()
            .map(|&(a, b)| p(a, b))
            .filter(|&e| !g.contains_pair(e))
            .collect();
        assert!(extra.len() >= 2);
        for &e in &extra {
            eval.add(e);
        }
        let full = gcn_forward(&m, &g.with_added_edges(&extra).unwrap()).unwrap();
        for t in 0..g.num_nodes() {
            let local = eval.probabilities(t);
            for (a, b) in local.iter().zip(full.row(t)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn budgets() {
        let g = ba_fixture(2);
        assert_eq!(AttackProfile::SingleEdge.budget(&g, Some(0)).unwrap(), 1);
        assert_eq!(AttackProfile::MultiDirect.budget(&g, Some(5)).unwrap(), g.degree(5));
        assert_eq!(AttackProfile::Meta.budget(&g, None).unwrap(), g.num_edges() / 20);
        assert!(AttackProfile::MultiIndirect.budget(&g, None).is_err());
        let hundred = Graph::new(101, (0..100).map(|i| (i, i + 1))).unwrap();
        assert_eq!(AttackProfile::Meta.budget(&hundred, None).unwrap(), 5);
        for profile in AttackProfile::ALL {
            assert_eq!(profile.name().parse::<AttackProfile>().unwrap(), profile);
        }
        assert!("nettack".parse::<AttackProfile>().is_err());
    }

    #[test]
    fn candidates_respect_profiles() {
        let g = ba_fixture(3);
        let t = 7;
        let opts = AttackOptions::default();
        let direct = candidate_pairs(&g, t, AttackProfile::MultiDirect, &opts).unwrap();
        assert_eq!(direct.len(), g.num_nodes() - 1 - g.degree(t));
        assert!(direct.iter().all(|e| e.contains(t) && !g.contains_pair(*e)));
        let indirect = candidate_pairs(&g, t, AttackProfile::MultiIndirect, &opts).unwrap();
        assert!(indirect.iter().all(|e| !e.contains(t) && !g.contains_pair(*e)));
        assert!(indirect.iter().all(|e| g.has_edge(t, e.u()) || g.has_edge(t, e.v())));
        assert!(indirect.windows(2).all(|w| w[0] < w[1]));
        let any = AttackOptions {
            single_any_pair: true,
            ..opts
        };
        assert_eq!(
            candidate_pairs(&g, t, AttackProfile::SingleEdge, &any).unwrap().len(),
            g.num_non_edges()
        );
    }

    #[test]
    fn target_attacks_obey_constraints() {
        let g = ba_fixture(4);
        let m = train_node_classifier(&g, 4).unwrap();
        let preds = crate::gcn::predict_labels(&m, &g).unwrap();
        let targets: Vec<usize> = (0..g.num_nodes()).filter(|&u| Some(preds[u]) == g.label(u)).take(6).collect();
        for &t in &targets {
            for profile in [AttackProfile::SingleEdge, AttackProfile::MultiDirect, AttackProfile::MultiIndirect] {
                let r = greedy_target_attack(&g, &m, t, profile, 0).unwrap();
                validate_attack(&g, &r).unwrap();
                assert_eq!(r.success, r.post_label != r.pre_label);
                assert_eq!(r, greedy_target_attack(&g, &m, t, profile, 0).unwrap());
                // the greedy objective never decreases
                let mut eval = TargetEvaluator::new(&m, &g).unwrap();
                let y = r.pre_label.unwrap();
                let mut last = cross_entropy(&eval.probabilities(t), y).unwrap();
                for &e in &r.added_edges {
                    eval.add(e);
                    let now = cross_entropy(&eval.probabilities(t), y).unwrap();
                    assert!(now > last);
                    last = now;
                }
            }
        }
    }

    #[test]
    fn misclassified_target_is_rejected() {
        let g = ba_fixture(5);
        let m = train_node_classifier(&g, 5).unwrap();
        let preds = crate::gcn::predict_labels(&m, &g).unwrap();
        let wrong = (0..g.num_nodes()).find(|&u| Some(preds[u]) != g.label(u));
        if let Some(u) = wrong {
            assert!(matches!(
                greedy_target_attack(&g, &m, u, AttackProfile::SingleEdge, 0),
                Err(Error::Precondition(_))
            ));
        }
        let unlabeled = g.clone().with_labels(vec![None; g.num_nodes()]).unwrap();
        assert!(greedy_target_attack(&unlabeled, &m, 0, AttackProfile::SingleEdge, 0).is_err());
    }

    #[test]
    fn single_edge_flips_two_clique_target() {
        // weakly connected target: one link into its own clique, features
        // leaning toward the other clique
        let base = two_cliques(5);
        let mut g = Graph::new(11, base.edges().map(|e| (e.u(), e.v())).chain([(10, 0)])).unwrap();
        let feats = Matrix::from_fn(11, 2, |u, j| {
            let c = if u < 5 { 0 } else { 1 };
            if u == 10 {
                [0.1, 0.9][j]
            } else if j == c {
                1.0
            } else {
                0.0
            }
        });
        let labels = (0..11).map(|u| Some(if u < 5 || u == 10 { 0 } else { 1 })).collect();
        g = g
            .with_features(feats)
            .unwrap()
            .with_labels(labels)
            .unwrap()
            .with_train_mask(Some((0..10).collect()))
            .unwrap();
        let m = train_node_classifier(&g, 1).unwrap();
        let r = greedy_target_attack(&g, &m, 10, AttackProfile::SingleEdge, 0).unwrap();
        validate_attack(&g, &r).unwrap();
        assert_eq!(r.added_edges.len(), 1);
        assert!(r.success);
        assert!(r.added_edges[0].other(10).unwrap() >= 5);
    }

    #[test]
    fn adaptive_restriction() {
        let cands: Vec<NodePair> = (1..41).map(|w| p(0, w)).collect();
        let scores: Vec<f64> = (0..40).map(|i| ((i * 17) % 40) as f64).collect();
        let kept = restrict_candidates(&cands, &scores).unwrap();
        assert_eq!(kept.len(), 10);
        let mut sorted = scores.clone();
        sorted.sort_by(f64::total_cmp);
        let q = sorted[9];
        for e in &kept {
            let i = cands.iter().position(|c| c == e).unwrap();
            assert!(scores[i] <= q);
        }

        let g = ba_fixture(6);
        let m = train_node_classifier(&g, 6).unwrap();
        let preds = crate::gcn::predict_labels(&m, &g).unwrap();
        let t = (0..g.num_nodes()).find(|&u| Some(preds[u]) == g.label(u)).unwrap();
        let mut scorer = |_: &Graph, pairs: &[NodePair]| Ok(pairs.iter().map(|e| e.v() as f64).collect());
        let r = adaptive_attack(&g, &m, t, AttackProfile::MultiDirect, &mut scorer, 0).unwrap();
        validate_attack(&g, &r).unwrap();
        let cands = candidate_pairs(&g, t, AttackProfile::MultiDirect, &AttackOptions::default()).unwrap();
        let scores: Vec<f64> = cands.iter().map(|e| e.v() as f64).collect();
        let kept = restrict_candidates(&cands, &scores).unwrap();
        assert!(r.added_edges.iter().all(|e| kept.contains(e)));
    }

    #[test]
    fn meta_attack_contract() {
        let g = two_cliques(6);
        let m = train_node_classifier(&g, 2).unwrap();
        let r = meta_attack(&g, &m, 3).unwrap();
        validate_attack(&g, &r).unwrap();
        assert_eq!(r.added_edges.len(), g.num_edges() / 20);
        assert!(r.post_rate.unwrap() >= r.pre_rate.unwrap());
        assert_eq!(r, meta_attack(&g, &m, 3).unwrap());
        let small = Graph::new(5, [(0, 1), (1, 2)]).unwrap().with_features(Matrix::zeros(5, 1)).unwrap();
        assert!(meta_attack(&small, &m, 0).is_err());
    }

    #[test]
    fn validator_rejects_violations() {
        let g = ba_fixture(7);
        let t = 3;
        let w = (0..g.num_nodes()).find(|&w| w != t && !g.has_edge(t, w)).unwrap();
        let mut r = AttackResult {
            profile: AttackProfile::MultiIndirect,
            target: Some(t),
            added_edges: vec![p(t, w)],
            success: false,
            pre_label: None,
            post_label: None,
            pre_rate: None,
            post_rate: None,
            seed: 0,
        };
        assert!(validate_attack(&g, &r).is_err());
        r.profile = AttackProfile::MultiDirect;
        validate_attack(&g, &r).unwrap();
        let existing = g.edges().next().unwrap();
        r.added_edges = vec![existing];
        assert!(validate_attack(&g, &r).is_err());
        r.profile = AttackProfile::SingleEdge;
        r.added_edges = vec![p(t, w), p(t, w)];
        assert!(validate_attack(&g, &r).is_err());
    }
}
