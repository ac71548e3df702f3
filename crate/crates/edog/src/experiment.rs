//! Attack-and-detect experiments and their JSON config and report schemas.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use edog_core::attack::{adaptive_attack, run_attack, AttackProfile, AttackResult};
use edog_core::ensemble::EdogDetector;
use edog_core::gcn::{predict_labels, train_node_classifier, GcnModel};
use edog_core::graph::{assign_train_split, gen_barabasi_albert, gen_erdos_renyi, sample_non_edges, synth_annotate};
use edog_core::metrics::roc_auc;
use edog_core::numkit::derive_seed;
use edog_core::{EdgeScores, Graph, NodePair, PrngStream};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::detectors::{detect_many, Method};
use crate::error::{CliError, Result};
use crate::formats::load_graph;

/// Where the experiment graph comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DatasetSpec {
    Ba { n: usize, m: usize, seed: u64 },
    Er { n: usize, p: f64, seed: u64 },
    File { path: PathBuf },
}

impl DatasetSpec {
    pub fn describe(&self) -> String {
        match self {
            DatasetSpec::Ba { n, m, seed } => format!("ba(n={n}, m={m}, seed={seed})"),
            DatasetSpec::Er { n, p, seed } => format!("er(n={n}, p={p}, seed={seed})"),
            DatasetSpec::File { path } => format!("file({})", path.display()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum TargetSpec {
    /// This many successfully attacked targets, drawn at random.
    Count(usize),
    /// One successfully attacked target of each listed degree.
    Degrees(Vec<usize>),
    /// Exactly these nodes, successful or not.
    Nodes(Vec<usize>),
}

fn default_dim() -> usize {
    20
}
fn default_rounds() -> usize {
    3
}
fn default_fraction() -> f64 {
    0.5
}
fn default_attempts() -> usize {
    60
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    /// Synthetic feature width for graphs without features.
    #[serde(default = "default_dim")]
    pub feature_dim: usize,
    #[serde(default = "default_rounds")]
    pub smoothing_rounds: usize,
    /// Share of labeled nodes used to train the classifier when the graph
    /// carries no training mask.
    #[serde(default = "default_fraction")]
    pub train_fraction: f64,
    pub profile: AttackProfile,
    pub targets: TargetSpec,
    pub detectors: Vec<Method>,
    pub seed: u64,
    /// Attack attempts per requested target before giving up.
    #[serde(default = "default_attempts")]
    pub max_attempts: usize,
    /// Also compare the standard attack with one restricted by the ensemble.
    #[serde(default)]
    pub adaptive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetRecord {
    pub target: Option<usize>,
    pub degree: Option<usize>,
    pub added_edges: Vec<NodePair>,
    pub success: bool,
    pub pre_label: Option<usize>,
    pub post_label: Option<usize>,
    pub pre_rate: Option<f64>,
    pub post_rate: Option<f64>,
    /// Per-detector AUC; empty when the attack failed or added nothing.
    pub auc: BTreeMap<String, f64>,
}

/// Best of a fixed set of detectors, as if the attack type were known.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnownAttackView {
    pub candidates: Vec<String>,
    pub best: String,
    pub mean_auc: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveRow {
    pub target: usize,
    pub standard_success: bool,
    pub standard_edges: Vec<NodePair>,
    pub adaptive_success: bool,
    pub adaptive_edges: Vec<NodePair>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveSummary {
    pub rows: Vec<AdaptiveRow>,
    pub standard_successes: usize,
    pub adaptive_successes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub dataset: String,
    pub num_nodes: usize,
    pub num_edges: usize,
    pub profile: AttackProfile,
    pub seed: u64,
    pub detectors: Vec<Method>,
    pub classifier_accuracy: f64,
    pub records: Vec<TargetRecord>,
    pub mean_auc: BTreeMap<String, f64>,
    pub known_attack_view: Option<KnownAttackView>,
    pub adaptive: Option<AdaptiveSummary>,
    pub warning: Option<String>,
}

/// Loads or generates the graph, adding synthetic features, labels and a
/// training split where missing.
pub fn prepare_graph(cfg: &ExperimentConfig) -> Result<Graph> {
    let g = match &cfg.dataset {
        DatasetSpec::Ba { n, m, seed } => gen_barabasi_albert(*n, *m, *seed)?,
        DatasetSpec::Er { n, p, seed } => gen_erdos_renyi(*n, *p, *seed)?,
        DatasetSpec::File { path } => load_graph(path)?,
    };
    annotate_if_needed(g, cfg.feature_dim, cfg.smoothing_rounds, cfg.train_fraction, cfg.seed)
}

pub fn annotate_if_needed(g: Graph, dim: usize, rounds: usize, fraction: f64, seed: u64) -> Result<Graph> {
    let g = if g.feature_dim() == 0 {
        synth_annotate(&g, dim, rounds, derive_seed(seed, "annotate"))?
    } else {
        g
    };
    if g.train_mask().is_some() {
        return Ok(g);
    }
    Ok(assign_train_split(&g, fraction, derive_seed(seed, "split"))?)
}

fn accuracy(m: &GcnModel, g: &Graph) -> Result<f64> {
    let preds = predict_labels(m, g)?;
    let labeled: Vec<usize> = (0..g.num_nodes()).filter(|&u| g.label(u).is_some()).collect();
    if labeled.is_empty() {
        return Ok(0.0);
    }
    let right = labeled.iter().filter(|&&u| g.label(u) == Some(preds[u])).count();
    Ok(right as f64 / labeled.len() as f64)
}

/// Nodes a target attack can start from: labeled, correctly classified and
/// not isolated, in a seeded random order.
pub fn attackable_nodes(g: &Graph, m: &GcnModel, seed: u64) -> Result<Vec<usize>> {
    let preds = predict_labels(m, g)?;
    let mut nodes: Vec<usize> = (0..g.num_nodes())
        .filter(|&u| g.degree(u) > 0 && g.label(u) == Some(preds[u]))
        .collect();
    nodes.shuffle(&mut PrngStream::new(seed).derive("targets"));
    Ok(nodes)
}

fn attack_seed(seed: u64, target: Option<usize>) -> u64 {
    PrngStream::new(seed).derive_indexed("attack", target.map_or(u64::MAX, |t| t as u64)).seed()
}

fn select_attacks(cfg: &ExperimentConfig, g: &Graph, m: &GcnModel) -> Result<(Vec<AttackResult>, Option<String>)> {
    if cfg.profile == AttackProfile::Meta {
        let r = run_attack(g, m, cfg.profile, None, attack_seed(cfg.seed, None))?;
        let warning = (!r.success).then(|| "global attack did not raise the misclassification rate".to_string());
        return Ok((vec![r], warning));
    }
    let pool = attackable_nodes(g, m, cfg.seed)?;
    let attack = |t: usize| run_attack(g, m, cfg.profile, Some(t), attack_seed(cfg.seed, Some(t)));
    let mut out = Vec::new();
    let mut warning = None;
    match &cfg.targets {
        TargetSpec::Nodes(nodes) => {
            for &t in nodes {
                out.push(attack(t)?);
            }
        }
        TargetSpec::Count(count) => {
            let limit = cfg.max_attempts.saturating_mul(*count);
            for &t in pool.iter().take(limit) {
                if out.len() == *count {
                    break;
                }
                let r = attack(t)?;
                if r.success && !r.added_edges.is_empty() {
                    out.push(r);
                }
            }
            if out.len() < *count {
                warning = Some(format!("only {} of {} targets were attacked successfully", out.len(), count));
            }
        }
        TargetSpec::Degrees(degrees) => {
            let mut used = BTreeSet::new();
            let mut missing = Vec::new();
            for &d in degrees {
                let found = pool
                    .iter()
                    .filter(|&&t| g.degree(t) == d && !used.contains(&t))
                    .take(cfg.max_attempts)
                    .map(|&t| attack(t).map(|r| (t, r)))
                    .find(|res| res.as_ref().map_or(true, |(_, r)| r.success && !r.added_edges.is_empty()))
                    .transpose()?;
                match found {
                    Some((t, r)) => {
                        used.insert(t);
                        out.push(r);
                    }
                    None => missing.push(d),
                }
            }
            if !missing.is_empty() {
                warning = Some(format!("no successfully attacked target of degree {missing:?}"));
            }
        }
    }
    Ok((out, warning))
}

/// AUC of each detector on `g` with `malicious` as the positive edges.
pub fn score_attack(g: &Graph, malicious: &[NodePair], methods: &[Method], seed: u64) -> Result<BTreeMap<String, f64>> {
    let truth: BTreeSet<NodePair> = malicious.iter().copied().collect();
    detect_many(g, methods, seed)?
        .into_iter()
        .map(|(m, s)| Ok((m.name().to_string(), roc_auc(&s, &truth)?)))
        .collect()
}

const KNOWN_ATTACK_CANDIDATES: [Method; 3] = [Method::LpGgd, Method::Od, Method::Edog];

fn known_attack_view(mean_auc: &BTreeMap<String, f64>) -> Option<KnownAttackView> {
    let present: Vec<(&str, f64)> = KNOWN_ATTACK_CANDIDATES
        .iter()
        .filter_map(|m| mean_auc.get(m.name()).map(|&a| (m.name(), a)))
        .collect();
    let &(best, auc) = present.iter().max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(a.0)))?;
    Some(KnownAttackView {
        candidates: present.iter().map(|(n, _)| n.to_string()).collect(),
        best: best.to_string(),
        mean_auc: auc,
    })
}

/// Standard versus ensemble-restricted attack on the same targets.
pub fn adaptive_comparison(g: &Graph, m: &GcnModel, profile: AttackProfile, targets: &[usize], seed: u64) -> Result<AdaptiveSummary> {
    if profile == AttackProfile::Meta {
        return Err(CliError::Usage("the adaptive comparison needs a target attack profile".into()));
    }
    let defender = EdogDetector::fit(g, derive_seed(seed, "adaptive-defender"))?;
    let mut scorer = |graph: &Graph, pairs: &[NodePair]| defender.score_pairs(graph, pairs).map(|s| pairs.iter().map(|&p| s.get(p).unwrap_or(0.5)).collect());
    let mut rows = Vec::with_capacity(targets.len());
    for &t in targets {
        let s = attack_seed(seed, Some(t));
        let standard = run_attack(g, m, profile, Some(t), s)?;
        let adaptive = adaptive_attack(g, m, t, profile, &mut scorer, s)?;
        rows.push(AdaptiveRow {
            target: t,
            standard_success: standard.success,
            standard_edges: standard.added_edges,
            adaptive_success: adaptive.success,
            adaptive_edges: adaptive.added_edges,
        });
    }
    Ok(AdaptiveSummary {
        standard_successes: rows.iter().filter(|r| r.standard_success).count(),
        adaptive_successes: rows.iter().filter(|r| r.adaptive_success).count(),
        rows,
    })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    if cfg.detectors.is_empty() {
        return Err(CliError::Usage("the experiment lists no detectors".into()));
    }
    let g = prepare_graph(cfg)?;
    let model = train_node_classifier(&g, derive_seed(cfg.seed, "classifier"))?;
    let (attacks, warning) = select_attacks(cfg, &g, &model)?;
    let mut records = Vec::with_capacity(attacks.len());
    for (i, r) in attacks.iter().enumerate() {
        let auc = if r.success && !r.added_edges.is_empty() {
            let attacked = g.with_added_edges(&r.added_edges)?;
            let seed = PrngStream::new(cfg.seed).derive_indexed("detect", i as u64).seed();
            score_attack(&attacked, &r.added_edges, &cfg.detectors, seed)?
        } else {
            BTreeMap::new()
        };
        records.push(TargetRecord {
            target: r.target,
            degree: r.target.map(|t| g.degree(t)),
            added_edges: r.added_edges.clone(),
            success: r.success,
            pre_label: r.pre_label,
            post_label: r.post_label,
            pre_rate: r.pre_rate,
            post_rate: r.post_rate,
            auc,
        });
    }
    let mut mean_auc = BTreeMap::new();
    let scored: Vec<&TargetRecord> = records.iter().filter(|r| !r.auc.is_empty()).collect();
    if !scored.is_empty() {
        for m in &cfg.detectors {
            let sum: f64 = scored.iter().map(|r| r.auc[m.name()]).sum();
            mean_auc.insert(m.name().to_string(), sum / scored.len() as f64);
        }
    }
    let warning = match (warning, scored.is_empty()) {
        (None, true) => Some("no successful attack to evaluate".to_string()),
        (w, _) => w,
    };
    let adaptive = if cfg.adaptive {
        let targets: Vec<usize> = match &cfg.targets {
            TargetSpec::Nodes(nodes) => nodes.clone(),
            TargetSpec::Count(c) => attackable_nodes(&g, &model, cfg.seed)?.into_iter().take(*c).collect(),
            TargetSpec::Degrees(_) => records.iter().filter_map(|r| r.target).collect(),
        };
        Some(adaptive_comparison(&g, &model, cfg.profile, &targets, cfg.seed)?)
    } else {
        None
    };
    Ok(ExperimentReport {
        dataset: cfg.dataset.describe(),
        num_nodes: g.num_nodes(),
        num_edges: g.num_edges(),
        profile: cfg.profile,
        seed: cfg.seed,
        detectors: cfg.detectors.clone(),
        classifier_accuracy: accuracy(&model, &g)?,
        known_attack_view: known_attack_view(&mean_auc),
        mean_auc,
        records,
        adaptive,
        warning,
    })
}

/// Share of the `k` top-ranked edges that are not in `random`, in
/// expectation over random tie-breaking at the cut.
pub fn non_random_ratio(scores: &EdgeScores, random: &BTreeSet<NodePair>, k: usize) -> Result<f64> {
    if k == 0 || k > scores.len() {
        return Err(CliError::Usage(format!("top-{k} cut outside 1..={}", scores.len())));
    }
    let mut ranked: Vec<(NodePair, f64)> = scores.iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut kept = 0.0;
    let mut taken = 0usize;
    let mut i = 0;
    while taken < k {
        let mut j = i;
        while j < ranked.len() && ranked[j].1 == ranked[i].1 {
            j += 1;
        }
        let group = &ranked[i..j];
        let benign = group.iter().filter(|(p, _)| !random.contains(p)).count() as f64;
        let take = (k - taken).min(group.len());
        kept += benign * take as f64 / group.len() as f64;
        taken += take;
        i = j;
    }
    Ok(kept / k as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomEdgeRow {
    pub count: usize,
    pub added: Vec<NodePair>,
    pub ratio: BTreeMap<String, f64>,
}

/// For each count `k`, adds `k` random non-edges and reports, per detector,
/// the share of its `k` most suspicious edges that are not the random ones.
pub fn random_edge_experiment(g: &Graph, counts: &[usize], methods: &[Method], seed: u64) -> Result<Vec<RandomEdgeRow>> {
    let root = PrngStream::new(seed);
    let mut rows = Vec::with_capacity(counts.len());
    for (i, &k) in counts.iter().enumerate() {
        if k == 0 {
            return Err(CliError::Usage("random-edge counts must be at least 1".into()));
        }
        let added = sample_non_edges(g, k, &mut root.derive_indexed("random-edges", i as u64))?;
        let noisy = g.with_added_edges(&added)?;
        let truth: BTreeSet<NodePair> = added.iter().copied().collect();
        let detect_seed = root.derive_indexed("random-detect", i as u64).seed();
        let mut ratio = BTreeMap::new();
        for (m, s) in detect_many(&noisy, methods, detect_seed)? {
            ratio.insert(m.name().to_string(), non_random_ratio(&s, &truth, k)?);
        }
        let mut added = added;
        added.sort_unstable();
        rows.push(RandomEdgeRow { count: k, added, ratio });
    }
    Ok(rows)
}
