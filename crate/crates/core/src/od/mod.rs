//! Edge outlier detection from neighborhood class distributions and
//! betweenness, scored by a one-class SVM.

mod ocsvm;

pub use ocsvm::{fit_ocsvm, OcsvmModel, KKT_TOLERANCE, MAX_ITERATIONS};

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::gcn::{predict_labels, train_node_classifier};
use crate::graph::{Graph, NodePair};
use crate::metrics::betweenness;
use crate::numkit::derive_seed;
use crate::scores::EdgeScores;

/// Shift inside the logarithm of betweenness.
pub const BETWEENNESS_SHIFT: f64 = 1e-6;

/// Class-distribution statistics of one endpoint's neighborhood.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeClassStats {
    pub distinct_classes: usize,
    pub avg_class_count: f64,
    pub max_class_count: usize,
    pub second_class_count: usize,
    pub class_count_std: f64,
    pub log_betweenness: f64,
}

impl NodeClassStats {
    /// Statistics of a multiset of neighbor classes.
    pub fn from_classes(classes: impl IntoIterator<Item = usize>, betweenness: f64) -> Self {
        let mut tally: BTreeMap<usize, usize> = BTreeMap::new();
        for c in classes {
            *tally.entry(c).or_insert(0) += 1;
        }
        let log_betweenness = libm::log(betweenness + BETWEENNESS_SHIFT);
        if tally.is_empty() {
            return Self {
                distinct_classes: 0,
                avg_class_count: 0.0,
                max_class_count: 0,
                second_class_count: 0,
                class_count_std: 0.0,
                log_betweenness,
            };
        }
        let mut counts: Vec<usize> = tally.into_values().collect();
        counts.sort_unstable_by(|a, b| b.cmp(a));
        let k = counts.len() as f64;
        let total: usize = counts.iter().sum();
        let avg = total as f64 / k;
        let var = counts.iter().map(|&c| (c as f64 - avg) * (c as f64 - avg)).sum::<f64>() / k;
        Self {
            distinct_classes: counts.len(),
            avg_class_count: avg,
            max_class_count: counts[0],
            second_class_count: counts.get(1).copied().unwrap_or(0),
            class_count_std: libm::sqrt(var),
            log_betweenness,
        }
    }

    fn push_into(&self, out: &mut Vec<f64>, with_betweenness: bool) {
        out.extend_from_slice(&[
            self.distinct_classes as f64,
            self.avg_class_count,
            self.max_class_count as f64,
            self.second_class_count as f64,
            self.class_count_std,
        ]);
        if with_betweenness {
            out.push(self.log_betweenness);
        }
    }
}

/// Features of both endpoints, `u` first in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdFeatures {
    pub u: NodeClassStats,
    pub v: NodeClassStats,
}

impl OdFeatures {
    /// 12 entries, or 10 without the betweenness terms.
    pub fn to_vec(&self, with_betweenness: bool) -> Vec<f64> {
        let mut out = Vec::with_capacity(12);
        self.u.push_into(&mut out, with_betweenness);
        self.v.push_into(&mut out, with_betweenness);
        out
    }
}

fn check_inputs(g: &Graph, labels: &[usize], btw: &[f64], pair: NodePair) -> Result<()> {
    if labels.len() != g.num_nodes() || btw.len() != g.num_nodes() {
        return Err(domain!(
            "need one label and one betweenness per node ({}), got {} and {}",
            g.num_nodes(),
            labels.len(),
            btw.len()
        ));
    }
    if pair.v() >= g.num_nodes() {
        return Err(domain!("pair ({}, {}) out of range", pair.u(), pair.v()));
    }
    Ok(())
}

/// Features of `pair` from the predicted classes of each endpoint's full
/// neighborhood in `g`.
pub fn od_edge_features(g: &Graph, labels: &[usize], btw: &[f64], pair: NodePair) -> Result<OdFeatures> {
    check_inputs(g, labels, btw, pair)?;
    let stats = |x: usize| NodeClassStats::from_classes(g.neighbors(x).iter().map(|&w| labels[w]), btw[x]);
    Ok(OdFeatures {
        u: stats(pair.u()),
        v: stats(pair.v()),
    })
}

/// Features of `pair` as if it were added to `g` (each endpoint also sees
/// the other); betweenness is taken as given.
pub fn od_pair_features_with_edge(g: &Graph, labels: &[usize], btw: &[f64], pair: NodePair) -> Result<OdFeatures> {
    if g.contains_pair(pair) {
        return od_edge_features(g, labels, btw, pair);
    }
    check_inputs(g, labels, btw, pair)?;
    let stats = |x: usize, other: usize| {
        let classes = g.neighbors(x).iter().map(|&w| labels[w]).chain(core::iter::once(labels[other]));
        NodeClassStats::from_classes(classes, btw[x])
    };
    Ok(OdFeatures {
        u: stats(pair.u(), pair.v()),
        v: stats(pair.v(), pair.u()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdConfig {
    pub nu: f64,
    pub with_betweenness: bool,
}

impl Default for OdConfig {
    fn default() -> Self {
        Self {
            nu: 0.5,
            with_betweenness: true,
        }
    }
}

/// Fitted outlier detector; scores existing edges and hypothetical ones.
#[derive(Clone, Debug, PartialEq)]
pub struct OdDetector {
    pub labels: Vec<usize>,
    pub betweenness: Vec<f64>,
    pub svm: OcsvmModel,
    pub config: OdConfig,
}

impl OdDetector {
    /// Trains the node classifier, featurizes every edge and fits the SVM.
    pub fn fit(g: &Graph, seed: u64, config: OdConfig) -> Result<Self> {
        if g.num_edges() < 2 {
            return Err(domain!("outlier detection needs at least two edges, got {}", g.num_edges()));
        }
        let model = train_node_classifier(g, derive_seed(seed, "od-gcn"))?;
        let labels = predict_labels(&model, g)?;
        Self::fit_with_labels(g, labels, seed, config)
    }

    pub fn fit_with_labels(g: &Graph, labels: Vec<usize>, seed: u64, config: OdConfig) -> Result<Self> {
        let btw = betweenness(g);
        let features = g
            .edges()
            .map(|e| Ok(od_edge_features(g, &labels, &btw, e)?.to_vec(config.with_betweenness)))
            .collect::<Result<Vec<_>>>()?;
        let svm = fit_ocsvm(&features, config.nu, derive_seed(seed, "ocsvm"))?;
        Ok(Self {
            labels,
            betweenness: btw,
            svm,
            config,
        })
    }

    /// Maliciousness `−decision` of each existing edge of `g`.
    pub fn score_edges(&self, g: &Graph) -> Result<EdgeScores> {
        let mut out = EdgeScores::new("od");
        for e in g.edges() {
            let f = od_edge_features(g, &self.labels, &self.betweenness, e)?;
            out.insert(e, -self.svm.decision(&f.to_vec(self.config.with_betweenness))?);
        }
        Ok(out)
    }

    /// Maliciousness of pairs featurized as if each were added to `g`.
    pub fn score_pairs(&self, g: &Graph, pairs: &[NodePair]) -> Result<EdgeScores> {
        let mut out = EdgeScores::new("od");
        for &p in pairs {
            let f = od_pair_features_with_edge(g, &self.labels, &self.betweenness, p)?;
            out.insert(p, -self.svm.decision(&f.to_vec(self.config.with_betweenness))?);
        }
        Ok(out)
    }
}

/// Outlier-based maliciousness of every edge.
pub fn od_detect(g: &Graph, seed: u64) -> Result<EdgeScores> {
    od_detect_with(g, seed, OdConfig::default())
}

pub fn od_detect_with(g: &Graph, seed: u64, config: OdConfig) -> Result<EdgeScores> {
    OdDetector::fit(g, seed, config)?.score_edges(g)
}
