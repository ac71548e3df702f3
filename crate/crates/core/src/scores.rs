use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::graph::NodePair;

/// Maliciousness score per node pair; higher means more suspicious.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeScores {
    detector: String,
    scores: BTreeMap<NodePair, f64>,
}

impl EdgeScores {
    pub fn new(detector: impl Into<String>) -> Self {
        Self {
            detector: detector.into(),
            scores: BTreeMap::new(),
        }
    }

    pub fn from_pairs(detector: impl Into<String>, pairs: impl IntoIterator<Item = (NodePair, f64)>) -> Self {
        Self {
            detector: detector.into(),
            scores: pairs.into_iter().collect(),
        }
    }

    /// Name of the producing detector.
    pub fn detector(&self) -> &str {
        &self.detector
    }

    pub fn set_detector(&mut self, name: impl Into<String>) {
        self.detector = name.into();
    }

    pub fn insert(&mut self, pair: NodePair, score: f64) {
        debug_assert!(score.is_finite(), "score for {:?} is {}", pair, score);
        self.scores.insert(pair, score);
    }

    pub fn get(&self, pair: NodePair) -> Option<f64> {
        self.scores.get(&pair).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Entries in canonical pair order.
    pub fn iter(&self) -> impl Iterator<Item = (NodePair, f64)> + '_ {
        self.scores.iter().map(|(&p, &s)| (p, s))
    }

    pub fn pairs(&self) -> impl Iterator<Item = NodePair> + '_ {
        self.scores.keys().copied()
    }

    pub fn values(&self) -> Vec<f64> {
        self.scores.values().copied().collect()
    }

    /// Pairs sorted by decreasing score, ties in canonical order.
    pub fn ranked(&self) -> Vec<(NodePair, f64)> {
        let mut v: Vec<(NodePair, f64)> = self.iter().collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        v
    }
}
