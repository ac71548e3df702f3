//! Undirected attributed graphs, two-hop subgraph sampling and the
//! synthetic generators.

mod generate;
mod subgraph;

pub use generate::{assign_train_split, gen_barabasi_albert, gen_erdos_renyi, synth_annotate};
pub use subgraph::{sample_subgraphs, two_hop_subgraph, Subgraph};

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, schema, Result};
use crate::numkit::{Matrix, PrngStream};

/// Unordered node pair stored as `(min, max)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "(usize, usize)", into = "(usize, usize)")]
pub struct NodePair {
    u: usize,
    v: usize,
}

impl NodePair {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(domain!("node pair ({}, {}) is a self-loop", a, b));
        }
        Ok(Self {
            u: a.min(b),
            v: a.max(b),
        })
    }

    #[inline]
    pub fn u(&self) -> usize {
        self.u
    }

    #[inline]
    pub fn v(&self) -> usize {
        self.v
    }

    #[inline]
    pub fn contains(&self, node: usize) -> bool {
        self.u == node || self.v == node
    }

    /// The endpoint that is not `node`.
    pub fn other(&self, node: usize) -> Option<usize> {
        if node == self.u {
            Some(self.v)
        } else if node == self.v {
            Some(self.u)
        } else {
            None
        }
    }
}

impl TryFrom<(usize, usize)> for NodePair {
    type Error = crate::Error;

    fn try_from((a, b): (usize, usize)) -> Result<Self> {
        NodePair::new(a, b)
    }
}

impl From<NodePair> for (usize, usize) {
    fn from(p: NodePair) -> Self {
        (p.u, p.v)
    }
}

/// Undirected graph with node features, optional labels and a training mask.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    num_nodes: usize,
    features: Matrix,
    labels: Vec<Option<usize>>,
    train_mask: Option<Vec<usize>>,
    edges: BTreeSet<NodePair>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Structure-only graph (feature dimension 0, no labels).
    ///
    /// Reversed duplicates collapse to one edge; self-loops and out-of-range
    /// ids are schema violations.
    pub fn new(num_nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(num_nodes);
        for (a, b) in edges {
            if a == b {
                return Err(schema!("self-loop on node {}", a));
            }
            g.add_edge(NodePair::new(a, b)?)?;
        }
        Ok(g)
    }

    pub fn empty(num_nodes: usize) -> Self {
        Self {
            num_nodes,
            features: Matrix::zeros(num_nodes, 0),
            labels: vec![None; num_nodes],
            train_mask: None,
            edges: BTreeSet::new(),
            adj: vec![Vec::new(); num_nodes],
        }
    }

    pub fn with_features(mut self, features: Matrix) -> Result<Self> {
        if features.rows() != self.num_nodes {
            return Err(schema!(
                "feature matrix has {} rows for {} nodes",
                features.rows(),
                self.num_nodes
            ));
        }
        self.features = features;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<Option<usize>>) -> Result<Self> {
        if labels.len() != self.num_nodes {
            return Err(schema!("{} labels for {} nodes", labels.len(), self.num_nodes));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn with_train_mask(mut self, mask: Option<Vec<usize>>) -> Result<Self> {
        if let Some(mut ids) = mask {
            ids.sort_unstable();
            ids.dedup();
            if let Some(&bad) = ids.iter().find(|&&id| id >= self.num_nodes) {
                return Err(schema!("train node {} out of range", bad));
            }
            self.train_mask = Some(ids);
        } else {
            self.train_mask = None;
        }
        Ok(self)
    }

    /// Adds an edge; returns `false` if it was already present.
    pub fn add_edge(&mut self, pair: NodePair) -> Result<bool> {
        if pair.v() >= self.num_nodes {
            return Err(schema!(
                "edge ({}, {}) references a node >= {}",
                pair.u(),
                pair.v(),
                self.num_nodes
            ));
        }
        if !self.edges.insert(pair) {
            return Ok(false);
        }
        for (a, b) in [(pair.u(), pair.v()), (pair.v(), pair.u())] {
            let list = &mut self.adj[a];
            if let Err(pos) = list.binary_search(&b) {
                list.insert(pos, b);
            }
        }
        Ok(true)
    }

    pub fn remove_edge(&mut self, pair: NodePair) -> bool {
        if !self.edges.remove(&pair) {
            return false;
        }
        for (a, b) in [(pair.u(), pair.v()), (pair.v(), pair.u())] {
            let list = &mut self.adj[a];
            if let Ok(pos) = list.binary_search(&b) {
                list.remove(pos);
            }
        }
        true
    }

    /// Copy of the graph with `extra` edges added.
    pub fn with_added_edges(&self, extra: &[NodePair]) -> Result<Graph> {
        let mut g = self.clone();
        for &p in extra {
            g.add_edge(p)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = NodePair> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_list(&self) -> Vec<NodePair> {
        self.edges.iter().copied().collect()
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.num_nodes && self.adj[a].binary_search(&b).is_ok()
    }

    #[inline]
    pub fn contains_pair(&self, pair: NodePair) -> bool {
        self.edges.contains(&pair)
    }

    /// Sorted neighbor list.
    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn adjacency_lists(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    #[inline]
    pub fn feature(&self, u: usize) -> &[f64] {
        self.features.row(u)
    }

    pub fn feature_dim(&self) -> usize {
        self.features.cols()
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, u: usize) -> Option<usize> {
        self.labels[u]
    }

    pub fn train_mask(&self) -> Option<&[usize]> {
        self.train_mask.as_deref()
    }

    /// Nodes whose labels the classifier may train on: the train mask when
    /// present, otherwise every labeled node.
    pub fn training_nodes(&self) -> Vec<usize> {
        match &self.train_mask {
            Some(mask) => mask
                .iter()
                .copied()
                .filter(|&u| self.labels[u].is_some())
                .collect(),
            None => (0..self.num_nodes)
                .filter(|&u| self.labels[u].is_some())
                .collect(),
        }
    }

    /// Number of classes implied by the labels (at least 2).
    pub fn num_classes(&self) -> usize {
        self.labels
            .iter()
            .flatten()
            .max()
            .map_or(2, |&m| (m + 1).max(2))
    }

    fn check_node(&self, u: usize) -> Result<()> {
        if u >= self.num_nodes {
            return Err(domain!("node {} out of range (n = {})", u, self.num_nodes));
        }
        Ok(())
    }

    /// Validates a pair of distinct in-range nodes.
    pub fn pair(&self, a: usize, b: usize) -> Result<NodePair> {
        self.check_node(a)?;
        self.check_node(b)?;
        NodePair::new(a, b)
    }

    /// Number of unordered node pairs that are not edges.
    pub fn num_non_edges(&self) -> usize {
        let n = self.num_nodes;
        n * n.saturating_sub(1) / 2 - self.edges.len()
    }
}

/// Samples `k` distinct non-edges uniformly at random.
pub fn sample_non_edges(g: &Graph, k: usize, rng: &mut PrngStream) -> Result<Vec<NodePair>> {
    sample_non_edges_excluding(g, k, &BTreeSet::new(), rng)
}

/// Like [`sample_non_edges`], also skipping the pairs in `exclude`.
pub fn sample_non_edges_excluding(
    g: &Graph,
    k: usize,
    exclude: &BTreeSet<NodePair>,
    rng: &mut PrngStream,
) -> Result<Vec<NodePair>> {
    let n = g.num_nodes();
    let available = g.num_non_edges().saturating_sub(exclude.len());
    if k > available {
        return Err(domain!(
            "cannot sample {} non-edges: only {} available",
            k,
            available
        ));
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    // Dense regime: enumerate and shuffle instead of rejection sampling.
    if 2 * k > available {
        let mut all: Vec<NodePair> = (0..n)
            .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
            .filter(|&(a, b)| !g.has_edge(a, b))
            .map(|(a, b)| NodePair { u: a, v: b })
            .filter(|p| !exclude.contains(p))
            .collect();
        for i in 0..k {
            let j = rng.random_range(i..all.len());
            all.swap(i, j);
        }
        all.truncate(k);
        return Ok(all);
    }
    let mut chosen = BTreeSet::new();
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b || g.has_edge(a, b) {
            continue;
        }
        let p = NodePair::new(a, b)?;
        if exclude.contains(&p) || !chosen.insert(p) {
            continue;
        }
        out.push(p);
    }
    Ok(out)
}
