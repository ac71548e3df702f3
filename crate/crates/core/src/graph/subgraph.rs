use alloc::vec::Vec;

use super::{Graph, NodePair};
use crate::error::{domain, Result};
use crate::numkit::Matrix;

/// Induced subgraph together with its local → parent id map.
#[derive(Clone, Debug, PartialEq)]
pub struct Subgraph {
    parent_ids: Vec<usize>,
    graph: Graph,
}

impl Subgraph {
    /// Induced subgraph on `nodes` (need not be sorted or unique).
    pub fn induced(parent: &Graph, nodes: &[usize]) -> Result<Self> {
        let mut ids = nodes.to_vec();
        ids.sort_unstable();
        ids.dedup();
        if let Some(&bad) = ids.iter().find(|&&u| u >= parent.num_nodes()) {
            return Err(domain!("node {} out of range (n = {})", bad, parent.num_nodes()));
        }
        let mut graph = Graph::empty(ids.len());
        for (local, &u) in ids.iter().enumerate() {
            for &w in parent.neighbors(u) {
                if w <= u {
                    continue;
                }
                if let Ok(other) = ids.binary_search(&w) {
                    graph.add_edge(NodePair::new(local, other)?)?;
                }
            }
        }
        let d = parent.feature_dim();
        let mut feats = Matrix::zeros(ids.len(), d);
        for (local, &u) in ids.iter().enumerate() {
            feats.row_mut(local).copy_from_slice(parent.feature(u));
        }
        let graph = graph.with_features(feats)?;
        Ok(Self {
            parent_ids: ids,
            graph,
        })
    }

    /// Sorted parent ids; position = local id.
    pub fn parent_ids(&self) -> &[usize] {
        &self.parent_ids
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn num_nodes(&self) -> usize {
        self.parent_ids.len()
    }

    pub fn local_id(&self, parent: usize) -> Option<usize> {
        self.parent_ids.binary_search(&parent).ok()
    }

    pub fn contains(&self, parent: usize) -> bool {
        self.local_id(parent).is_some()
    }

    /// Local pair for a parent pair whose endpoints both lie in the subgraph.
    pub fn local_pair(&self, pair: NodePair) -> Option<NodePair> {
        let a = self.local_id(pair.u())?;
        let b = self.local_id(pair.v())?;
        // local ids preserve parent order, so (a, b) is already canonical
        Some(NodePair { u: a, v: b })
    }

    pub fn parent_pair(&self, local: NodePair) -> NodePair {
        NodePair {
            u: self.parent_ids[local.u()],
            v: self.parent_ids[local.v()],
        }
    }
}

/// Nodes within two hops of `center` (center included), sorted.
pub fn two_hop_nodes(g: &Graph, center: usize) -> Vec<usize> {
    let mut nodes = Vec::with_capacity(1 + g.degree(center) * 2);
    nodes.push(center);
    for &a in g.neighbors(center) {
        nodes.push(a);
        nodes.extend_from_slice(g.neighbors(a));
    }
    nodes.sort_unstable();
    nodes.dedup();
    nodes
}

/// Induced subgraph on all nodes at distance ≤ 2 from `center`.
pub fn two_hop_subgraph(g: &Graph, center: usize) -> Result<Subgraph> {
    if center >= g.num_nodes() {
        return Err(domain!("center {} out of range (n = {})", center, g.num_nodes()));
    }
    Subgraph::induced(g, &two_hop_nodes(g, center))
}

/// One two-hop subgraph per node, in node-id order.
pub fn sample_subgraphs(g: &Graph) -> Vec<Subgraph> {
    (0..g.num_nodes())
        .map(|c| two_hop_subgraph(g, c).expect("center in range"))
        .collect()
}
