use alloc::vec::Vec;

use crate::graph::{Graph, NodePair};
use crate::numkit::Matrix;

/// Two disjoint `k`-cliques labeled by clique, even nodes in training.
pub(crate) fn two_cliques(k: usize) -> Graph {
    let n = 2 * k;
    let mut edges = Vec::new();
    for c in 0..2 {
        for a in 0..k {
            for b in (a + 1)..k {
                edges.push((c * k + a, c * k + b));
            }
        }
    }
    let feats = Matrix::from_fn(n, 4, |u, j| ((u * 7 + j * 3) % 5) as f64 / 4.0);
    let labels = (0..n).map(|u| Some(u / k)).collect();
    let train = (0..n).filter(|u| u % 2 == 0).collect();
    Graph::new(n, edges)
        .unwrap()
        .with_features(feats)
        .unwrap()
        .with_labels(labels)
        .unwrap()
        .with_train_mask(Some(train))
        .unwrap()
}

pub(crate) fn with_injected(g: &Graph, extra: &[(usize, usize)]) -> (Graph, Vec<NodePair>) {
    let pairs: Vec<NodePair> = extra.iter().map(|&(a, b)| NodePair::new(a, b).unwrap()).collect();
    (g.with_added_edges(&pairs).unwrap(), pairs)
}
