//! Seeded synthetic graphs and the structure-correlated feature/label
//! annotation used for the controlled experiments.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Graph, NodePair};
use crate::error::{domain, Result};
use crate::numkit::{stable_sigmoid, Matrix, PrngStream};

/// G(n, p): every unordered pair is an edge independently with probability `p`.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(domain!("edge probability {} outside [0, 1]", p));
    }
    if n == 0 {
        return Err(domain!("graph needs at least one node"));
    }
    let mut rng = PrngStream::new(seed);
    let mut g = Graph::empty(n);
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.random::<f64>() < p {
                g.add_edge(NodePair { u: a, v: b })?;
            }
        }
    }
    Ok(g)
}

/// Barabási–Albert preferential attachment.
///
/// Starts from a clique on `m + 1` nodes; each later node attaches to `m`
/// distinct earlier nodes chosen with probability proportional to degree.
pub fn gen_barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m == 0 || m >= n {
        return Err(domain!("attachment count m = {} must satisfy 1 <= m < n = {}", m, n));
    }
    let mut rng = PrngStream::new(seed);
    let mut g = Graph::empty(n);
    // every edge endpoint appears once, so uniform draws are degree-weighted
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * m * n);
    for a in 0..=m {
        for b in (a + 1)..=m {
            g.add_edge(NodePair { u: a, v: b })?;
            endpoints.push(a);
            endpoints.push(b);
        }
    }
    let mut picked: Vec<usize> = Vec::with_capacity(m);
    for new in (m + 1)..n {
        picked.clear();
        while picked.len() < m {
            let w = endpoints[rng.random_range(0..endpoints.len())];
            if !picked.contains(&w) {
                picked.push(w);
            }
        }
        for &w in &picked {
            g.add_edge(NodePair { u: w, v: new })?;
            endpoints.push(w);
            endpoints.push(new);
        }
    }
    Ok(g)
}

/// Attaches structure-correlated binary features and balanced labels.
///
/// Hidden vectors start standard normal and are smoothed `rounds` times by
/// summing neighbors and renormalizing; nodes with no neighbors (or a zero
/// sum) keep their previous vector. Feature bit `i` is Bernoulli of the
/// sigmoid of hidden entry `i`; the label is 1 when the hidden entries sum
/// to a positive value.
pub fn synth_annotate(g: &Graph, dim: usize, rounds: usize, seed: u64) -> Result<Graph> {
    if g.feature_dim() != 0 {
        return Err(domain!("graph already carries {}-dimensional features", g.feature_dim()));
    }
    if dim == 0 {
        return Err(domain!("feature dimension must be positive"));
    }
    let n = g.num_nodes();
    let mut rng = PrngStream::new(seed);
    let mut hidden: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect())
        .collect();
    for _ in 0..rounds {
        let mut next = hidden.clone();
        for (u, slot) in next.iter_mut().enumerate() {
            let mut sum = vec![0.0; dim];
            for &v in g.neighbors(u) {
                for (s, x) in sum.iter_mut().zip(&hidden[v]) {
                    *s += x;
                }
            }
            let norm = libm::sqrt(sum.iter().map(|x| x * x).sum::<f64>());
            if norm > 0.0 && norm.is_finite() {
                sum.iter_mut().for_each(|x| *x /= norm);
                *slot = sum;
            }
        }
        hidden = next;
    }
    let features = Matrix::from_fn(n, dim, |u, i| {
        if rng.random::<f64>() < stable_sigmoid(hidden[u][i]) {
            1.0
        } else {
            0.0
        }
    });
    let labels = hidden
        .iter()
        .map(|e| Some(usize::from(e.iter().sum::<f64>() > 0.0)))
        .collect();
    g.clone().with_features(features)?.with_labels(labels)
}

/// Marks a seeded random `fraction` of labeled nodes as the training set.
pub fn assign_train_split(g: &Graph, fraction: f64, seed: u64) -> Result<Graph> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(domain!("train fraction {} outside (0, 1]", fraction));
    }
    let mut labeled: Vec<usize> = (0..g.num_nodes()).filter(|&u| g.label(u).is_some()).collect();
    if labeled.is_empty() {
        return Err(domain!("graph has no labeled nodes"));
    }
    let mut rng = PrngStream::new(seed);
    labeled.shuffle(&mut rng);
    let k = ((labeled.len() as f64 * fraction).round() as usize).clamp(1, labeled.len());
    labeled.truncate(k);
    g.clone().with_train_mask(Some(labeled))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_extremes() {
        assert_eq!(gen_erdos_renyi(5, 0.0, 3).unwrap().num_edges(), 0);
        assert_eq!(gen_erdos_renyi(5, 1.0, 3).unwrap().num_edges(), 10);
        assert!(gen_erdos_renyi(5, 1.5, 3).is_err());
        assert!(gen_erdos_renyi(5, -0.1, 3).is_err());
    }

    #[test]
    fn ba_small_and_errors() {
        assert_eq!(gen_barabasi_albert(3, 1, 0).unwrap().num_edges(), 2);
        assert!(gen_barabasi_albert(3, 3, 0).is_err());
        assert!(gen_barabasi_albert(3, 0, 0).is_err());
        let g = gen_barabasi_albert(50, 3, 5).unwrap();
        // clique of 4 (6 edges) + 46 nodes × 3 edges
        assert_eq!(g.num_edges(), 6 + 46 * 3);
    }

    #[test]
    fn generators_are_reproducible() {
        assert_eq!(gen_erdos_renyi(60, 0.1, 11).unwrap(), gen_erdos_renyi(60, 0.1, 11).unwrap());
        assert_eq!(gen_barabasi_albert(60, 2, 11).unwrap(), gen_barabasi_albert(60, 2, 11).unwrap());
        let g = gen_barabasi_albert(40, 1, 2).unwrap();
        assert_eq!(synth_annotate(&g, 20, 3, 4).unwrap(), synth_annotate(&g, 20, 3, 4).unwrap());
    }

    #[test]
    fn annotation_shapes() {
        let g = gen_barabasi_albert(30, 1, 8).unwrap();
        let a = synth_annotate(&g, 20, 3, 1).unwrap();
        assert_eq!(a.feature_dim(), 20);
        assert!(a.features().as_slice().iter().all(|&x| x == 0.0 || x == 1.0));
        assert!(a.labels().iter().all(|l| matches!(l, Some(0) | Some(1))));
        assert!(synth_annotate(&a, 20, 3, 1).is_err());
    }

    #[test]
    fn isolated_nodes_keep_hidden_vector() {
        // label depends only on the initial draw for isolated nodes, so it is
        // the same whatever the number of smoothing rounds
        let g = Graph::new(4, [(0, 1)]).unwrap();
        let a0 = synth_annotate(&g, 20, 0, 77).unwrap();
        let a3 = synth_annotate(&g, 20, 3, 77).unwrap();
        assert_eq!(a0.label(2), a3.label(2));
        assert_eq!(a0.label(3), a3.label(3));
    }

    #[test]
    fn symmetric_pair_gets_identical_labels() {
        // two connected nodes: after one round each takes the other's
        // normalized vector, after two rounds each has its own; with an odd
        // number of rounds the labels are swapped versions of each other,
        // so the pair agrees whenever the initial vectors agree in sign sum
        let g = Graph::new(2, [(0, 1)]).unwrap();
        for seed in 0..20 {
            let a = synth_annotate(&g, 20, 2, seed).unwrap();
            let b = synth_annotate(&g, 20, 4, seed).unwrap();
            assert_eq!(a.labels(), b.labels());
        }
    }

    #[test]
    fn train_split_fraction() {
        let g = synth_annotate(&gen_barabasi_albert(100, 1, 1).unwrap(), 20, 3, 1).unwrap();
        let s = assign_train_split(&g, 0.3, 5).unwrap();
        assert_eq!(s.train_mask().unwrap().len(), 30);
        assert!(assign_train_split(&g, 0.0, 5).is_err());
    }
}
