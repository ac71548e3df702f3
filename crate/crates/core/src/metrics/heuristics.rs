//! Pairwise neighborhood heuristics.

use alloc::collections::VecDeque;
use alloc::vec;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::graph::{Graph, NodePair};
use crate::numkit::dot;
use crate::scores::EdgeScores;

/// Hop distance reported for pairs farther apart than this (or disconnected).
pub const DISTANCE_CAP: u32 = 10;

/// Number of pairwise link features.
pub const ALD_DIM: usize = 5;

/// The five link features of a node pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairFeatures {
    pub neighbor_similarity: f64,
    pub common_neighbors: usize,
    pub distance: u32,
    pub preferential_attachment: usize,
    pub feature_similarity: f64,
}

impl PairFeatures {
    /// Fixed order: Jaccard, common neighbors, distance, degree product, cosine.
    pub fn to_array(&self) -> [f64; ALD_DIM] {
        [
            self.neighbor_similarity,
            self.common_neighbors as f64,
            f64::from(self.distance),
            self.preferential_attachment as f64,
            self.feature_similarity,
        ]
    }
}

fn check_pair(g: &Graph, pair: NodePair) -> Result<()> {
    if pair.v() >= g.num_nodes() {
        return Err(domain!("pair ({}, {}) out of range", pair.u(), pair.v()));
    }
    Ok(())
}

/// Size of the intersection of two sorted lists, optionally ignoring one id.
fn sorted_intersection(a: &[usize], b: &[usize], skip: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                if !skip.contains(&a[i]) {
                    count += 1;
                }
                i += 1;
                j += 1;
            }
        }
    }
    count
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let na = libm::sqrt(dot(a, a));
    let nb = libm::sqrt(dot(b, b));
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot(a, b) / (na * nb)
    }
}

/// BFS hop count from `pair.u()` to `pair.v()` never traversing the edge
/// between them; capped at [`DISTANCE_CAP`].
fn distance_without_edge(g: &Graph, pair: NodePair) -> u32 {
    let (s, t) = (pair.u(), pair.v());
    let mut dist = vec![u32::MAX; g.num_nodes()];
    let mut queue = VecDeque::new();
    dist[s] = 0;
    queue.push_back(s);
    while let Some(x) = queue.pop_front() {
        let dx = dist[x];
        if dx + 1 >= DISTANCE_CAP {
            break;
        }
        for &y in g.neighbors(x) {
            if x == s && y == t {
                continue;
            }
            if dist[y] == u32::MAX {
                if y == t {
                    return dx + 1;
                }
                dist[y] = dx + 1;
                queue.push_back(y);
            }
        }
    }
    DISTANCE_CAP
}

/// Link features of `pair`, computed as if the edge between the endpoints
/// were absent so that existing and missing pairs are featurized alike.
pub fn ald_features(g: &Graph, pair: NodePair) -> Result<PairFeatures> {
    check_pair(g, pair)?;
    let (u, v) = (pair.u(), pair.v());
    let linked = g.contains_pair(pair);
    let deg_u = g.degree(u) - usize::from(linked);
    let deg_v = g.degree(v) - usize::from(linked);
    let common = sorted_intersection(g.neighbors(u), g.neighbors(v), &[u, v]);
    let union = deg_u + deg_v - common;
    let neighbor_similarity = if union == 0 {
        0.0
    } else {
        common as f64 / union as f64
    };
    Ok(PairFeatures {
        neighbor_similarity,
        common_neighbors: common,
        distance: distance_without_edge(g, pair),
        preferential_attachment: deg_u * deg_v,
        feature_similarity: cosine(g.feature(u), g.feature(v)),
    })
}

/// `|N(u) ∩ N(v)|`.
pub fn common_neighbors(g: &Graph, pair: NodePair) -> Result<usize> {
    check_pair(g, pair)?;
    Ok(sorted_intersection(g.neighbors(pair.u()), g.neighbors(pair.v()), &[]))
}

/// Adamic–Adar: `Σ 1/ln deg(w)` over common neighbors with degree > 1.
pub fn adamic_adar(g: &Graph, pair: NodePair) -> Result<f64> {
    check_pair(g, pair)?;
    let (a, b) = (g.neighbors(pair.u()), g.neighbors(pair.v()));
    let (mut i, mut j, mut total) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                let d = g.degree(a[i]);
                if d > 1 {
                    total += 1.0 / libm::log(d as f64);
                }
                i += 1;
                j += 1;
            }
        }
    }
    Ok(total)
}

/// Which pairwise similarity drives [`heuristic_scores`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Heuristic {
    CommonNeighbors,
    AdamicAdar,
}

/// Scores every existing edge by `1 / (1 + similarity)`: low similarity is
/// suspicious.
pub fn heuristic_scores(g: &Graph, which: Heuristic) -> Result<EdgeScores> {
    let name = match which {
        Heuristic::CommonNeighbors => "cn",
        Heuristic::AdamicAdar => "aa",
    };
    let mut out = EdgeScores::new(name);
    for e in g.edges() {
        let sim = match which {
            Heuristic::CommonNeighbors => common_neighbors(g, e)? as f64,
            Heuristic::AdamicAdar => adamic_adar(g, e)?,
        };
        out.insert(e, 1.0 / (1.0 + sim));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::Matrix;

    fn p(a: usize, b: usize) -> NodePair {
        NodePair::new(a, b).unwrap()
    }

    #[test]
    fn triangle_features_ignore_queried_edge() {
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)])
            .unwrap()
            .with_features(Matrix::from_rows(&[[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap())
            .unwrap();
        let f = ald_features(&g, p(0, 1)).unwrap();
        assert_eq!(f.neighbor_similarity, 1.0);
        assert_eq!(f.common_neighbors, 1);
        assert_eq!(f.distance, 2);
        assert_eq!(f.preferential_attachment, 1);
        assert!((f.feature_similarity - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn isolated_pair_features() {
        let g = Graph::new(2, core::iter::empty())
            .unwrap()
            .with_features(Matrix::from_rows(&[[0.3, 0.4], [0.3, 0.4]]).unwrap())
            .unwrap();
        let f = ald_features(&g, p(0, 1)).unwrap();
        assert_eq!(f.neighbor_similarity, 0.0);
        assert_eq!(f.common_neighbors, 0);
        assert_eq!(f.distance, DISTANCE_CAP);
        assert_eq!(f.preferential_attachment, 0);
        assert!((f.feature_similarity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn long_path_hits_cap() {
        let g = Graph::new(15, (0..14).map(|i| (i, i + 1))).unwrap();
        assert_eq!(ald_features(&g, p(0, 9)).unwrap().distance, 9);
        assert_eq!(ald_features(&g, p(0, 10)).unwrap().distance, DISTANCE_CAP);
        assert_eq!(ald_features(&g, p(0, 14)).unwrap().distance, DISTANCE_CAP);
        // a bridge edge has no alternative route
        assert_eq!(ald_features(&g, p(3, 4)).unwrap().distance, DISTANCE_CAP);
    }

    #[test]
    fn cn_and_aa() {
        let tri = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(common_neighbors(&tri, p(0, 1)).unwrap(), 1);
        assert!((adamic_adar(&tri, p(0, 1)).unwrap() - 1.0 / 2f64.ln()).abs() < 1e-12);
        assert!((adamic_adar(&tri, p(0, 1)).unwrap() - 1.4427).abs() < 1e-4);

        let stars = Graph::new(6, [(0, 1), (0, 2), (3, 4), (3, 5)]).unwrap();
        assert_eq!(common_neighbors(&stars, p(0, 3)).unwrap(), 0);
        assert_eq!(adamic_adar(&stars, p(0, 3)).unwrap(), 0.0);

        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(common_neighbors(&c4, p(0, 2)).unwrap(), 2);
        assert!(common_neighbors(&c4, p(0, 4)).is_err());
    }
}
