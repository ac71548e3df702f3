use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::graph::Graph;
use crate::numkit::{softmax, solve, Matrix};
use crate::scores::EdgeScores;

pub const DEFAULT_KATZ_BETA: f64 = 0.05;
const POWER_ITERATIONS: usize = 50;

/// Largest adjacency eigenvalue estimated by power iteration on `A + I`
/// (the shift keeps bipartite graphs from oscillating).
pub fn spectral_radius_estimate(g: &Graph) -> f64 {
    let n = g.num_nodes();
    if n == 0 || g.num_edges() == 0 {
        return 0.0;
    }
    let mut x = vec![1.0 / libm::sqrt(n as f64); n];
    let adj_mul = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|u| g.neighbors(u).iter().map(|&v| x[v]).sum())
            .collect()
    };
    for _ in 0..POWER_ITERATIONS {
        let ax = adj_mul(&x);
        let mut y: Vec<f64> = ax.iter().zip(&x).map(|(a, b)| a + b).collect();
        let norm = libm::sqrt(y.iter().map(|v| v * v).sum::<f64>());
        y.iter_mut().for_each(|v| *v /= norm);
        x = y;
    }
    let ax = adj_mul(&x);
    ax.iter().zip(&x).map(|(a, b)| a * b).sum()
}

/// All-pairs Katz index `Σ_{l≥1} β^l · walks_l(u, v) = (I − βA)^{-1} − I`.
pub fn katz_matrix(g: &Graph, beta: f64) -> Result<Matrix> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(domain!("Katz damping {} must be positive", beta));
    }
    let radius = spectral_radius_estimate(g);
    if beta * radius >= 1.0 {
        return Err(domain!(
            "Katz series diverges: beta {} times estimated spectral radius {:.6} is >= 1",
            beta,
            radius
        ));
    }
    let n = g.num_nodes();
    let mut system = Matrix::identity(n);
    for e in g.edges() {
        system[(e.u(), e.v())] = -beta;
        system[(e.v(), e.u())] = -beta;
    }
    let mut k = solve(&system, &Matrix::identity(n))?;
    for i in 0..n {
        k[(i, i)] -= 1.0;
    }
    Ok(k)
}

/// Katz baseline: softmax over existing-edge Katz values, scored as
/// `1 − normalized` so weakly connected edges rank as suspicious.
pub fn katz_detector_scores(g: &Graph, beta: f64) -> Result<EdgeScores> {
    let k = katz_matrix(g, beta)?;
    let edges = g.edge_list();
    let values: Vec<f64> = edges.iter().map(|e| k[(e.u(), e.v())]).collect();
    let normalized = softmax(&values);
    Ok(EdgeScores::from_pairs(
        "katz",
        edges.into_iter().zip(normalized.into_iter().map(|p| 1.0 - p)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodePair;

    fn truncated_series(g: &Graph, beta: f64, max_len: usize) -> Matrix {
        let n = g.num_nodes();
        let a = Matrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
        let mut power = a.clone();
        let mut acc = Matrix::zeros(n, n);
        let mut coef = beta;
        for _ in 0..max_len {
            acc.add_scaled(&power, coef).unwrap();
            power = power.matmul(&a).unwrap();
            coef *= beta;
        }
        acc
    }

    #[test]
    fn single_edge_geometric_series() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let k = katz_matrix(&g, 0.5).unwrap();
        assert!((k[(0, 1)] - 2.0 / 3.0).abs() < 1e-12);
        // even-length walks return to the start
        assert!((k[(0, 0)] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn edgeless_is_zero() {
        let g = Graph::new(4, core::iter::empty()).unwrap();
        assert_eq!(katz_matrix(&g, 0.1).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn triangle_matches_series() {
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let k = katz_matrix(&g, 0.1).unwrap();
        let s = truncated_series(&g, 0.1, 20);
        for (a, b) in k.as_slice().iter().zip(s.as_slice()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn divergence_guard_reports_radius() {
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let err = katz_matrix(&g, 0.6).unwrap_err();
        assert!(alloc::format!("{}", err).contains("spectral radius 2.0"));
        assert!((spectral_radius_estimate(&g) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn bridge_is_most_suspicious() {
        let mut edges = alloc::vec::Vec::new();
        for c in 0..2 {
            for a in 0..4 {
                for b in (a + 1)..4 {
                    edges.push((c * 4 + a, c * 4 + b));
                }
            }
        }
        edges.push((3, 4));
        let g = Graph::new(8, edges).unwrap();
        let s = katz_detector_scores(&g, 0.05).unwrap();
        let bridge = s.get(NodePair::new(3, 4).unwrap()).unwrap();
        for (p, v) in s.iter() {
            assert!((0.0..=1.0).contains(&v));
            if p != NodePair::new(3, 4).unwrap() {
                assert!(bridge > v);
            }
        }
    }

    #[test]
    fn automorphic_edges_tie() {
        let cycle = Graph::new(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let s = katz_detector_scores(&cycle, 0.05).unwrap();
        let vals = s.values();
        assert!(vals.iter().all(|v| (v - vals[0]).abs() < 1e-14));
    }
}
