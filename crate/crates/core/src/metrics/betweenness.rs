use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::Graph;

/// Exact unnormalized betweenness (Brandes), each unordered source–target
/// pair counted once.
pub fn betweenness(g: &Graph) -> Vec<f64> {
    let n = g.num_nodes();
    let mut centrality = vec![0.0; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        sigma.iter_mut().for_each(|x| *x = 0.0);
        dist.iter_mut().for_each(|x| *x = -1);
        delta.iter_mut().for_each(|x| *x = 0.0);
        preds.iter_mut().for_each(Vec::clear);
        order.clear();

        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in g.neighbors(v) {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        while let Some(w) = order.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                centrality[w] += delta[w];
            }
        }
    }
    centrality.iter_mut().for_each(|c| *c *= 0.5);
    centrality
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_middle() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(betweenness(&g), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn star_center() {
        for k in 2..7 {
            let g = Graph::new(k + 1, (1..=k).map(|i| (0, i))).unwrap();
            let b = betweenness(&g);
            assert_eq!(b[0], (k * (k - 1) / 2) as f64);
            assert!(b[1..].iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn complete_graph_zero() {
        let g = Graph::new(5, (0..5).flat_map(|a| ((a + 1)..5).map(move |b| (a, b)))).unwrap();
        assert!(betweenness(&g).iter().all(|&x| x == 0.0));
    }
}
