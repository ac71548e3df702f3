//! Degree-gated ensemble of the three detectors.
//!
//! Each constituent's scores are rank-normalized to [0, 1]. Edges whose
//! endpoint degrees sum above [`GATE_DEGREE_SUM`] average all three
//! (filtered generation, plain generation, outlier); the rest ignore the
//! outlier detector, whose neighborhood statistics are meaningless on
//! sparse neighborhoods.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::ggd::{fit_filtered_ggd, ggd_detect, train_ggd, FilteredGgd, GgdModel};
use crate::graph::{Graph, NodePair};
use crate::lp::{train_lp, LpModel};
use crate::numkit::derive_seed;
use crate::od::{OdConfig, OdDetector};
use crate::scores::EdgeScores;

/// Edges with `deg(u) + deg(v)` above this use all three detectors.
pub const GATE_DEGREE_SUM: usize = 6;

/// Maps scores to `(average rank − 1) / (N − 1)`; ties share their average
/// rank and a single entry maps to 0.5.
pub fn rank_normalize(scores: &EdgeScores) -> Result<EdgeScores> {
    if scores.is_empty() {
        return Err(domain!("cannot rank-normalize an empty score set"));
    }
    let n = scores.len();
    let mut out = EdgeScores::new(scores.detector());
    if n == 1 {
        for (p, _) in scores.iter() {
            out.insert(p, 0.5);
        }
        return Ok(out);
    }
    let mut sorted: Vec<(NodePair, f64)> = scores.iter().collect();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && sorted[j + 1].1 == sorted[i].1 {
            j += 1;
        }
        // 1-based ranks i+1 ..= j+1 share their mean
        let avg_rank = (i + j) as f64 / 2.0 + 1.0;
        let value = (avg_rank - 1.0) / (n - 1) as f64;
        for (p, _) in &sorted[i..=j] {
            out.insert(*p, value);
        }
        i = j + 1;
    }
    Ok(out)
}

/// The gated average for one edge of normalized constituent scores.
pub fn gated_average(degree_sum: usize, lp_ggd: f64, ggd: f64, od: f64) -> f64 {
    if degree_sum > GATE_DEGREE_SUM {
        (lp_ggd + ggd + od) / 3.0
    } else {
        (lp_ggd + ggd) / 2.0
    }
}

/// Combines raw constituent scores over the same pairs. `degree_sum` gives
/// the gate input of each pair.
pub fn combine(
    lp_ggd: &EdgeScores,
    ggd: &EdgeScores,
    od: &EdgeScores,
    degree_sum: impl Fn(NodePair) -> usize,
) -> Result<EdgeScores> {
    let (a, b, c) = (rank_normalize(lp_ggd)?, rank_normalize(ggd)?, rank_normalize(od)?);
    let mut out = EdgeScores::new("edog");
    for (pair, x) in a.iter() {
        let (Some(y), Some(z)) = (b.get(pair), c.get(pair)) else {
            return Err(domain!("constituent scores disagree on pair ({}, {})", pair.u(), pair.v()));
        };
        out.insert(pair, gated_average(degree_sum(pair), x, y, z));
    }
    if out.len() != b.len() || out.len() != c.len() {
        return Err(domain!("constituent scores cover different pairs"));
    }
    Ok(out)
}

/// Ensemble scores together with the raw constituent scores.
#[derive(Clone, Debug, PartialEq)]
pub struct EdogScores {
    pub edog: EdgeScores,
    pub lp_ggd: EdgeScores,
    pub ggd: EdgeScores,
    pub od: EdgeScores,
}

impl EdogScores {
    pub fn by_name(&self) -> BTreeMap<&'static str, &EdgeScores> {
        BTreeMap::from([("edog", &self.edog), ("lp+ggd", &self.lp_ggd), ("ggd", &self.ggd), ("od", &self.od)])
    }
}

/// All ensemble constituents fitted on one graph.
#[derive(Clone, Debug, PartialEq)]
pub struct EdogDetector {
    pub seed: u64,
    pub lp: LpModel,
    pub filtered: FilteredGgd,
    pub ggd: GgdModel,
    pub od: OdDetector,
}

fn streams(seed: u64) -> (u64, u64, u64) {
    (derive_seed(seed, "lp+ggd"), derive_seed(seed, "ggd"), derive_seed(seed, "od"))
}

impl EdogDetector {
    pub fn fit(g: &Graph, seed: u64) -> Result<Self> {
        let (s_filter, s_ggd, s_od) = streams(seed);
        let lp = train_lp(g, derive_seed(s_filter, "lp"))?;
        let filtered = fit_filtered_ggd(g, &lp, s_filter)?;
        let ggd = train_ggd(g, derive_seed(s_ggd, "ggd"))?;
        let od = OdDetector::fit(g, s_od, OdConfig::default())?;
        Ok(Self {
            seed,
            lp,
            filtered,
            ggd,
            od,
        })
    }

    fn constituents(&self, g: &Graph, pairs: &[NodePair], od: EdgeScores) -> Result<(EdgeScores, EdgeScores, EdgeScores)> {
        let (s_filter, s_ggd, _) = streams(self.seed);
        let mut lp_ggd = ggd_detect(&self.filtered.model, g, pairs, derive_seed(s_filter, "ggd-detect"))?;
        lp_ggd.set_detector("lp+ggd");
        let ggd = ggd_detect(&self.ggd, g, pairs, derive_seed(s_ggd, "ggd-detect"))?;
        Ok((lp_ggd, ggd, od))
    }

    /// Scores every edge of the graph the detector was fitted on.
    pub fn detect(&self, g: &Graph) -> Result<EdogScores> {
        let (lp_ggd, ggd, od) = self.constituents(g, &g.edge_list(), self.od.score_edges(g)?)?;
        let edog = combine(&lp_ggd, &ggd, &od, |p| g.degree(p.u()) + g.degree(p.v()))?;
        Ok(EdogScores { edog, lp_ggd, ggd, od })
    }

    /// Scores arbitrary pairs as the defender would see them once added;
    /// normalization is relative to the given pair set.
    pub fn score_pairs(&self, g: &Graph, pairs: &[NodePair]) -> Result<EdgeScores> {
        let od = self.od.score_pairs(g, pairs)?;
        let (lp_ggd, ggd, od) = self.constituents(g, pairs, od)?;
        combine(&lp_ggd, &ggd, &od, |p| {
            let extra = if g.contains_pair(p) { 0 } else { 2 };
            g.degree(p.u()) + g.degree(p.v()) + extra
        })
    }
}

/// Ensemble maliciousness of every edge.
pub fn edog_detect(g: &Graph, seed: u64) -> Result<EdgeScores> {
    Ok(EdogDetector::fit(g, seed)?.detect(g)?.edog)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ggd::{ggd_scores, lp_filter_ggd};
    use crate::od::od_detect;
    use crate::testutil::{two_cliques, with_injected};
    use alloc::vec;
    use proptest::prelude::*;

    fn p(a: usize, b: usize) -> NodePair {
        NodePair::new(a, b).unwrap()
    }

    fn scores(vals: &[f64]) -> EdgeScores {
        EdgeScores::from_pairs("x", vals.iter().enumerate().map(|(i, &v)| (p(0, i + 1), v)))
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_normalize(&scores(&[10.0, 20.0, 30.0])).unwrap().values(), vec![0.0, 0.5, 1.0]);
        assert_eq!(rank_normalize(&scores(&[4.0, 4.0, 4.0])).unwrap().values(), vec![0.5, 0.5, 0.5]);
        assert_eq!(rank_normalize(&scores(&[1.0, 1.0, 5.0])).unwrap().values(), vec![0.25, 0.25, 1.0]);
        assert_eq!(rank_normalize(&scores(&[7.0])).unwrap().values(), vec![0.5]);
        assert!(rank_normalize(&scores(&[])).is_err());
    }

    proptest! {
        #[test]
        fn rank_normalize_is_monotone(vals in proptest::collection::vec(-5i32..5, 1..30)) {
            let raw: Vec<f64> = vals.iter().map(|&v| f64::from(v)).collect();
            let s = scores(&raw);
            let r = rank_normalize(&s).unwrap();
            for (pa, a) in s.iter() {
                let ra = r.get(pa).unwrap();
                prop_assert!((0.0..=1.0).contains(&ra));
                for (pb, b) in s.iter() {
                    let rb = r.get(pb).unwrap();
                    if a < b { prop_assert!(ra < rb); }
                    if a == b { prop_assert_eq!(ra, rb); }
                }
            }
        }
    }

    #[test]
    fn gate_examples() {
        assert!((gated_average(7, 0.9, 0.6, 0.3) - 0.6).abs() < 1e-15);
        assert!((gated_average(5, 0.8, 0.4, 0.99) - 0.6).abs() < 1e-15);
        assert_eq!(gated_average(6, 0.2, 0.4, 1.0), gated_average(6, 0.2, 0.4, 0.0));
    }

    #[test]
    fn combine_rejects_mismatched_pairs() {
        let a = scores(&[1.0, 2.0]);
        let b = scores(&[1.0, 2.0, 3.0]);
        assert!(combine(&a, &b, &b, |_| 0).is_err());
        assert!(combine(&b, &a, &b, |_| 0).is_err());
    }

    #[test]
    fn matches_hand_composition() {
        let (g, _) = with_injected(&two_cliques(5), &[(0, 5), (1, 6)]);
        let seed = 11;
        let out = EdogDetector::fit(&g, seed).unwrap().detect(&g).unwrap();
        let a = rank_normalize(&lp_filter_ggd(&g, derive_seed(seed, "lp+ggd")).unwrap()).unwrap();
        let b = rank_normalize(&ggd_scores(&g, derive_seed(seed, "ggd")).unwrap()).unwrap();
        let c = rank_normalize(&od_detect(&g, derive_seed(seed, "od")).unwrap()).unwrap();
        assert_eq!(out.edog.len(), g.num_edges());
        for e in g.edges() {
            let (x, y, z) = (a.get(e).unwrap(), b.get(e).unwrap(), c.get(e).unwrap());
            let expected = if g.degree(e.u()) + g.degree(e.v()) > 6 {
                (x + y + z) / 3.0
            } else {
                (x + y) / 2.0
            };
            let got = out.edog.get(e).unwrap();
            assert!((got - expected).abs() < 1e-12);
            assert!((0.0..=1.0).contains(&got));
        }
        assert_eq!(out.edog, edog_detect(&g, seed).unwrap());
    }

    #[test]
    fn hypothetical_pairs_are_scored() {
        let g = two_cliques(5);
        let det = EdogDetector::fit(&g, 1).unwrap();
        let pairs = vec![p(0, 5), p(0, 6), p(1, 2)];
        let s = det.score_pairs(&g, &pairs).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|(_, v)| (0.0..=1.0).contains(&v)));
    }
}
