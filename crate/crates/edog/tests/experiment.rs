use std::collections::BTreeSet;

use edog::experiment::{non_random_ratio, ExperimentConfig, TargetSpec};
use edog_core::{EdgeScores, NodePair};
use proptest::prelude::*;

fn pair(a: usize, b: usize) -> NodePair {
    NodePair::new(a, b).unwrap()
}

fn chain(len: usize) -> Vec<NodePair> {
    (0..len).map(|i| pair(i, i + 1)).collect()
}

#[test]
fn ratio_ranks_the_scores() {
    let edges = chain(6);
    let random: BTreeSet<_> = edges[..2].iter().copied().collect();
    let perfect = EdgeScores::from_pairs("p", edges.iter().enumerate().map(|(i, &e)| (e, -(i as f64))));
    let inverted = EdgeScores::from_pairs("i", edges.iter().enumerate().map(|(i, &e)| (e, i as f64)));
    assert_eq!(non_random_ratio(&perfect, &random, 2).unwrap(), 0.0);
    assert_eq!(non_random_ratio(&inverted, &random, 2).unwrap(), 1.0);
    assert_eq!(non_random_ratio(&perfect, &random, 4).unwrap(), 0.5);
    assert!(non_random_ratio(&perfect, &random, 0).is_err());
    assert!(non_random_ratio(&perfect, &random, 7).is_err());
}

proptest! {
    #[test]
    fn constant_scores_give_the_benign_share(total in 2usize..40, k_frac in 0.0f64..1.0) {
        let k = 1 + ((total - 1) as f64 * k_frac) as usize;
        let edges = chain(total);
        let random: BTreeSet<_> = edges[..k].iter().copied().collect();
        let flat = EdgeScores::from_pairs("flat", edges.iter().map(|&e| (e, 0.5)));
        let ratio = non_random_ratio(&flat, &random, k).unwrap();
        prop_assert!((ratio - (1.0 - k as f64 / total as f64)).abs() < 1e-12);
    }
}

#[test]
fn config_defaults_and_target_forms() {
    let cfg: ExperimentConfig = serde_json::from_str(
        r#"{"dataset": {"kind": "er", "n": 50, "p": 0.1, "seed": 2}, "profile": "meta",
            "targets": {"degrees": [3, 4]}, "detectors": ["od", "lp+ggd"], "seed": 5}"#,
    )
    .unwrap();
    assert_eq!((cfg.feature_dim, cfg.smoothing_rounds, cfg.train_fraction), (20, 3, 0.5));
    assert_eq!(cfg.targets, TargetSpec::Degrees(vec![3, 4]));
    assert!(!cfg.adaptive);
    let nodes: TargetSpec = serde_json::from_str(r#"{"nodes": [1, 2]}"#).unwrap();
    assert_eq!(nodes, TargetSpec::Nodes(vec![1, 2]));
    assert!(serde_json::from_str::<TargetSpec>(r#"{"everything": true}"#).is_err());
}
