use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::graph::NodePair;
use crate::scores::EdgeScores;

/// ROC AUC of `scores` with `malicious` as the positive class.
///
/// Mann–Whitney form: the fraction of (malicious, benign) pairs in which the
/// malicious edge scores higher, each tie counting one half.
pub fn roc_auc(scores: &EdgeScores, malicious: &BTreeSet<NodePair>) -> Result<f64> {
    if let Some(missing) = malicious.iter().find(|p| scores.get(**p).is_none()) {
        return Err(domain!(
            "malicious pair ({}, {}) has no score",
            missing.u(),
            missing.v()
        ));
    }
    let (values, labels): (Vec<f64>, Vec<bool>) = scores
        .iter()
        .map(|(p, s)| (s, malicious.contains(&p)))
        .unzip();
    auc_from_labels(&values, &labels)
}

/// Rank-sum AUC over parallel score/label slices.
pub fn auc_from_labels(scores: &[f64], positive: &[bool]) -> Result<f64> {
    if scores.len() != positive.len() {
        return Err(domain!("{} scores for {} labels", scores.len(), positive.len()));
    }
    let n_pos = positive.iter().filter(|&&b| b).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(domain!(
            "AUC needs both classes (got {} positive, {} negative)",
            n_pos,
            n_neg
        ));
    }
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && scores[idx[j + 1]] == scores[idx[i]] {
            j += 1;
        }
        // 1-based ranks i+1..=j+1 share their mean
        let avg_rank = (i + j + 2) as f64 / 2.0;
        for &k in &idx[i..=j] {
            if positive[k] {
                rank_sum += avg_rank;
            }
        }
        i = j + 1;
    }
    let p = n_pos as f64;
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * n_neg as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_and_tied() {
        assert_eq!(auc_from_labels(&[0.9, 0.8, 0.1], &[true, true, false]).unwrap(), 1.0);
        assert_eq!(auc_from_labels(&[0.3; 4], &[true, false, false, true]).unwrap(), 0.5);
    }

    #[test]
    fn mixed_example() {
        let auc = auc_from_labels(&[0.8, 0.6, 0.4], &[true, false, true]).unwrap();
        assert!((auc - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_class_is_error() {
        assert!(auc_from_labels(&[0.1, 0.2], &[true, true]).is_err());
        assert!(auc_from_labels(&[0.1, 0.2], &[false, false]).is_err());
    }

    #[test]
    fn unscored_malicious_pair_is_error() {
        let s = EdgeScores::from_pairs("x", [(NodePair::new(0, 1).unwrap(), 0.4)]);
        let mal: BTreeSet<_> = [NodePair::new(1, 2).unwrap()].into_iter().collect();
        assert!(roc_auc(&s, &mal).is_err());
    }
}
