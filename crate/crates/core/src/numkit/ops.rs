//! Scalar and vector activations and losses.

use alloc::vec::Vec;

use crate::error::{domain, Result};

/// Probabilities are clamped to this floor before taking logarithms.
pub const PROB_FLOOR: f64 = 1e-12;

/// Logistic function evaluated without overflow for large `|x|`.
#[inline]
pub fn stable_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + libm::exp(-x))
    } else {
        let e = libm::exp(x);
        e / (1.0 + e)
    }
}

#[inline]
pub fn relu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// Max-subtracted softmax.
pub fn softmax(v: &[f64]) -> Vec<f64> {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = v.iter().map(|&x| libm::exp(x - max)).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// `-ln p[y]` with the probability floored at [`PROB_FLOOR`].
pub fn cross_entropy(p: &[f64], y: usize) -> Result<f64> {
    let py = p
        .get(y)
        .ok_or_else(|| domain!("class {} out of range for {} classes", y, p.len()))?;
    Ok(-libm::log(py.max(PROB_FLOOR)))
}

/// Binary cross-entropy of a probability against a 0/1 label.
#[inline]
pub fn binary_cross_entropy(label: f64, p: f64) -> f64 {
    let p = p.clamp(PROB_FLOOR, 1.0 - PROB_FLOOR);
    -(label * libm::log(p) + (1.0 - label) * libm::log(1.0 - p))
}

/// Index of the largest entry; ties resolve to the smallest index.
pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_values() {
        assert_eq!(stable_sigmoid(0.0), 0.5);
        let tiny = stable_sigmoid(-700.0);
        assert!(tiny > 0.0 && tiny.is_finite());
        assert!((stable_sigmoid(2.0) - 0.880_797_077_977_882_3).abs() < 1e-12);
        assert!(stable_sigmoid(700.0) <= 1.0);
    }

    #[test]
    fn softmax_cases() {
        let u = softmax(&[3.0, 3.0, 3.0, 3.0]);
        assert!(u.iter().all(|&p| (p - 0.25).abs() < 1e-15));
        let p = softmax(&[0.0, libm::log(3.0)]);
        assert!((p[0] - 0.25).abs() < 1e-12 && (p[1] - 0.75).abs() < 1e-12);
        let shifted = softmax(&[100.0, 100.0 + libm::log(3.0)]);
        assert!((shifted[1] - p[1]).abs() < 1e-12);
    }

    #[test]
    fn cross_entropy_cases() {
        assert_eq!(cross_entropy(&[1.0, 0.0], 0).unwrap(), 0.0);
        let uniform = [0.25; 4];
        assert!((cross_entropy(&uniform, 2).unwrap() - 4f64.ln()).abs() < 1e-12);
        let floored = cross_entropy(&[1.0, 0.0], 1).unwrap();
        assert!((floored - (-(1e-12f64).ln())).abs() < 1e-9);
        assert!(cross_entropy(&[0.5, 0.5], 2).is_err());
    }

    #[test]
    fn argmax_prefers_first_on_ties() {
        assert_eq!(argmax(&[0.5, 0.5]), 0);
        assert_eq!(argmax(&[0.1, 0.7, 0.7]), 1);
    }
}
