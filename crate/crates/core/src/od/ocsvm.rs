//! ν one-class SVM with an RBF kernel, solved in the dual by maximal
//! violating pair coordinate descent.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numkit::PrngStream;

/// Solver stops once the maximal KKT violation drops to this value.
pub const KKT_TOLERANCE: f64 = 1e-3;
pub const MAX_ITERATIONS: usize = 100_000;
/// Precomputed kernel matrices are used up to this many points.
const DENSE_KERNEL_LIMIT: usize = 4000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OcsvmModel {
    pub nu: f64,
    pub gamma: f64,
    pub rho: f64,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    /// Standardized training points.
    pub points: Vec<Vec<f64>>,
    pub alpha: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Final maximal KKT violation.
    pub kkt_gap: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn rbf(gamma: f64, a: &[f64], b: &[f64]) -> f64 {
    libm::exp(-gamma * sq_dist(a, b))
}

struct Kernel<'a> {
    gamma: f64,
    points: &'a [Vec<f64>],
    dense: Option<Vec<Vec<f64>>>,
}

impl<'a> Kernel<'a> {
    fn new(gamma: f64, points: &'a [Vec<f64>]) -> Self {
        let dense = (points.len() <= DENSE_KERNEL_LIMIT).then(|| {
            let l = points.len();
            let mut k = vec![vec![0.0; l]; l];
            for i in 0..l {
                k[i][i] = 1.0;
                for j in (i + 1)..l {
                    let v = rbf(gamma, &points[i], &points[j]);
                    k[i][j] = v;
                    k[j][i] = v;
                }
            }
            k
        });
        Self { gamma, points, dense }
    }

    fn row(&self, i: usize) -> Vec<f64> {
        match &self.dense {
            Some(k) => k[i].clone(),
            None => self.points.iter().map(|p| rbf(self.gamma, &self.points[i], p)).collect(),
        }
    }
}

/// Fits the one-class SVM on raw feature vectors.
///
/// Features are z-scored (constant columns keep unit scale) and the kernel
/// width is `1 / (dim · mean variance)` of the standardized data, with the
/// variance floored at 1e-6.
pub fn fit_ocsvm(features: &[Vec<f64>], nu: f64, seed: u64) -> Result<OcsvmModel> {
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(domain!("nu = {} outside (0, 1]", nu));
    }
    let l = features.len();
    if l < 2 {
        return Err(domain!("one-class SVM needs at least two points, got {}", l));
    }
    let dim = features[0].len();
    if dim == 0 || features.iter().any(|f| f.len() != dim) {
        return Err(domain!("feature vectors must share one positive dimension"));
    }
    if features.iter().flatten().any(|x| !x.is_finite()) {
        return Err(domain!("feature vectors contain non-finite values"));
    }

    let lf = l as f64;
    let mut mean = vec![0.0; dim];
    for f in features {
        for (m, x) in mean.iter_mut().zip(f) {
            *m += x / lf;
        }
    }
    let mut std = vec![0.0; dim];
    for f in features {
        for k in 0..dim {
            std[k] += (f[k] - mean[k]) * (f[k] - mean[k]) / lf;
        }
    }
    for s in std.iter_mut() {
        *s = libm::sqrt(*s);
        if *s < 1e-12 {
            *s = 1.0;
        }
    }
    let points: Vec<Vec<f64>> = features
        .iter()
        .map(|f| f.iter().zip(&mean).zip(&std).map(|((x, m), s)| (x - m) / s).collect())
        .collect();
    let mut variance = 0.0;
    for k in 0..dim {
        let mu = points.iter().map(|p| p[k]).sum::<f64>() / lf;
        variance += points.iter().map(|p| (p[k] - mu) * (p[k] - mu)).sum::<f64>() / lf;
    }
    let gamma = 1.0 / (dim as f64 * (variance / dim as f64).max(1e-6));

    let kernel = Kernel::new(gamma, &points);
    let cap = 1.0 / (nu * lf);
    let mut alpha = vec![0.0; l];
    let mut order: Vec<usize> = (0..l).collect();
    order.shuffle(&mut PrngStream::new(seed));
    let mut remaining = 1.0;
    for &i in &order {
        if remaining <= 0.0 {
            break;
        }
        let a = if remaining > cap { cap } else { remaining };
        alpha[i] = a;
        remaining -= a;
    }

    let mut grad = vec![0.0; l];
    for (i, &a) in alpha.iter().enumerate() {
        if a > 0.0 {
            for (g, k) in grad.iter_mut().zip(kernel.row(i)) {
                *g += a * k;
            }
        }
    }

    let mut iterations = 0;
    let mut gap = f64::INFINITY;
    while iterations < MAX_ITERATIONS {
        // i can grow (α < cap), j can shrink (α > 0)
        let mut up: Option<usize> = None;
        let mut down: Option<usize> = None;
        for &k in &order {
            if alpha[k] < cap && up.is_none_or(|i| grad[k] < grad[i]) {
                up = Some(k);
            }
            if alpha[k] > 0.0 && down.is_none_or(|j| grad[k] > grad[j]) {
                down = Some(k);
            }
        }
        let (Some(i), Some(j)) = (up, down) else {
            gap = 0.0;
            break;
        };
        gap = grad[j] - grad[i];
        if gap <= KKT_TOLERANCE || i == j {
            gap = gap.max(0.0);
            break;
        }
        iterations += 1;
        let ki = kernel.row(i);
        let kj = kernel.row(j);
        let curvature = ki[i] + kj[j] - 2.0 * ki[j];
        let limit = (cap - alpha[i]).min(alpha[j]);
        let mut delta = if curvature > 1e-12 { gap / curvature } else { limit };
        if delta >= limit {
            delta = limit;
        }
        if delta == cap - alpha[i] {
            alpha[j] -= delta;
            alpha[i] = cap;
        } else if delta == alpha[j] {
            alpha[i] += delta;
            alpha[j] = 0.0;
        } else {
            alpha[i] += delta;
            alpha[j] -= delta;
        }
        for ((g, a), b) in grad.iter_mut().zip(&ki).zip(&kj) {
            *g += delta * (a - b);
        }
    }
    for a in alpha.iter_mut() {
        *a = a.clamp(0.0, cap);
    }

    let free: Vec<f64> = (0..l)
        .filter(|&k| alpha[k] > 0.0 && alpha[k] < cap)
        .map(|k| grad[k])
        .collect();
    let rho = if free.is_empty() {
        let lower = (0..l)
            .filter(|&k| alpha[k] >= cap)
            .map(|k| grad[k])
            .fold(f64::NEG_INFINITY, f64::max);
        let upper = (0..l)
            .filter(|&k| alpha[k] <= 0.0)
            .map(|k| grad[k])
            .fold(f64::INFINITY, f64::min);
        match (lower.is_finite(), upper.is_finite()) {
            (true, true) => (lower + upper) / 2.0,
            (true, false) => lower,
            (false, true) => upper,
            (false, false) => 0.0,
        }
    } else {
        free.iter().sum::<f64>() / free.len() as f64
    };

    Ok(OcsvmModel {
        nu,
        gamma,
        rho,
        mean,
        std,
        points,
        alpha,
        converged: gap <= KKT_TOLERANCE,
        iterations,
        kkt_gap: gap,
    })
}

impl OcsvmModel {
    pub fn standardize(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.mean.len() {
            return Err(domain!("expected {} features, got {}", self.mean.len(), x.len()));
        }
        Ok(x.iter().zip(&self.mean).zip(&self.std).map(|((v, m), s)| (v - m) / s).collect())
    }

    /// `Σ α_i K(x_i, x) − ρ` over support vectors only; negative values
    /// are outliers.
    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        let z = self.standardize(x)?;
        let mut total = 0.0;
        for (p, &a) in self.points.iter().zip(&self.alpha) {
            if a > 0.0 {
                total += a * rbf(self.gamma, p, &z);
            }
        }
        Ok(total - self.rho)
    }

    /// Same value via the complete kernel row against every training point.
    pub fn decision_dense(&self, x: &[f64]) -> Result<f64> {
        let z = self.standardize(x)?;
        let row: Vec<f64> = self.points.iter().map(|p| rbf(self.gamma, p, &z)).collect();
        Ok(row.iter().zip(&self.alpha).map(|(k, a)| k * a).sum::<f64>() - self.rho)
    }

    pub fn num_support(&self) -> usize {
        self.alpha.iter().filter(|&&a| a > 0.0).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = PrngStream::new(seed);
        (0..n)
            .map(|_| (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect())
            .collect()
    }

    fn assert_feasible(m: &OcsvmModel) {
        let cap = 1.0 / (m.nu * m.alpha.len() as f64);
        assert!(m.alpha.iter().all(|&a| (0.0..=cap).contains(&a)));
        assert!((m.alpha.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nu_property() {
        for (seed, nu) in [(1, 0.5), (2, 0.2), (3, 0.8)] {
            let data = gaussian(200, 2, seed);
            let m = fit_ocsvm(&data, nu, seed).unwrap();
            assert!(m.converged);
            assert_feasible(&m);
            let outliers = data.iter().filter(|x| m.decision(x).unwrap() < 0.0).count();
            let frac = outliers as f64 / 200.0;
            assert!((frac - nu).abs() <= 0.15, "nu {} outlier fraction {}", nu, frac);
        }
    }

    #[test]
    fn far_point_is_most_anomalous() {
        let mut data = gaussian(100, 3, 7);
        data.push(vec![10.0, 0.0, 0.0]);
        let m = fit_ocsvm(&data, 0.1, 0).unwrap();
        let scores: Vec<f64> = data.iter().map(|x| m.decision(x).unwrap()).collect();
        let worst = (0..scores.len()).min_by(|&a, &b| scores[a].total_cmp(&scores[b])).unwrap();
        assert_eq!(worst, 100);
    }

    #[test]
    fn identical_points() {
        let data = vec![vec![1.0, 2.0]; 10];
        let m = fit_ocsvm(&data, 0.5, 0).unwrap();
        assert_feasible(&m);
        let d: Vec<f64> = data.iter().map(|x| m.decision(x).unwrap()).collect();
        assert!(d.iter().all(|&v| (v - d[0]).abs() < 1e-12));
    }

    #[test]
    fn two_decision_forms_agree() {
        let data = gaussian(60, 4, 3);
        let m = fit_ocsvm(&data, 0.3, 5).unwrap();
        for x in gaussian(20, 4, 9).iter().chain(&data) {
            assert!((m.decision(x).unwrap() - m.decision_dense(x).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn input_errors() {
        let data = gaussian(10, 2, 0);
        assert!(fit_ocsvm(&data, 0.0, 0).is_err());
        assert!(fit_ocsvm(&data, 1.5, 0).is_err());
        assert!(fit_ocsvm(&data[..1], 0.5, 0).is_err());
        assert!(fit_ocsvm(&[vec![1.0], vec![1.0, 2.0]], 0.5, 0).is_err());
        let m = fit_ocsvm(&data, 0.5, 0).unwrap();
        assert!(m.decision(&[1.0]).is_err());
    }

    #[test]
    fn nu_one_puts_every_point_at_cap() {
        let data = gaussian(8, 2, 4);
        let m = fit_ocsvm(&data, 1.0, 0).unwrap();
        assert!(m.alpha.iter().all(|&a| a == 1.0 / 8.0));
    }

    #[test]
    fn deterministic_per_seed() {
        let data = gaussian(50, 3, 1);
        assert_eq!(fit_ocsvm(&data, 0.5, 2).unwrap(), fit_ocsvm(&data, 0.5, 2).unwrap());
    }
}
