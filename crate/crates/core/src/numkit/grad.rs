use super::Matrix;

pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Central finite-difference gradient of a scalar function of a matrix.
pub fn finite_diff_grad(mut f: impl FnMut(&Matrix) -> f64, at: &Matrix, h: f64) -> Matrix {
    let mut probe = at.clone();
    let mut out = Matrix::zeros(at.rows(), at.cols());
    for i in 0..at.as_slice().len() {
        let orig = probe.as_slice()[i];
        probe.as_mut_slice()[i] = orig + h;
        let plus = f(&probe);
        probe.as_mut_slice()[i] = orig - h;
        let minus = f(&probe);
        probe.as_mut_slice()[i] = orig;
        out.as_mut_slice()[i] = (plus - minus) / (2.0 * h);
    }
    out
}

/// Largest entrywise relative error `|a−b| / max(|a|, |b|, floor)`.
pub fn max_relative_error(analytic: &Matrix, numeric: &Matrix, floor: f64) -> f64 {
    analytic
        .as_slice()
        .iter()
        .zip(numeric.as_slice())
        .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(floor))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_at_three() {
        let at = Matrix::from_rows(&[[3.0]]).unwrap();
        let g = finite_diff_grad(|m| m[(0, 0)] * m[(0, 0)], &at, DEFAULT_FD_STEP);
        assert!((g[(0, 0)] - 6.0).abs() < 1e-6);
    }

    #[test]
    fn constant_and_sum() {
        let at = Matrix::from_fn(2, 3, |i, j| (i + j) as f64);
        let g = finite_diff_grad(|_| 4.2, &at, DEFAULT_FD_STEP);
        assert_eq!(g.max_abs(), 0.0);
        let g = finite_diff_grad(|m| m.as_slice().iter().sum(), &at, DEFAULT_FD_STEP);
        assert!(g.as_slice().iter().all(|&v| (v - 1.0).abs() < 1e-9));
    }
}
