use alloc::vec::Vec;

use crate::graph::Graph;
use crate::numkit::Matrix;

/// Sparse `D̃^{-1/2}(A + I)D̃^{-1/2}` stored as per-row `(column, weight)`
/// lists including the self loop.
#[derive(Clone, Debug, PartialEq)]
pub struct NormAdj {
    rows: Vec<Vec<(usize, f64)>>,
}

impl NormAdj {
    pub fn from_graph(g: &Graph) -> Self {
        Self::from_lists(g.adjacency_lists())
    }

    /// From symmetric neighbor lists (no self loops).
    pub fn from_lists<L: AsRef<[usize]>>(adj: &[L]) -> Self {
        let inv_sqrt: Vec<f64> = adj
            .iter()
            .map(|l| 1.0 / libm::sqrt((l.as_ref().len() + 1) as f64))
            .collect();
        let rows = adj
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let l = l.as_ref();
                let mut row = Vec::with_capacity(l.len() + 1);
                row.push((i, inv_sqrt[i] * inv_sqrt[i]));
                row.extend(l.iter().map(|&j| (j, inv_sqrt[i] * inv_sqrt[j])));
                row
            })
            .collect();
        Self { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// `Â · m`.
    pub fn apply(&self, m: &Matrix) -> Matrix {
        debug_assert_eq!(m.rows(), self.rows.len());
        let mut out = Matrix::zeros(m.rows(), m.cols());
        for (i, row) in self.rows.iter().enumerate() {
            let dst = out.row_mut(i);
            for &(j, w) in row {
                for (d, &s) in dst.iter_mut().zip(m.row(j)) {
                    *d += w * s;
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Matrix {
        let n = self.rows.len();
        let mut out = Matrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, w) in row {
                out[(i, j)] = w;
            }
        }
        out
    }
}

/// Dense normalized adjacency `Â` of `g`.
pub fn normalized_adjacency(g: &Graph) -> Matrix {
    NormAdj::from_graph(g).to_dense()
}
