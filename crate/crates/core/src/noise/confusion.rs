use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest condition number accepted before refusing to invert a confusion
/// matrix.
pub const MAX_CONDITION_NUMBER: f64 = 1e6;

/// Readout confusion matrix `A[i][r] = P(reported r | prepared i)`.
///
/// Rows are indexed by the prepared basis state and columns by the reported
/// outcome, both in `|s1 s0>` order. The rows given at construction are kept
/// verbatim in [`raw`](Self::raw); the working matrix has negative entries
/// clamped to zero and each row rescaled to sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    raw: Vec<Vec<f64>>,
    rows: Vec<Vec<f64>>,
}

impl ConfusionMatrix {
    pub fn from_rows(raw: Vec<Vec<f64>>) -> Result<Self> {
        let dim = raw.len();
        if !(dim == 2 || dim == 4) || raw.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("confusion matrix must be 2x2 or 4x4"));
        }
        if raw.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::invalid("confusion matrix has non-finite entries"));
        }
        let mut rows = raw.clone();
        for (i, row) in rows.iter_mut().enumerate() {
            for x in row.iter_mut() {
                *x = x.max(0.0);
            }
            let sum: f64 = row.iter().sum();
            if sum <= 0.0 {
                return Err(Error::invalid(format!("confusion row {i} has no positive mass")));
            }
            row.iter_mut().for_each(|x| *x /= sum);
        }
        Ok(Self { raw, rows })
    }

    pub fn identity(dim: usize) -> Self {
        let rows: Vec<Vec<f64>> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self { raw: rows.clone(), rows }
    }

    /// Independent symmetric bit flips with probability `q` on each of
    /// `n_qubits` readouts.
    pub fn symmetric_flip(q: f64, n_qubits: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::invalid(format!("flip probability {q} outside [0, 1]")));
        }
        let dim = 1usize << n_qubits;
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|r| {
                        let flips = (i ^ r).count_ones() as i32;
                        q.powi(flips) * (1.0 - q).powi(n_qubits as i32 - flips)
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, prepared: usize, reported: usize) -> f64 {
        self.rows[prepared][reported]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn raw(&self) -> &[Vec<f64>] {
        &self.raw
    }

    pub fn raw_row_sums(&self) -> Vec<f64> {
        self.raw.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == if i == j { 1.0 } else { 0.0 }))
    }

    pub fn is_doubly_stochastic(&self, tol: f64) -> bool {
        (0..self.dim()).all(|j| (self.rows.iter().map(|r| r[j]).sum::<f64>() - 1.0).abs() <= tol)
    }

    /// Pushes a distribution over prepared states through the readout:
    /// `out[r] = sum_i dist[i] A[i][r]`.
    pub fn apply(&self, dist: &[f64]) -> Result<Vec<f64>> {
        if dist.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: dist.len() });
        }
        if dist.iter().any(|&p| p < -1e-12 || !p.is_finite()) {
            return Err(Error::invalid("distribution has negative or non-finite entries"));
        }
        let sum: f64 = dist.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("distribution sums to {sum}, expected 1")));
        }
        Ok(self.push_forward(dist))
    }

    pub(crate) fn push_forward(&self, dist: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|r| dist.iter().zip(&self.rows).map(|(p, row)| p * row[r]).sum())
            .collect()
    }

    fn matrix(&self) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| self.rows[i][j])
    }

    /// Two-norm condition number of the working matrix.
    pub fn condition_number(&self) -> f64 {
        let sv = self.matrix().singular_values();
        let max = sv.max();
        let min = sv.min();
        if min <= 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    /// Plain inverse of the working matrix, refused when the condition number
    /// exceeds [`MAX_CONDITION_NUMBER`].
    pub fn inverse(&self) -> Result<DMatrix<f64>> {
        let cond = self.condition_number();
        if !(cond <= MAX_CONDITION_NUMBER) {
            return Err(Error::SingularConfusion(cond));
        }
        self.matrix().try_inverse().ok_or(Error::SingularConfusion(cond))
    }

    /// Undoes the readout on a measured distribution: `p_true = p_meas A^-1`.
    /// No clipping is applied, so the result may leave the simplex.
    pub fn correct(&self, measured: &[f64]) -> Result<Vec<f64>> {
        if measured.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: measured.len() });
        }
        let inv = self.inverse()?;
        Ok((0..self.dim())
            .map(|i| measured.iter().enumerate().map(|(r, m)| m * inv[(r, i)]).sum())
            .collect())
    }

    /// Single-qubit readout of `qubit`, taken from the rows where the other
    /// qubit is prepared in `|0>`.
    pub fn marginal(&self, qubit: usize) -> Result<ConfusionMatrix> {
        match (self.dim(), qubit) {
            (2, 0) => Ok(self.clone()),
            (4, 0 | 1) => {
                let bit = 1usize << qubit;
                let rows = (0..2)
                    .map(|s| {
                        let prepared = if s == 1 { bit } else { 0 };
                        let mut row = vec![0.0; 2];
                        for (r, &x) in self.rows[prepared].iter().enumerate() {
                            row[usize::from(r & bit != 0)] += x;
                        }
                        row
                    })
                    .collect();
                ConfusionMatrix::from_rows(rows)
            }
            _ => Err(Error::invalid(format!("no qubit {qubit} in a {}-outcome readout", self.dim()))),
        }
    }

    /// Mean probability that the reported parity differs from the prepared one.
    pub fn parity_flip_estimate(&self) -> f64 {
        let d = self.dim();
        let total: f64 = (0..d)
            .map(|i| {
                (0..d)
                    .filter(|&r| ((i ^ r).count_ones() & 1) == 1)
                    .map(|r| self.rows[i][r])
                    .sum::<f64>()
            })
            .sum();
        total / d as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_300mk() -> ConfusionMatrix {
        ConfusionMatrix::from_rows(vec![
            vec![0.958, 0.008, 0.002, 0.039],
            vec![0.007, 0.948, 0.043, 0.002],
            vec![0.009, 0.015, 0.966, 0.001],
            vec![0.027, 0.005, 0.012, 0.952],
        ])
        .unwrap()
    }

    #[test]
    fn rows_renormalized_raw_kept() {
        let a = table_300mk();
        assert_eq!(a.raw()[0], vec![0.958, 0.008, 0.002, 0.039]);
        for row in a.rows() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
        let out = a.apply(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let s = 1.007;
        for (o, e) in out.iter().zip([0.958, 0.008, 0.002, 0.039]) {
            assert!((o - e / s).abs() < 1e-12);
        }
    }

    #[test]
    fn negative_entries_clamped() {
        let a = ConfusionMatrix::from_rows(vec![vec![1.01, -0.01], vec![0.0, 1.0]]).unwrap();
        assert_eq!(a.rows()[0], vec![1.0, 0.0]);
        assert_eq!(a.raw()[0][1], -0.01);
    }

    #[test]
    fn correction_inverts_apply() {
        let a = table_300mk();
        let p = [0.1, 0.2, 0.3, 0.4];
        let back = a.correct(&a.apply(&p).unwrap()).unwrap();
        for (x, y) in back.iter().zip(p) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_refused() {
        let a = ConfusionMatrix::from_rows(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert!(matches!(a.inverse(), Err(Error::SingularConfusion(_))));
    }

    #[test]
    fn symmetric_flip_marginal() {
        let a = ConfusionMatrix::symmetric_flip(0.05, 2).unwrap();
        let m = a.marginal(1).unwrap();
        assert!((m.get(0, 1) - 0.05).abs() < 1e-12);
        assert!((m.get(1, 1) - 0.95).abs() < 1e-12);
        assert!(a.is_doubly_stochastic(1e-12));
    }

    #[test]
    fn parity_flip_of_identity_is_zero() {
        assert_eq!(ConfusionMatrix::identity(4).parity_flip_estimate(), 0.0);
        let a = ConfusionMatrix::symmetric_flip(0.1, 2).unwrap();
        assert!((a.parity_flip_estimate() - 2.0 * 0.1 * 0.9).abs() < 1e-12);
    }
}
