use super::linalg::{self, CMatrix};
use super::state::DensityMatrix;
use crate::{Error, Result};

/// Completeness tolerance for `sum K^dagger K = I`.
pub const CPTP_TOL: f64 = 1e-9;

/// Completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    n_qubits: usize,
    kraus: Vec<CMatrix>,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::invalid("channel needs at least one Kraus operator"))?;
        let dim = first.nrows();
        if !(dim == 2 || dim == 4) || kraus.iter().any(|k| k.shape() != (dim, dim)) {
            return Err(Error::invalid("Kraus operators must all be 2x2 or all 4x4"));
        }
        let channel = Self { n_qubits: dim.trailing_zeros() as usize, kraus };
        let dev = channel.completeness_deviation();
        if dev > CPTP_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(channel)
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self { n_qubits, kraus: vec![linalg::identity(1 << n_qubits)] }
    }

    pub fn unitary(u: CMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn is_identity(&self) -> bool {
        self.kraus.len() == 1 && linalg::frobenius_norm(&(&self.kraus[0] - linalg::identity(self.kraus[0].nrows()))) < 1e-15
    }

    /// `|| sum K^dagger K - I ||_F`.
    pub fn completeness_deviation(&self) -> f64 {
        let dim = self.kraus[0].nrows();
        let sum = self.kraus.iter().fold(CMatrix::zeros(dim, dim), |acc, k| acc + k.adjoint() * k);
        linalg::frobenius_norm(&(sum - linalg::identity(dim)))
    }

    pub fn is_cptp(&self) -> bool {
        self.completeness_deviation() <= CPTP_TOL
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &QuantumChannel) -> Result<QuantumChannel> {
        if self.n_qubits != next.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: next.n_qubits });
        }
        let kraus = next
            .kraus
            .iter()
            .flat_map(|b| self.kraus.iter().map(move |a| b * a))
            .filter(|k| linalg::frobenius_norm(k) > 0.0)
            .collect();
        QuantumChannel::new(kraus)
    }

    /// Applies the channel to the listed qubits of `rho` (`targets[0]` is the
    /// most significant qubit of the channel's own basis).
    pub fn apply_to(&self, rho: &DensityMatrix, targets: &[usize]) -> Result<DensityMatrix> {
        if targets.len() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: targets.len() });
        }
        let n = rho.n_qubits();
        if targets.iter().any(|&q| q >= n) {
            return Err(Error::DimensionMismatch { expected: n, got: targets.iter().max().unwrap() + 1 });
        }
        Ok(DensityMatrix::from_hermitian(self.apply_matrix(rho.matrix(), targets, n)))
    }

    /// Applies to a full-width state (channel width equals state width).
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << self.n_qubits, got: rho.dim() });
        }
        let targets: Vec<usize> = (0..self.n_qubits).rev().collect();
        self.apply_to(rho, &targets)
    }

    pub(crate) fn apply_matrix(&self, rho: &CMatrix, targets: &[usize], n_qubits: usize) -> CMatrix {
        let dim = rho.nrows();
        let mut out = CMatrix::zeros(dim, dim);
        for k in &self.kraus {
            let full = linalg::embed(k, targets, n_qubits);
            out += &full * rho * full.adjoint();
        }
        linalg::symmetrize(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn rejects_non_trace_preserving() {
        let k = linalg::identity(2).scale(0.9);
        assert!(matches!(QuantumChannel::new(vec![k]), Err(Error::NotTracePreserving(_))));
    }

    #[test]
    fn single_qubit_channel_on_two_qubit_state() {
        let flip = QuantumChannel::unitary(linalg::pauli_x()).unwrap();
        let rho = DensityMatrix::basis(2, 0);
        let out = flip.apply_to(&rho, &[1]).unwrap();
        assert!((out.populations()[2] - 1.0).abs() < 1e-15);
        let out = flip.apply_to(&rho, &[0]).unwrap();
        assert!((out.populations()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn composition_keeps_trace() {
        let half = Complex64::new(0.5f64.sqrt(), 0.0);
        let dephase = QuantumChannel::new(vec![
            linalg::identity(2) * half,
            linalg::pauli_z() * half,
        ])
        .unwrap();
        let twice = dephase.then(&dephase).unwrap();
        assert!(twice.is_cptp());
        let plus = DensityMatrix::from_pure(&[half, half]).unwrap();
        let out = twice.apply(&plus).unwrap();
        assert!((out.trace() - 1.0).abs() < 1e-12);
        assert!(out.matrix()[(0, 1)].norm() < 1e-12);
    }
}
