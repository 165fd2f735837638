use num_complex::Complex64;

use crate::algebra::linalg::{self, CMatrix};
use crate::algebra::DensityMatrix;
use crate::{Error, Result};

/// `<psi| rho |psi>` for a normalized target vector; `rho` is used as given.
pub fn state_fidelity(rho: &DensityMatrix, target: &[Complex64]) -> Result<f64> {
    if target.len() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: target.len() });
    }
    let norm: f64 = target.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!("target vector norm {norm} is not 1")));
    }
    let v = nalgebra::DVector::from_column_slice(target);
    Ok((v.adjoint() * rho.matrix() * &v)[(0, 0)].re)
}

/// Wootters concurrence. Non-physical input is first replaced by its nearest
/// physical state, with a warning.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    let rho = if rho.is_physical() {
        rho.clone()
    } else {
        log::warn!(
            "concurrence of a non-physical matrix (trace {:.4}, min eigenvalue {:.4}); projecting to the nearest state",
            rho.trace(),
            rho.min_eigenvalue()
        );
        rho.nearest_physical()
    };
    let yy = linalg::kron(&linalg::pauli_y(), &linalg::pauli_y());
    let m = rho.matrix();
    let tilde = &yy * m.conjugate() * &yy;
    let sqrt_rho = linalg::psd_sqrt(m);
    let inner: CMatrix = linalg::symmetrize(&(&sqrt_rho * tilde * &sqrt_rho));
    let (values, _) = linalg::hermitian_eigen(&inner);
    let mut lambdas: Vec<f64> = values.iter().map(|&v| v.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

pub fn frobenius_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: sigma.dim() });
    }
    Ok(linalg::frobenius_norm(&(rho.matrix() - sigma.matrix())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::state::bell_phi_plus_vector;

    #[test]
    fn bell_and_mixed() {
        let bell = DensityMatrix::bell_phi_plus();
        let mixed = DensityMatrix::maximally_mixed(2);
        let phi = bell_phi_plus_vector();
        assert!((state_fidelity(&bell, &phi).unwrap() - 1.0).abs() < 1e-12);
        assert!((state_fidelity(&mixed, &phi).unwrap() - 0.25).abs() < 1e-12);
        assert!((concurrence(&bell).unwrap() - 1.0).abs() < 1e-9);
        assert!(concurrence(&mixed).unwrap().abs() < 1e-9);
        assert!((frobenius_distance(&mixed, &bell).unwrap() - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn werner_closed_form() {
        let w = 0.8;
        let m = DensityMatrix::bell_phi_plus().matrix().scale(w) + DensityMatrix::maximally_mixed(2).matrix().scale(1.0 - w);
        let c = concurrence(&DensityMatrix::new(m).unwrap()).unwrap();
        assert!((c - (3.0 * w - 1.0) / 2.0).abs() < 1e-9);
    }
}
