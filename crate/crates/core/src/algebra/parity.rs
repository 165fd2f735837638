use super::linalg::{self, CMatrix};
use super::state::DensityMatrix;
use crate::{Error, Result};

/// Outcome of a ZZ-parity projective measurement. Even (`00`, `11`) is
/// labelled 0 and odd (`01`, `10`) is labelled 1.
#[derive(Debug, Clone)]
pub struct ParityProjection {
    pub even_probability: f64,
    pub odd_probability: f64,
    /// Renormalized post-measurement state, absent when the branch has zero
    /// probability.
    pub even_state: Option<DensityMatrix>,
    pub odd_state: Option<DensityMatrix>,
}

/// Projector onto the even (`parity == 0`) or odd subspace.
pub fn parity_projector(parity: u8) -> CMatrix {
    let mut p = CMatrix::zeros(4, 4);
    for i in 0..4usize {
        if (i.count_ones() as u8 & 1) == parity {
            p[(i, i)] = linalg::ONE;
        }
    }
    p
}

/// Unnormalized projection `P rho P`.
pub(crate) fn project_unnormalized(rho: &CMatrix, parity: u8) -> CMatrix {
    let p = parity_projector(parity);
    &p * rho * &p
}

pub fn project_parity(rho: &DensityMatrix) -> Result<ParityProjection> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    let branch = |parity: u8| {
        let m = project_unnormalized(rho.matrix(), parity);
        let prob = m.trace().re.max(0.0);
        let state = (prob > 1e-15).then(|| DensityMatrix::from_hermitian(linalg::symmetrize(&m.scale(1.0 / prob))));
        (prob, state)
    };
    let (even_probability, even_state) = branch(0);
    let (odd_probability, odd_state) = branch(1);
    let total = even_probability + odd_probability;
    Ok(ParityProjection {
        even_probability: even_probability / total,
        odd_probability: odd_probability / total,
        even_state,
        odd_state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projectors_are_complete() {
        let sum = parity_projector(0) + parity_projector(1);
        assert_eq!(sum, linalg::identity(4));
    }

    #[test]
    fn antiparallel_is_odd() {
        let p = project_parity(&DensityMatrix::basis(2, 0b01)).unwrap();
        assert_eq!(p.odd_probability, 1.0);
        assert!(p.even_state.is_none());
        assert!(project_parity(&DensityMatrix::basis(1, 0)).is_err());
    }

    #[test]
    fn bell_is_even_and_unchanged() {
        let bell = DensityMatrix::bell_phi_plus();
        let p = project_parity(&bell).unwrap();
        assert!((p.even_probability - 1.0).abs() < 1e-15);
        let post = p.even_state.unwrap();
        assert!(linalg::frobenius_norm(&(post.matrix() - bell.matrix())) < 1e-15);
    }
}
