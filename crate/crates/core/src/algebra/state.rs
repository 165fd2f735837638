use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::linalg::{self, CMatrix};
use crate::{Error, Result};

/// Tolerance used for Hermiticity, trace and positivity checks.
pub const PHYSICAL_TOL: f64 = 1e-9;

/// Hermitian 2x2 or 4x4 density matrix.
///
/// Matrices produced by linear inversion or SPAM correction can have negative
/// eigenvalues or a trace different from one; they are representable but
/// carry `is_physical() == false`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    physical: bool,
}

impl DensityMatrix {
    /// Wraps a Hermitian matrix, deciding the physical flag from its spectrum.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || !(dim == 2 || dim == 4) {
            return Err(Error::invalid(format!(
                "density matrix must be 2x2 or 4x4, got {}x{}",
                dim,
                matrix.ncols()
            )));
        }
        let dev = linalg::hermitian_deviation(&matrix);
        if dev > PHYSICAL_TOL {
            return Err(Error::invalid(format!("matrix is not Hermitian (deviation {dev:.3e})")));
        }
        Ok(Self::from_hermitian(linalg::symmetrize(&matrix)))
    }

    /// Builds from a matrix that is Hermitian by construction (symmetrized
    /// arithmetic); the physical flag is recomputed.
    pub(crate) fn from_hermitian(matrix: CMatrix) -> Self {
        let physical = check_physical(&matrix);
        Self { matrix, physical }
    }

    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("state vector norm {norm} is not 1")));
        }
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        Self::new(&v * v.adjoint())
    }

    /// Computational basis state `|index>` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let dim = 1 << n_qubits;
        assert!(index < dim, "basis index out of range");
        let mut m = CMatrix::zeros(dim, dim);
        m[(index, index)] = linalg::ONE;
        Self { matrix: m, physical: true }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        Self {
            matrix: linalg::identity(dim).scale(1.0 / dim as f64),
            physical: true,
        }
    }

    /// Bell state `(|00> + |11>)/sqrt(2)`.
    pub fn bell_phi_plus() -> Self {
        Self::from_pure(&bell_phi_plus_vector()).expect("normalized")
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn is_physical(&self) -> bool {
        self.physical
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigen(&self.matrix).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Diagonal in the computational basis.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    /// Nearest (Frobenius) positive semidefinite unit-trace matrix.
    pub fn nearest_physical(&self) -> DensityMatrix {
        let (values, vectors) = linalg::hermitian_eigen(&self.matrix);
        let projected = linalg::project_to_simplex(&values);
        Self::from_hermitian(linalg::symmetrize(&linalg::from_eigen(&projected, &vectors)))
    }

    /// `self` divided by its trace.
    pub fn normalized(&self) -> Result<DensityMatrix> {
        let tr = self.trace();
        if tr.abs() < 1e-15 {
            return Err(Error::NonPhysical("zero trace".into()));
        }
        Ok(Self::from_hermitian(self.matrix.scale(1.0 / tr)))
    }

    pub(crate) fn require_physical(&self) -> Result<()> {
        if self.physical {
            Ok(())
        } else {
            Err(Error::NonPhysical(format!(
                "trace {:.6}, min eigenvalue {:.3e}",
                self.trace(),
                self.min_eigenvalue()
            )))
        }
    }
}

pub(crate) fn check_physical(m: &CMatrix) -> bool {
    let tr = m.trace().re;
    (tr - 1.0).abs() <= PHYSICAL_TOL && linalg::hermitian_eigen(m).0[0] >= -PHYSICAL_TOL
}

pub fn bell_phi_plus_vector() -> Vec<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        Complex64::new(h, 0.0),
        linalg::ZERO,
        linalg::ZERO,
        Complex64::new(h, 0.0),
    ]
}

/// Serialized form: dimension plus row-major `[re, im]` pairs at full
/// precision.
#[derive(Serialize, Deserialize)]
struct DensityMatrixRepr {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dim = self.dim();
        DensityMatrixRepr {
            dim,
            entries: (0..dim)
                .map(|i| (0..dim).map(|j| [self.matrix[(i, j)].re, self.matrix[(i, j)].im]).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = DensityMatrixRepr::deserialize(deserializer)?;
        if repr.entries.len() != repr.dim || repr.entries.iter().any(|r| r.len() != repr.dim) {
            return Err(serde::de::Error::custom("entry table does not match dim"));
        }
        let m = CMatrix::from_fn(repr.dim, repr.dim, |i, j| {
            Complex64::new(repr.entries[i][j][0], repr.entries[i][j][1])
        });
        DensityMatrix::new(m).map_err(serde::de::Error::custom)
    }
}
