//! Small dense complex linear algebra helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn from_rows(rows: &[&[Complex64]]) -> CMatrix {
    let n = rows.len();
    CMatrix::from_fn(n, rows[0].len(), |i, j| rows[i][j])
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn pauli_x() -> CMatrix {
    from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])
}

pub fn pauli_y() -> CMatrix {
    from_rows(&[&[ZERO, -I], &[I, ZERO]])
}

pub fn pauli_z() -> CMatrix {
    from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]])
}

/// Rotation by `theta` about the equatorial axis at azimuth `phi`:
/// `exp(-i theta/2 (cos(phi) X + sin(phi) Y))`.
pub fn equatorial_rotation(phi: f64, theta: f64) -> CMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    let off = Complex64::new(0.0, -s);
    from_rows(&[
        &[Complex64::new(c, 0.0), off * Complex64::from_polar(1.0, -phi)],
        &[off * Complex64::from_polar(1.0, phi), Complex64::new(c, 0.0)],
    ])
}

pub fn rx(theta: f64) -> CMatrix {
    equatorial_rotation(0.0, theta)
}

pub fn ry(theta: f64) -> CMatrix {
    equatorial_rotation(std::f64::consts::FRAC_PI_2, theta)
}

/// `exp(-i theta/2 Z)`.
pub fn rz(theta: f64) -> CMatrix {
    from_rows(&[
        &[Complex64::from_polar(1.0, -theta / 2.0), ZERO],
        &[ZERO, Complex64::from_polar(1.0, theta / 2.0)],
    ])
}

pub fn hadamard() -> CMatrix {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    from_rows(&[&[h, h], &[h, -h]])
}

/// Controlled-Z, `diag(1, 1, 1, -1)`.
pub fn cz() -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, ONE, ONE, -ONE]))
}

/// Lifts an operator acting on `targets` into the full `n_qubits` space.
///
/// `targets[0]` is the most significant qubit of the operator's own basis, so
/// a two-qubit operator written in the `|s1 s0>` basis is embedded with
/// `targets = [1, 0]`.
pub fn embed(op: &CMatrix, targets: &[usize], n_qubits: usize) -> CMatrix {
    let m = targets.len();
    assert_eq!(op.nrows(), 1 << m, "operator size does not match target count");
    if m == n_qubits && targets.iter().enumerate().all(|(k, &q)| q == n_qubits - 1 - k) {
        return op.clone();
    }
    let dim = 1usize << n_qubits;
    let mask: usize = targets.iter().map(|&q| 1usize << q).sum();
    let local = |i: usize| -> usize {
        targets
            .iter()
            .enumerate()
            .map(|(k, &q)| ((i >> q) & 1) << (m - 1 - k))
            .sum()
    };
    CMatrix::from_fn(dim, dim, |i, j| {
        if i & !mask != j & !mask {
            ZERO
        } else {
            op[(local(i), local(j))]
        }
    })
}

/// Phase-invariant overlap `|tr(U^dagger V)| / dim`; equals 1 iff `U` and `V`
/// agree up to a global phase.
pub fn phase_invariant_overlap(u: &CMatrix, v: &CMatrix) -> f64 {
    let dim = u.nrows() as f64;
    (u.adjoint() * v).trace().norm() / dim
}

pub fn equal_up_to_phase(u: &CMatrix, v: &CMatrix, tol: f64) -> bool {
    u.shape() == v.shape() && 1.0 - phase_invariant_overlap(u, v) <= tol
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    frobenius_norm(&(m - m.adjoint()))
}

pub fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues in ascending
/// order; columns of the returned matrix are the eigenvectors.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = symmetrize(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Rebuilds `V diag(values) V^dagger`.
pub fn from_eigen(values: &[f64], vectors: &CMatrix) -> CMatrix {
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| Complex64::new(v, 0.0)),
    ));
    vectors * d * vectors.adjoint()
}

/// Principal square root of a positive semidefinite Hermitian matrix;
/// negative eigenvalues are clipped to zero.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let roots: Vec<f64> = values.iter().map(|&v| v.max(0.0).sqrt()).collect();
    from_eigen(&roots, &vectors)
}

/// Euclidean projection of `values` onto the probability simplex.
pub fn project_to_simplex(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        cumulative += v;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if v - candidate > 0.0 {
            shift = candidate;
        }
    }
    values.iter().map(|&v| (v - shift).max(0.0)).collect()
}
