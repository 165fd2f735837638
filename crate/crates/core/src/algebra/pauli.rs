use std::fmt;

use serde::{Deserialize, Serialize};

use super::linalg::{self, CMatrix};
use super::state::DensityMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::I => linalg::identity(2),
            Pauli::X => linalg::pauli_x(),
            Pauli::Y => linalg::pauli_y(),
            Pauli::Z => linalg::pauli_z(),
        }
    }

    pub fn label(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_label(c: char) -> Option<Pauli> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Two-qubit Pauli string, written with qubit 1 first (`"XZ"` is `X` on
/// qubit 1 and `Z` on qubit 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliString {
    pub q1: Pauli,
    pub q0: Pauli,
}

impl PauliString {
    pub const fn new(q1: Pauli, q0: Pauli) -> Self {
        Self { q1, q0 }
    }

    /// All 16 strings, `II` first, ordered `4 * q1 + q0`.
    pub fn all() -> [PauliString; 16] {
        std::array::from_fn(|k| PauliString::new(Pauli::ALL[k / 4], Pauli::ALL[k % 4]))
    }

    pub fn index(self) -> usize {
        4 * self.q1 as usize + self.q0 as usize
    }

    pub fn is_identity(self) -> bool {
        self.q1 == Pauli::I && self.q0 == Pauli::I
    }

    pub fn matrix(self) -> CMatrix {
        linalg::kron(&self.q1.matrix(), &self.q0.matrix())
    }

    pub fn parse(label: &str) -> Option<Self> {
        let mut chars = label.chars();
        let q1 = Pauli::from_label(chars.next()?)?;
        let q0 = Pauli::from_label(chars.next()?)?;
        chars.next().is_none().then_some(PauliString::new(q1, q0))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.q1.label(), self.q0.label())
    }
}

/// `Re tr(rho sigma)` for a two-qubit state.
pub fn pauli_expectation(rho: &DensityMatrix, sigma: PauliString) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    Ok(trace_product(rho.matrix(), &sigma.matrix()))
}

/// `Re tr(rho P)` for a single-qubit state.
pub fn single_qubit_expectation(rho: &DensityMatrix, p: Pauli) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: rho.dim() });
    }
    Ok(trace_product(rho.matrix(), &p.matrix()))
}

fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    // tr(AB) = sum_ij A_ij B_ji
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixteen_distinct_involutions() {
        let all = PauliString::all();
        for (k, s) in all.iter().enumerate() {
            assert_eq!(s.index(), k);
            let m = s.matrix();
            assert!(linalg::frobenius_norm(&(&m * &m - linalg::identity(4))) < 1e-15);
            let tr = m.trace().norm();
            if s.is_identity() {
                assert!((tr - 4.0).abs() < 1e-15);
            } else {
                assert!(tr < 1e-15);
            }
            for other in &all[k + 1..] {
                assert!(linalg::frobenius_norm(&(other.matrix() - &m)) > 1.0);
            }
        }
        assert_eq!(PauliString::parse("XZ").unwrap().to_string(), "XZ");
        assert!(PauliString::parse("XQ").is_none());
    }

    #[test]
    fn bell_expectations() {
        let bell = DensityMatrix::bell_phi_plus();
        let get = |l: &str| pauli_expectation(&bell, PauliString::parse(l).unwrap()).unwrap();
        assert!((get("II") - 1.0).abs() < 1e-12);
        assert!((get("ZZ") - 1.0).abs() < 1e-12);
        assert!((get("XX") - 1.0).abs() < 1e-12);
        assert!((get("YY") + 1.0).abs() < 1e-12);
        assert!(get("ZI").abs() < 1e-12);
    }

    #[test]
    fn mixed_state_is_traceless_for_non_identity() {
        let mixed = DensityMatrix::maximally_mixed(2);
        for s in PauliString::all() {
            let e = pauli_expectation(&mixed, s).unwrap();
            if s.is_identity() {
                assert!((e - 1.0).abs() < 1e-15);
            } else {
                assert_eq!(e, 0.0);
            }
        }
        assert!(pauli_expectation(&DensityMatrix::basis(1, 0), PauliString::parse("ZZ").unwrap()).is_err());
    }
}
