use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::settings::{CountsTable, Setting};
use crate::algebra::linalg::CMatrix;
use crate::algebra::{pauli_expectation, DensityMatrix, Pauli, PauliString};
use crate::noise::ConfusionMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Exact,
    Raw,
    SpamCorrected,
}

/// The sixteen two-qubit Pauli expectation values, indexed by
/// [`PauliString::index`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationSet {
    pub values: [f64; 16],
    pub provenance: Provenance,
}

impl ExpectationSet {
    pub fn get(&self, sigma: PauliString) -> f64 {
        self.values[sigma.index()]
    }

    /// Pauli-decomposition coefficient `<sigma> / 4`.
    pub fn coefficient(&self, sigma: PauliString) -> f64 {
        self.get(sigma) / 4.0
    }

    /// Pauli strings whose value lies outside `[-1, 1]` by more than `tol`.
    pub fn out_of_bounds(&self, tol: f64) -> Vec<PauliString> {
        PauliString::all().into_iter().filter(|s| self.get(*s).abs() > 1.0 + tol).collect()
    }

    /// Exact expectations of `rho`.
    pub fn of_state(rho: &DensityMatrix) -> Result<Self> {
        let mut values = [0.0; 16];
        for s in PauliString::all() {
            values[s.index()] = pauli_expectation(rho, s)?;
        }
        Ok(Self { values, provenance: Provenance::Exact })
    }
}

fn sign(r: usize, qubit_bit: usize) -> f64 {
    if r >> qubit_bit & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Expectations from per-setting outcome frequencies. With a confusion matrix
/// each setting's distribution is first multiplied by its plain inverse.
///
/// Two-body terms come from their own setting; one-body terms are averaged
/// over the three settings sharing that basis; `<II>` is the mean corrected
/// total probability.
pub fn expectations_from_counts(table: &CountsTable, readout: Option<&ConfusionMatrix>) -> Result<ExpectationSet> {
    if table.settings.len() != table.frequencies.len() {
        return Err(Error::invalid("counts table has mismatched settings"));
    }
    let dists: Vec<[f64; 4]> = match readout {
        None => table.frequencies.clone(),
        Some(a) => {
            if a.dim() != 4 {
                return Err(Error::DimensionMismatch { expected: 4, got: a.dim() });
            }
            table
                .frequencies
                .iter()
                .map(|f| a.correct(f).map(|v| std::array::from_fn(|r| v[r])))
                .collect::<Result<_>>()?
        }
    };
    let mut sums = [0.0; 16];
    let mut counts = [0usize; 16];
    for (setting, dist) in table.settings.iter().zip(&dists) {
        let Setting { q1, q0 } = *setting;
        let mut add = |s: PauliString, f: &dyn Fn(usize) -> f64| {
            sums[s.index()] += (0..4).map(|r| dist[r] * f(r)).sum::<f64>();
            counts[s.index()] += 1;
        };
        add(PauliString::new(q1, q0), &|r| sign(r, 1) * sign(r, 0));
        add(PauliString::new(q1, Pauli::I), &|r| sign(r, 1));
        add(PauliString::new(Pauli::I, q0), &|r| sign(r, 0));
        add(PauliString::new(Pauli::I, Pauli::I), &|_| 1.0);
    }
    if counts.iter().any(|&c| c == 0) {
        return Err(Error::invalid("settings do not cover every Pauli string"));
    }
    let values = std::array::from_fn(|i| sums[i] / counts[i] as f64);
    let provenance = if readout.is_some() { Provenance::SpamCorrected } else { Provenance::Raw };
    Ok(ExpectationSet { values, provenance })
}

/// `rho = sum_sigma <sigma> sigma / 4`. The result is Hermitian but may have
/// negative eigenvalues or a trace different from one.
pub fn linear_reconstruct(e: &ExpectationSet) -> DensityMatrix {
    let mut m = CMatrix::zeros(4, 4);
    for s in PauliString::all() {
        m += s.matrix() * Complex64::new(e.coefficient(s), 0.0);
    }
    DensityMatrix::new(m).expect("Pauli sums with real coefficients are Hermitian")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::linalg;

    #[test]
    fn exact_bell_round_trip() {
        let bell = DensityMatrix::bell_phi_plus();
        let rho = linear_reconstruct(&ExpectationSet::of_state(&bell).unwrap());
        assert!(linalg::frobenius_norm(&(rho.matrix() - bell.matrix())) < 1e-12);
    }

    #[test]
    fn only_identity_gives_maximally_mixed() {
        let mut values = [0.0; 16];
        values[0] = 1.0;
        let rho = linear_reconstruct(&ExpectationSet { values, provenance: Provenance::Exact });
        assert!(linalg::frobenius_norm(&(rho.matrix() - DensityMatrix::maximally_mixed(2).matrix())) < 1e-15);
    }
}
