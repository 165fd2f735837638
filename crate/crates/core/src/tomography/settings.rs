use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::linalg::{self, CMatrix};
use crate::algebra::{apply_circuit, multinomial, outcome_probabilities, Circuit, DensityMatrix, GateTimes, Pauli, PhaseFrame};
use crate::clifford::{c1_element, compile_c1, enumerate_c1};
use crate::noise::{ConfusionMatrix, NoiseModel};
use crate::{rng, Error, Result};

const STREAM_SETTING: u64 = 0x544f_0001;
const STREAM_CONFUSION: u64 = 0x544f_0002;

/// Local measurement bases `(qubit 1, qubit 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Setting {
    pub q1: Pauli,
    pub q0: Pauli,
}

impl Setting {
    /// The nine settings `{X, Y, Z}^2`, qubit 1 varying slowest.
    pub fn all() -> Vec<Setting> {
        let bases = [Pauli::X, Pauli::Y, Pauli::Z];
        bases.iter().flat_map(|&q1| bases.iter().map(move |&q0| Setting { q1, q0 })).collect()
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.q1.label(), self.q0.label())
    }

    /// Ideal logical rotation applied before the computational-basis readout.
    pub fn rotation(&self) -> CMatrix {
        linalg::kron(&c1_element(basis_change(self.q1)).unitary, &c1_element(basis_change(self.q0)).unitary)
    }

    pub fn circuit(&self, times: &GateTimes) -> Circuit {
        let g1 = compile_c1(basis_change(self.q1), 1, times).gates;
        let g0 = compile_c1(basis_change(self.q0), 0, times).gates;
        let mut c = Circuit::new(2);
        c.push_parallel(&[(1, &g1[..]), (0, &g0[..])]).expect("disjoint qubits");
        c
    }
}

/// Cheapest single-qubit Clifford `U` with `U^dagger Z U = P`, so that a
/// Z readout after `U` measures `P`.
pub fn basis_change(p: Pauli) -> usize {
    let target = p.matrix();
    let z = linalg::pauli_z();
    enumerate_c1()
        .iter()
        .filter(|e| {
            let conj = e.unitary.adjoint() * &z * &e.unitary;
            linalg::frobenius_norm(&(conj - &target)) < 1e-9
        })
        .min_by_key(|e| (usize::from(e.x != crate::clifford::XRotation::None), e.pre_quarter_turns + e.post_quarter_turns))
        .map(|e| e.index)
        .expect("every Pauli is Clifford-conjugate to Z")
}

/// Outcome statistics for the nine tomography settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountsTable {
    pub settings: Vec<Setting>,
    /// Shots per setting; `None` when `frequencies` are exact probabilities.
    pub shots: Option<u64>,
    /// Raw counts per setting (empty without shots).
    pub counts: Vec<Vec<u64>>,
    pub frequencies: Vec<[f64; 4]>,
}

impl CountsTable {
    pub fn from_counts(settings: Vec<Setting>, counts: Vec<Vec<u64>>) -> Result<Self> {
        if settings.len() != counts.len() || counts.iter().any(|c| c.len() != 4) {
            return Err(Error::invalid("one 4-outcome count vector per setting required"));
        }
        let shots = counts.first().map_or(0, |c| c.iter().sum::<u64>());
        if shots == 0 || counts.iter().any(|c| c.iter().sum::<u64>() != shots) {
            return Err(Error::invalid("every setting must have the same positive number of shots"));
        }
        let frequencies = counts
            .iter()
            .map(|c| std::array::from_fn(|r| c[r] as f64 / shots as f64))
            .collect();
        Ok(Self { settings, shots: Some(shots), counts, frequencies })
    }

    pub fn from_probabilities(settings: Vec<Setting>, frequencies: Vec<[f64; 4]>) -> Self {
        Self { settings, shots: None, counts: Vec::new(), frequencies }
    }

    /// Statistical weight of each outcome: counts, or probabilities when exact.
    pub(crate) fn weights(&self) -> Vec<[f64; 4]> {
        if self.counts.is_empty() {
            self.frequencies.clone()
        } else {
            self.counts.iter().map(|c| std::array::from_fn(|r| c[r] as f64)).collect()
        }
    }
}

/// Prepares `|00>`, runs `prep`, then measures every setting through the
/// model's readout. `shots = None` returns exact outcome probabilities.
pub fn measure_pauli_settings(prep: &Circuit, shots: Option<u64>, nm: &NoiseModel, seed: u64) -> Result<CountsTable> {
    if prep.n_qubits() != 2 || nm.n_qubits() != 2 {
        return Err(Error::invalid("tomography runs on two qubits"));
    }
    if shots == Some(0) {
        return Err(Error::invalid("shots must be positive"));
    }
    let mut frame = PhaseFrame::new(2);
    let prepared = apply_circuit(&DensityMatrix::basis(2, 0), prep, Some(nm), &mut frame)?;
    measure_settings(&prepared, &frame, shots, nm, seed)
}

/// Measures every setting on a given state, with the pre-rotations and
/// readout of `nm`. The state is taken to carry a zero phase frame.
pub fn measure_state_settings(
    rho: &DensityMatrix,
    shots: Option<u64>,
    nm: &NoiseModel,
    seed: u64,
) -> Result<CountsTable> {
    if rho.n_qubits() != 2 || nm.n_qubits() != 2 {
        return Err(Error::invalid("tomography runs on two qubits"));
    }
    if shots == Some(0) {
        return Err(Error::invalid("shots must be positive"));
    }
    rho.require_physical()?;
    measure_settings(rho, &PhaseFrame::new(2), shots, nm, seed)
}

fn measure_settings(
    prepared: &DensityMatrix,
    frame: &PhaseFrame,
    shots: Option<u64>,
    nm: &NoiseModel,
    seed: u64,
) -> Result<CountsTable> {
    let settings = Setting::all();
    let probs: Vec<Vec<f64>> = settings
        .par_iter()
        .map(|s| {
            let mut f = frame.clone();
            let rotated = apply_circuit(prepared, &s.circuit(nm.gate_times()), Some(nm), &mut f)?;
            outcome_probabilities(&rotated, Some(nm.readout()))
        })
        .collect::<Result<_>>()?;
    match shots {
        None => Ok(CountsTable::from_probabilities(
            settings,
            probs.iter().map(|p| std::array::from_fn(|r| p[r])).collect(),
        )),
        Some(n) => {
            let counts = probs
                .iter()
                .enumerate()
                .map(|(k, p)| multinomial(&mut rng::stream(seed, &[STREAM_SETTING, k as u64]), p, n))
                .collect();
            CountsTable::from_counts(settings, counts)
        }
    }
}

/// Measures the readout confusion matrix by preparing each basis state with
/// half-turn pulses and recording the reported outcomes.
pub fn estimate_confusion(nm: &NoiseModel, shots: Option<u64>, seed: u64) -> Result<ConfusionMatrix> {
    if nm.n_qubits() != 2 {
        return Err(Error::invalid("confusion estimation runs on two qubits"));
    }
    let times = nm.gate_times();
    let rows = (0..4usize)
        .map(|i| {
            let flips: Vec<_> = [1usize, 0].iter().filter(|&&q| i >> q & 1 == 1).map(|&q| times.x180(q)).collect();
            let mut c = Circuit::new(2);
            if !flips.is_empty() {
                c.push_layer(flips)?;
            }
            let rho = apply_circuit(&DensityMatrix::basis(2, 0), &c, Some(nm), &mut PhaseFrame::new(2))?;
            let p = outcome_probabilities(&rho, Some(nm.readout()))?;
            Ok(match shots {
                None => p,
                Some(n) => multinomial(&mut rng::stream(seed, &[STREAM_CONFUSION, i as u64]), &p, n)
                    .iter()
                    .map(|&c| c as f64 / n as f64)
                    .collect(),
            })
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    ConfusionMatrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_changes_measure_the_right_pauli() {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            let u = &c1_element(basis_change(p)).unitary;
            let back = u.adjoint() * linalg::pauli_z() * u;
            assert!(linalg::frobenius_norm(&(back - p.matrix())) < 1e-9);
        }
        assert_eq!(basis_change(Pauli::Z), 0);
    }

    #[test]
    fn ground_state_zz_setting() {
        let t = measure_pauli_settings(&Circuit::new(2), Some(1000), &NoiseModel::ideal(2), 1).unwrap();
        let zz = t.settings.iter().position(|s| s.label() == "ZZ").unwrap();
        assert_eq!(t.counts[zz], vec![1000, 0, 0, 0]);
    }

    #[test]
    fn ideal_confusion_is_identity() {
        let a = estimate_confusion(&NoiseModel::ideal(2), Some(500), 3).unwrap();
        assert!(a.is_identity());
    }
}
