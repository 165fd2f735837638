//! Calibration of the single-qubit phases picked up during a CZ.
//!
//! For each target qubit the control is prepared in `|0>` or `|1>`, the
//! target is put on the equator, the gate runs, and a second quarter turn in a
//! frame advanced by `theta` maps the accumulated phase onto the population.
//! The target flips fully when `theta` cancels the phase, so the phase is read
//! off a sinusoid fitted to `P(1)` over `theta`.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    apply_circuit, linalg, outcome_probabilities, CMatrix, Circuit, DensityMatrix, NativeGate, PhaseFrame,
    QuantumChannel,
};
use crate::fit::linear_least_squares;
use crate::noise::NoiseModel;
use crate::{rng, Error, Result};

/// Fringes with a peak-to-peak contrast below this are rejected.
pub const MIN_CONTRAST: f64 = 0.1;

/// `CZ (Rz(-phi1) (x) Rz(-phi0))`: a CZ preceded by frame-style phase errors,
/// i.e. `Zv(phi)` on each qubit.
pub fn cz_with_phase_errors(phi1: f64, phi0: f64) -> CMatrix {
    linalg::cz() * linalg::kron(&linalg::rz(-phi1), &linalg::rz(-phi0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseScan {
    pub target: usize,
    pub control_state: u8,
    pub thetas: Vec<f64>,
    pub p1: Vec<f64>,
    pub contrast: f64,
    /// Frame advance that maximizes the flip probability.
    pub theta_star: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CzPhaseCalibration {
    pub phi0: f64,
    pub phi1: f64,
    pub scans: Vec<PhaseScan>,
}

impl CzPhaseCalibration {
    /// Virtual-Z corrections that undo the measured phases.
    pub fn corrections(&self) -> [NativeGate; 2] {
        [NativeGate::virtual_z(1, -self.phi1), NativeGate::virtual_z(0, -self.phi0)]
    }
}

fn wrap(x: f64) -> f64 {
    (x + PI).rem_euclid(TAU) - PI
}

fn scan(
    gate: &QuantumChannel,
    nm: &NoiseModel,
    target: usize,
    control_state: u8,
    points: usize,
    shots: Option<u64>,
    seed: u64,
) -> Result<PhaseScan> {
    let control = 1 - target;
    let gt = nm.gate_times();
    let mut prep = Circuit::new(2);
    let mut first = vec![gt.x90(target)];
    if control_state == 1 {
        first.push(gt.x180(control));
    }
    prep.push_layer(first)?;
    let mut frame = PhaseFrame::new(2);
    let rho = apply_circuit(&DensityMatrix::basis(2, 0), &prep, Some(nm), &mut frame)?;
    let rho = gate.apply(&rho)?;
    let thetas: Vec<f64> = (0..points).map(|k| TAU * k as f64 / points as f64).collect();
    let mut p1 = Vec::with_capacity(points);
    for (k, theta) in thetas.iter().enumerate() {
        let mut c = Circuit::new(2);
        c.push(NativeGate::virtual_z(target, *theta))?;
        c.push(gt.x90(target))?;
        let out = apply_circuit(&rho, &c, Some(nm), &mut frame.clone())?;
        let probs = outcome_probabilities(&out, Some(nm.readout()))?;
        let exact: f64 = (0..4).filter(|i| (i >> target) & 1 == 1).map(|i| probs[i]).sum();
        p1.push(match shots {
            None => exact,
            Some(n) => super::binomial_fraction(
                &mut rng::stream(seed, &[0x435a_0001, target as u64, control_state as u64, k as u64]),
                exact,
                n,
            ),
        });
    }
    let design = DMatrix::from_fn(points, 3, |i, j| match j {
        0 => 1.0,
        1 => thetas[i].cos(),
        _ => thetas[i].sin(),
    });
    let coef = linear_least_squares(&design, &p1)?;
    let contrast = 2.0 * coef[1].hypot(coef[2]);
    if contrast < MIN_CONTRAST {
        return Err(Error::LowContrast { contrast, threshold: MIN_CONTRAST });
    }
    Ok(PhaseScan { target, control_state, thetas, p1, contrast, theta_star: coef[2].atan2(coef[1]) })
}

/// Measures the phases `(phi0, phi1)` of `gate`, a noisy CZ given as a
/// two-qubit channel, so that `gate ~ CZ (Zv(phi1) (x) Zv(phi0))`.
///
/// Both control states are scanned and the two estimates of each phase are
/// combined by a circular mean.
pub fn calibrate_cz_phases(
    gate: &QuantumChannel,
    nm: &NoiseModel,
    points: usize,
    shots: Option<u64>,
    seed: u64,
) -> Result<CzPhaseCalibration> {
    if gate.n_qubits() != 2 || nm.n_qubits() != 2 {
        return Err(Error::invalid("CZ phase calibration needs two qubits"));
    }
    if points < 3 {
        return Err(Error::invalid("a phase scan needs at least three points"));
    }
    if shots == Some(0) {
        return Err(Error::invalid("shots must be positive"));
    }
    let mut scans = Vec::new();
    let mut phases = [0.0; 2];
    for target in 0..2 {
        let mut sum = Complex64::new(0.0, 0.0);
        for control_state in 0..2u8 {
            let s = scan(gate, nm, target, control_state, points, shots, seed)?;
            let estimate = if control_state == 0 { -s.theta_star } else { PI - s.theta_star };
            sum += Complex64::from_polar(s.contrast, estimate);
            scans.push(s);
        }
        phases[target] = wrap(sum.arg());
    }
    Ok(CzPhaseCalibration { phi0: phases[0], phi1: phases[1], scans })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_injected_phases() {
        let gate = QuantumChannel::unitary(cz_with_phase_errors(-0.1 * PI, 0.3 * PI)).unwrap();
        let cal = calibrate_cz_phases(&gate, &NoiseModel::ideal(2), 24, None, 0).unwrap();
        assert!((cal.phi0 - 0.3 * PI).abs() < 1e-9, "{}", cal.phi0);
        assert!((cal.phi1 + 0.1 * PI).abs() < 1e-9, "{}", cal.phi1);
    }

    #[test]
    fn flat_fringe_is_rejected() {
        let nm = NoiseModel::ideal(2).with_pulse_depolarizing(0, 1.0).unwrap().with_pulse_depolarizing(1, 1.0).unwrap();
        let gate = QuantumChannel::unitary(linalg::cz()).unwrap();
        assert!(matches!(calibrate_cz_phases(&gate, &nm, 12, None, 0), Err(Error::LowContrast { .. })));
    }
}
