//! Circuit execution with virtual-Z phase frames.
//!
//! Each qubit carries a phase register. `VirtualZ(theta)` adds `theta` to the
//! register of its qubit and costs no time. A physical X pulse of angle
//! `alpha` on a qubit whose register holds `phi` is executed as a rotation
//! about the equatorial axis at azimuth `phi`, i.e.
//! `Rz(phi) Rx(alpha) Rz(-phi)`. Diagonal gates (CZ) commute with the frame.
//!
//! Consequently the state produced by a circuit equals
//! `Rz(Phi) U_logical |psi>`, where `Phi` is the final register content and
//! `U_logical` is the product in which every `VirtualZ(theta)` acts as
//! `Rz(-theta)`. The two differ only by a Z rotation, so computational-basis
//! statistics never depend on the frame.

use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use super::gate::{GateKind, NativeGate};
use super::linalg::{self, CMatrix};
use super::state::DensityMatrix;
use crate::noise::NoiseModel;
use crate::{Error, Result};

/// Per-qubit virtual-Z phase registers, in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseFrame {
    phases: Vec<f64>,
}

impl PhaseFrame {
    /// All registers reset to zero.
    pub fn new(n_qubits: usize) -> Self {
        Self { phases: vec![0.0; n_qubits] }
    }

    pub fn phase(&self, qubit: usize) -> f64 {
        self.phases[qubit]
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn advance(&mut self, qubit: usize, theta: f64) {
        self.phases[qubit] = (self.phases[qubit] + theta).rem_euclid(std::f64::consts::TAU);
    }

    /// `Rz(phi_1) (x) Rz(phi_0)`: maps logical to physical coordinates.
    pub fn rotation(&self) -> CMatrix {
        let n = self.phases.len();
        (0..n)
            .rev()
            .map(|q| linalg::rz(self.phases[q]))
            .reduce(|acc, r| linalg::kron(&acc, &r))
            .expect("at least one qubit")
    }
}

fn gate_unitary(gate: &NativeGate, frame: &PhaseFrame, overrotation: &dyn Fn(usize) -> f64) -> Option<CMatrix> {
    match gate.kind {
        GateKind::I | GateKind::VirtualZ(_) => None,
        GateKind::X90 | GateKind::X90m | GateKind::X180 => {
            let q = gate.qubits[0];
            let angle = gate.kind.x_angle().unwrap() * (1.0 + overrotation(q));
            Some(linalg::equatorial_rotation(frame.phase(q), angle))
        }
        GateKind::Cz => Some(linalg::cz()),
        GateKind::Crot { control_state } => {
            let target = gate.qubits[1];
            let flip = linalg::equatorial_rotation(
                frame.phase(target),
                std::f64::consts::PI * (1.0 + overrotation(target)),
            );
            // two-qubit operator in the [control, target] basis
            let mut u = CMatrix::zeros(4, 4);
            let active = (control_state & 1) as usize;
            for c in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        let value = if c == active { flip[(i, j)] } else if i == j { linalg::ONE } else { linalg::ZERO };
                        u[(2 * c + i, 2 * c + j)] = value;
                    }
                }
            }
            Some(u)
        }
    }
}

fn check_frame(frame: &PhaseFrame, n_qubits: usize) -> Result<()> {
    if frame.phases.len() != n_qubits {
        return Err(Error::DimensionMismatch { expected: n_qubits, got: frame.phases.len() });
    }
    Ok(())
}

/// Runs `circuit` on `rho`, updating `frame` in place.
///
/// With `noise` present, each gate is followed by its gate channel and each
/// layer of nonzero duration by idle relaxation on every qubit.
pub fn apply_circuit(
    rho: &DensityMatrix,
    circuit: &Circuit,
    noise: Option<&NoiseModel>,
    frame: &mut PhaseFrame,
) -> Result<DensityMatrix> {
    let n = circuit.n_qubits();
    if rho.n_qubits() != n {
        return Err(Error::DimensionMismatch { expected: 1 << n, got: rho.dim() });
    }
    if let Some(nm) = noise {
        if nm.n_qubits() != n {
            return Err(Error::DimensionMismatch { expected: n, got: nm.n_qubits() });
        }
    }
    check_frame(frame, n)?;
    let overrotation = |q: usize| noise.map_or(0.0, |nm| nm.overrotation(q));
    let mut m = rho.matrix().clone();
    for layer in circuit.layers() {
        for gate in &layer.gates {
            if let GateKind::VirtualZ(theta) = gate.kind {
                frame.advance(gate.qubits[0], theta);
                continue;
            }
            if let Some(u) = gate_unitary(gate, frame, &overrotation) {
                let full = linalg::embed(&u, &gate.qubits, n);
                m = &full * &m * full.adjoint();
            }
            if let Some(nm) = noise {
                if let Some(ch) = nm.gate_channel(gate) {
                    let targets: Vec<usize> = if ch.n_qubits() == 2 { vec![1, 0] } else { gate.qubits.clone() };
                    m = ch.apply_matrix(&m, &targets, n);
                }
            }
        }
        if let Some(nm) = noise {
            let duration = layer.duration_ns();
            if duration > 0.0 {
                for q in 0..n {
                    if let Some(ch) = nm.idle_channel(q, duration)? {
                        m = ch.apply_matrix(&m, &[q], n);
                    }
                }
            }
        }
    }
    Ok(DensityMatrix::from_hermitian(linalg::symmetrize(&m)))
}

/// Noiseless physical unitary of `circuit`, starting from (and updating)
/// `frame`.
pub fn circuit_unitary(circuit: &Circuit, frame: &mut PhaseFrame) -> Result<CMatrix> {
    let n = circuit.n_qubits();
    check_frame(frame, n)?;
    let mut u = linalg::identity(1 << n);
    for layer in circuit.layers() {
        for gate in &layer.gates {
            if let GateKind::VirtualZ(theta) = gate.kind {
                frame.advance(gate.qubits[0], theta);
            } else if let Some(g) = gate_unitary(gate, frame, &|_| 0.0) {
                u = linalg::embed(&g, &gate.qubits, n) * u;
            }
        }
    }
    Ok(u)
}

/// Frame-resolved unitary of `circuit`: every `VirtualZ(theta)` counts as
/// `Rz(-theta)` and the final frame rotation is removed.
pub fn logical_unitary(circuit: &Circuit) -> CMatrix {
    let mut frame = PhaseFrame::new(circuit.n_qubits());
    let physical = circuit_unitary(circuit, &mut frame).expect("fresh frame has matching width");
    frame.rotation().adjoint() * physical
}

/// Applies an ideal logical unitary `w` to a state that carries `frame`,
/// i.e. the physical operation `F w F^dagger`.
pub fn apply_logical_unitary(rho: &DensityMatrix, w: &CMatrix, frame: &PhaseFrame) -> Result<DensityMatrix> {
    if w.nrows() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: w.nrows() });
    }
    check_frame(frame, rho.n_qubits())?;
    let f = frame.rotation();
    let physical = &f * w * f.adjoint();
    let m = &physical * rho.matrix() * physical.adjoint();
    Ok(DensityMatrix::from_hermitian(linalg::symmetrize(&m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gate::GateTimes;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn bit_flip() {
        let t = GateTimes::single_qubit(84.0);
        let mut c = Circuit::new(1);
        c.push(t.x180(0)).unwrap();
        let out = apply_circuit(&DensityMatrix::basis(1, 0), &c, None, &mut PhaseFrame::new(1)).unwrap();
        assert!((out.populations()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn frame_rotates_pulse_axis() {
        let t = GateTimes::single_qubit(84.0);
        let mut c = Circuit::new(1);
        c.push(NativeGate::virtual_z(0, FRAC_PI_2)).unwrap();
        c.push(t.x90(0)).unwrap();
        let out = apply_circuit(&DensityMatrix::basis(1, 0), &c, None, &mut PhaseFrame::new(1)).unwrap();
        // explicit 2x2 algebra: Ry(pi/2)|0> = (|0> + |1>)/sqrt(2)
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = DensityMatrix::from_pure(&[num_complex::Complex64::new(h, 0.0), num_complex::Complex64::new(h, 0.0)]).unwrap();
        assert!(linalg::frobenius_norm(&(out.matrix() - expected.matrix())) < 1e-12);
    }

    #[test]
    fn physical_equals_frame_times_logical() {
        let t = GateTimes::default();
        let mut c = Circuit::new(2);
        c.push_layer(vec![NativeGate::virtual_z(0, 0.4), NativeGate::virtual_z(1, -1.1)]).unwrap();
        c.push_layer(vec![t.x90(0), t.x180(1)]).unwrap();
        c.push(t.cz()).unwrap();
        c.push(NativeGate::virtual_z(0, PI / 3.0)).unwrap();
        c.push(t.crot(1, 0, 1)).unwrap();
        c.push(t.x90m(1)).unwrap();
        let mut frame = PhaseFrame::new(2);
        let physical = circuit_unitary(&c, &mut frame).unwrap();
        let logical = logical_unitary(&c);
        assert!(linalg::frobenius_norm(&(physical - frame.rotation() * logical)) < 1e-12);
    }
}
