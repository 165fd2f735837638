use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

/// Native operations of the two-qubit processor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GateKind {
    /// Idle (identity) for the gate's duration.
    I,
    /// `X(+pi/2)`.
    X90,
    /// `X(-pi/2)`.
    X90m,
    /// `X(pi)`.
    X180,
    /// Zero-duration phase-frame update by the given angle (radians).
    VirtualZ(f64),
    Cz,
    /// `X(pi)` on the target iff the control is in `control_state`.
    Crot { control_state: u8 },
}

impl GateKind {
    /// Nominal rotation angle of a physical X pulse.
    pub fn x_angle(self) -> Option<f64> {
        match self {
            GateKind::X90 => Some(FRAC_PI_2),
            GateKind::X90m => Some(-FRAC_PI_2),
            GateKind::X180 => Some(PI),
            _ => None,
        }
    }

    pub fn is_virtual(self) -> bool {
        matches!(self, GateKind::VirtualZ(_))
    }

    pub fn is_x_pulse(self) -> bool {
        self.x_angle().is_some()
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cz | GateKind::Crot { .. } => 2,
            _ => 1,
        }
    }
}

/// A native gate placed on specific qubits.
///
/// For `Crot` the qubits are `[control, target]`; for `Cz` the order is
/// irrelevant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NativeGate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub duration_ns: f64,
}

impl NativeGate {
    pub fn new(kind: GateKind, qubits: Vec<usize>, duration_ns: f64) -> Self {
        let duration_ns = if kind.is_virtual() { 0.0 } else { duration_ns };
        Self { kind, qubits, duration_ns }
    }

    pub fn virtual_z(qubit: usize, theta: f64) -> Self {
        Self::new(GateKind::VirtualZ(theta), vec![qubit], 0.0)
    }

    pub fn idle(qubit: usize, duration_ns: f64) -> Self {
        Self::new(GateKind::I, vec![qubit], duration_ns)
    }
}

/// Gate durations in nanoseconds, per qubit for single-qubit pulses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateTimes {
    /// X90 duration per qubit; X180 takes twice as long.
    pub x90_ns: Vec<f64>,
    pub cz_ns: f64,
    /// CROT duration; defaults to an X180 on the target when absent.
    #[serde(default)]
    pub crot_ns: Option<f64>,
}

impl Default for GateTimes {
    fn default() -> Self {
        Self { x90_ns: vec![84.0, 112.0], cz_ns: 96.0, crot_ns: None }
    }
}

impl GateTimes {
    pub fn single_qubit(x90_ns: f64) -> Self {
        Self { x90_ns: vec![x90_ns], cz_ns: 0.0, crot_ns: None }
    }

    fn x90_time(&self, q: usize) -> f64 {
        self.x90_ns.get(q).copied().unwrap_or(self.x90_ns[0])
    }

    pub fn duration(&self, kind: GateKind, qubits: &[usize]) -> f64 {
        match kind {
            GateKind::X90 | GateKind::X90m => self.x90_time(qubits[0]),
            GateKind::X180 => 2.0 * self.x90_time(qubits[0]),
            GateKind::VirtualZ(_) | GateKind::I => 0.0,
            GateKind::Cz => self.cz_ns,
            GateKind::Crot { .. } => self.crot_ns.unwrap_or(2.0 * self.x90_time(qubits[1])),
        }
    }

    pub fn gate(&self, kind: GateKind, qubits: Vec<usize>) -> NativeGate {
        let duration = self.duration(kind, &qubits);
        NativeGate::new(kind, qubits, duration)
    }

    pub fn x90(&self, q: usize) -> NativeGate {
        self.gate(GateKind::X90, vec![q])
    }

    pub fn x90m(&self, q: usize) -> NativeGate {
        self.gate(GateKind::X90m, vec![q])
    }

    pub fn x180(&self, q: usize) -> NativeGate {
        self.gate(GateKind::X180, vec![q])
    }

    pub fn cz(&self) -> NativeGate {
        self.gate(GateKind::Cz, vec![1, 0])
    }

    pub fn crot(&self, control: usize, target: usize, control_state: u8) -> NativeGate {
        self.gate(GateKind::Crot { control_state }, vec![control, target])
    }
}
