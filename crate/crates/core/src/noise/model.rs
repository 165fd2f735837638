use serde::{Deserialize, Serialize};

use super::channels::{depolarizing_channel, depolarizing_parameter, relaxation_channel};
use super::confusion::ConfusionMatrix;
use crate::algebra::{GateKind, GateTimes, NativeGate, QuantumChannel};
use crate::{Error, Result};

/// Incoherent and coherent error parameters of one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitNoise {
    /// Energy relaxation time in seconds; `None` disables relaxation.
    pub t1_s: Option<f64>,
    /// Markovian pure-dephasing rate in 1/s.
    pub dephasing_rate: f64,
    /// Standard deviation of the quasi-static detuning in Hz.
    pub sigma_f_hz: f64,
    /// Relative X-pulse amplitude error: a nominal angle `a` executes as
    /// `a * (1 + overrotation)`.
    pub overrotation: f64,
}

impl QubitNoise {
    pub const IDEAL: QubitNoise = QubitNoise { t1_s: None, dephasing_rate: 0.0, sigma_f_hz: 0.0, overrotation: 0.0 };

    /// Markovian coherence time `1 / (Gamma + 1 / (2 T1))`, infinite when
    /// neither process is active.
    pub fn t2_s(&self) -> f64 {
        let rate = self.dephasing_rate + self.t1_s.map_or(0.0, |t1| 0.5 / t1);
        if rate > 0.0 {
            1.0 / rate
        } else {
            f64::INFINITY
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(t1) = self.t1_s {
            if !(t1 > 0.0) {
                return Err(Error::invalid(format!("T1 must be positive, got {t1}")));
            }
        }
        if !(self.dephasing_rate >= 0.0) || !self.dephasing_rate.is_finite() {
            return Err(Error::invalid(format!("dephasing rate must be non-negative, got {}", self.dephasing_rate)));
        }
        if !(self.sigma_f_hz >= 0.0) || !self.sigma_f_hz.is_finite() {
            return Err(Error::invalid(format!("sigma_f must be non-negative, got {}", self.sigma_f_hz)));
        }
        if !self.overrotation.is_finite() {
            return Err(Error::invalid("overrotation must be finite"));
        }
        Ok(())
    }
}

/// Noise acting on a one- or two-qubit register.
///
/// Each physical pulse is followed by its qubit's pulse channel; CZ and CROT
/// are followed by their two-qubit channels. After every layer each qubit
/// relaxes for the layer duration. Readout goes through the confusion matrix.
/// Quasi-static detuning is not part of gate simulation; the coherence
/// experiments draw it explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    label: String,
    qubits: Vec<QubitNoise>,
    times: GateTimes,
    pulse: Vec<QuantumChannel>,
    cz: QuantumChannel,
    crot: QuantumChannel,
    readout: ConfusionMatrix,
    parity_flip: f64,
}

impl NoiseModel {
    pub fn ideal(n_qubits: usize) -> Self {
        assert!(n_qubits == 1 || n_qubits == 2, "one or two qubits supported");
        let times = if n_qubits == 1 { GateTimes::single_qubit(GateTimes::default().x90_ns[0]) } else { GateTimes::default() };
        Self {
            label: "ideal".into(),
            qubits: vec![QubitNoise::IDEAL; n_qubits],
            times,
            pulse: vec![QuantumChannel::identity(1); n_qubits],
            cz: QuantumChannel::identity(2),
            crot: QuantumChannel::identity(2),
            readout: ConfusionMatrix::identity(1 << n_qubits),
            parity_flip: 0.0,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn qubit(&self, q: usize) -> &QubitNoise {
        &self.qubits[q]
    }

    pub fn gate_times(&self) -> &GateTimes {
        &self.times
    }

    pub fn readout(&self) -> &ConfusionMatrix {
        &self.readout
    }

    pub fn parity_flip(&self) -> f64 {
        self.parity_flip
    }

    pub fn overrotation(&self, q: usize) -> f64 {
        self.qubits.get(q).map_or(0.0, |n| n.overrotation)
    }

    pub fn pulse_channel(&self, q: usize) -> &QuantumChannel {
        &self.pulse[q]
    }

    pub fn cz_channel(&self) -> &QuantumChannel {
        &self.cz
    }

    pub fn crot_channel(&self) -> &QuantumChannel {
        &self.crot
    }

    /// Channel applied right after `gate`, if any.
    pub fn gate_channel(&self, gate: &NativeGate) -> Option<&QuantumChannel> {
        let ch = match gate.kind {
            GateKind::X90 | GateKind::X90m | GateKind::X180 => self.pulse.get(gate.qubits[0])?,
            GateKind::Cz => &self.cz,
            GateKind::Crot { .. } => &self.crot,
            GateKind::I | GateKind::VirtualZ(_) => return None,
        };
        (!ch.is_identity()).then_some(ch)
    }

    /// Relaxation of qubit `q` over `duration_ns`, or `None` when the qubit
    /// does not relax.
    pub fn idle_channel(&self, q: usize, duration_ns: f64) -> Result<Option<QuantumChannel>> {
        let n = &self.qubits[q];
        if n.t1_s.is_none() && n.dephasing_rate == 0.0 {
            return Ok(None);
        }
        let t1 = n.t1_s.unwrap_or(f64::INFINITY);
        relaxation_channel(t1, n.t2_s(), duration_ns * 1e-9).map(Some)
    }

    /// The model restricted to qubit `q`, with the readout marginalized.
    pub fn single_qubit(&self, q: usize) -> Result<NoiseModel> {
        if q >= self.n_qubits() {
            return Err(Error::invalid(format!("no qubit {q} in a {}-qubit model", self.n_qubits())));
        }
        if self.n_qubits() == 1 {
            return Ok(self.clone());
        }
        Ok(NoiseModel {
            label: format!("{}/Q{q}", self.label),
            qubits: vec![self.qubits[q]],
            times: GateTimes { x90_ns: vec![self.times.x90_ns[q]], ..self.times.clone() },
            pulse: vec![self.pulse[q].clone()],
            cz: QuantumChannel::identity(2),
            crot: QuantumChannel::identity(2),
            readout: self.readout.marginal(q)?,
            parity_flip: self.parity_flip,
        })
    }

    /// Copy of the model with perfect readout.
    pub fn without_readout(&self) -> NoiseModel {
        NoiseModel { readout: ConfusionMatrix::identity(self.readout.dim()), ..self.clone() }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_gate_times(mut self, times: GateTimes) -> Result<Self> {
        if times.x90_ns.len() != self.n_qubits() {
            return Err(Error::DimensionMismatch { expected: self.n_qubits(), got: times.x90_ns.len() });
        }
        self.times = times;
        Ok(self)
    }

    pub fn with_qubit(mut self, q: usize, noise: QubitNoise) -> Result<Self> {
        self.check_qubit(q)?;
        noise.validate()?;
        self.qubits[q] = noise;
        Ok(self)
    }

    pub fn with_relaxation(self, q: usize, t1_s: Option<f64>, dephasing_rate: f64) -> Result<Self> {
        self.check_qubit(q)?;
        let noise = QubitNoise { t1_s, dephasing_rate, ..self.qubits[q] };
        self.with_qubit(q, noise)
    }

    pub fn with_quasi_static(self, q: usize, sigma_f_hz: f64) -> Result<Self> {
        self.check_qubit(q)?;
        let noise = QubitNoise { sigma_f_hz, ..self.qubits[q] };
        self.with_qubit(q, noise)
    }

    pub fn with_overrotation(self, q: usize, overrotation: f64) -> Result<Self> {
        self.check_qubit(q)?;
        let noise = QubitNoise { overrotation, ..self.qubits[q] };
        self.with_qubit(q, noise)
    }

    pub fn with_pulse_channel(mut self, q: usize, channel: QuantumChannel) -> Result<Self> {
        self.check_qubit(q)?;
        if channel.n_qubits() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: channel.n_qubits() });
        }
        self.pulse[q] = channel;
        Ok(self)
    }

    pub fn with_pulse_depolarizing(self, q: usize, p: f64) -> Result<Self> {
        self.with_pulse_channel(q, depolarizing_channel(p, 1)?)
    }

    pub fn with_cz_channel(mut self, channel: QuantumChannel) -> Result<Self> {
        self.require_two_qubit_channel(&channel)?;
        self.cz = channel;
        Ok(self)
    }

    pub fn with_crot_channel(mut self, channel: QuantumChannel) -> Result<Self> {
        self.require_two_qubit_channel(&channel)?;
        self.crot = channel;
        Ok(self)
    }

    pub fn with_readout(mut self, readout: ConfusionMatrix) -> Result<Self> {
        if readout.dim() != 1 << self.n_qubits() {
            return Err(Error::DimensionMismatch { expected: 1 << self.n_qubits(), got: readout.dim() });
        }
        self.readout = readout;
        Ok(self)
    }

    pub fn with_parity_flip(mut self, q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::invalid(format!("parity flip probability {q} outside [0, 1]")));
        }
        self.parity_flip = q;
        Ok(self)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits() {
            return Err(Error::invalid(format!("no qubit {q} in a {}-qubit model", self.n_qubits())));
        }
        Ok(())
    }

    fn require_two_qubit_channel(&self, channel: &QuantumChannel) -> Result<()> {
        if self.n_qubits() != 2 {
            return Err(Error::invalid("two-qubit channel on a single-qubit model"));
        }
        if channel.n_qubits() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: channel.n_qubits() });
        }
        Ok(())
    }

    /// Serializable digest of the model for run records.
    pub fn summary(&self) -> NoiseSummary {
        let two = self.n_qubits() == 2;
        NoiseSummary {
            label: self.label.clone(),
            qubits: self.qubits.clone(),
            gate_times: self.times.clone(),
            pulse_depolarizing: self.pulse.iter().map(|c| 1.0 - depolarizing_parameter(c)).collect(),
            cz_depolarizing: two.then(|| 1.0 - depolarizing_parameter(&self.cz)),
            crot_depolarizing: two.then(|| 1.0 - depolarizing_parameter(&self.crot)),
            readout: self.readout.clone(),
            parity_flip: self.parity_flip,
        }
    }
}

/// Plain-data digest of a [`NoiseModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSummary {
    pub label: String,
    pub qubits: Vec<QubitNoise>,
    pub gate_times: GateTimes,
    /// Depolarizing strength `p` equivalent to each pulse channel.
    pub pulse_depolarizing: Vec<f64>,
    pub cz_depolarizing: Option<f64>,
    pub crot_depolarizing: Option<f64>,
    pub readout: ConfusionMatrix,
    pub parity_flip: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_has_no_channels() {
        let nm = NoiseModel::ideal(2);
        let t = nm.gate_times().clone();
        assert!(nm.gate_channel(&t.x90(0)).is_none());
        assert!(nm.gate_channel(&t.cz()).is_none());
        assert!(nm.idle_channel(1, 100.0).unwrap().is_none());
        assert!(nm.readout().is_identity());
    }

    #[test]
    fn t2_never_exceeds_twice_t1() {
        let nm = NoiseModel::ideal(1).with_relaxation(0, Some(1e-3), 0.0).unwrap();
        assert!((nm.qubit(0).t2_s() - 2e-3).abs() < 1e-15);
        let nm = nm.with_relaxation(0, Some(1e-3), 1e4).unwrap();
        assert!(nm.qubit(0).t2_s() < 2e-3);
    }

    #[test]
    fn rejects_negative_rates() {
        assert!(NoiseModel::ideal(1).with_quasi_static(0, -1.0).is_err());
        assert!(NoiseModel::ideal(1).with_relaxation(0, Some(1.0), -1.0).is_err());
        assert!(NoiseModel::ideal(1).with_cz_channel(QuantumChannel::identity(2)).is_err());
    }

    #[test]
    fn single_qubit_restriction() {
        let nm = NoiseModel::ideal(2)
            .with_pulse_depolarizing(1, 0.01)
            .unwrap()
            .with_readout(ConfusionMatrix::symmetric_flip(0.02, 2).unwrap())
            .unwrap();
        let one = nm.single_qubit(1).unwrap();
        assert_eq!(one.n_qubits(), 1);
        assert_eq!(one.gate_times().x90_ns, vec![112.0]);
        assert!((one.readout().get(0, 1) - 0.02).abs() < 1e-12);
        assert!((one.summary().pulse_depolarizing[0] - 0.01).abs() < 1e-12);
    }
}
