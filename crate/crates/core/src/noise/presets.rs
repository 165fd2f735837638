//! Temperature presets built from the fixture files in `fixtures/`.
//!
//! Fixtures are compiled into the binary. Setting the environment variable
//! [`FIXTURE_DIR_ENV`] makes the loader read them from that directory instead;
//! a `SHA256SUMS` file next to them is checked when present.

use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::channels::{depolarizing_channel, relaxation_channel};
use super::confusion::ConfusionMatrix;
use super::model::{NoiseModel, QubitNoise};
use crate::algebra::{GateTimes, QuantumChannel};
use crate::{Error, Result};

pub const FIXTURE_DIR_ENV: &str = "SPINQ_FIXTURE_DIR";

const EMBEDDED: &[(&str, &str)] = &[
    ("preset_300mK.toml", include_str!("../../fixtures/preset_300mK.toml")),
    ("preset_740mK.toml", include_str!("../../fixtures/preset_740mK.toml")),
    ("bell_tomography_reference.toml", include_str!("../../fixtures/bell_tomography_reference.toml")),
];
const EMBEDDED_SUMS: &str = include_str!("../../fixtures/SHA256SUMS");

pub const PRESET_LABELS: [&str; 3] = ["ideal", "300mK", "740mK"];

/// Where a fixture was read from and its content hash.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureSource {
    pub name: String,
    pub origin: String,
    pub sha256: String,
}

fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

fn expected_sum(sums: &str, name: &str) -> Option<String> {
    sums.lines().find_map(|line| {
        let mut parts = line.split_whitespace();
        let hash = parts.next()?;
        (parts.next()? == name).then(|| hash.to_string())
    })
}

/// Reads a fixture file by name, honouring the override directory.
pub fn load_fixture_text(name: &str) -> Result<(String, FixtureSource)> {
    let (text, origin, sums) = match std::env::var_os(FIXTURE_DIR_ENV) {
        Some(dir) => {
            let dir = PathBuf::from(dir);
            let path = dir.join(name);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Fixture(format!("cannot read {}: {e}", path.display())))?;
            let sums = std::fs::read_to_string(dir.join("SHA256SUMS")).ok();
            (text, path.display().to_string(), sums)
        }
        None => {
            let text = EMBEDDED
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| Error::Fixture(format!("no embedded fixture `{name}`")))?;
            (text, "embedded".to_string(), Some(EMBEDDED_SUMS.to_string()))
        }
    };
    let sha256 = sha256_hex(text.as_bytes());
    match sums.as_deref().map(|s| expected_sum(s, name)) {
        Some(Some(expected)) if expected != sha256 => {
            return Err(Error::Fixture(format!("checksum mismatch for {name} ({origin})")));
        }
        Some(Some(_)) => {}
        _ => log::warn!("fixture {name} from {origin} has no recorded checksum"),
    }
    Ok((text, FixtureSource { name: name.to_string(), origin, sha256 }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetFixture {
    pub schema: String,
    pub label: String,
    pub temperature_mk: f64,
    pub qubit: Vec<QubitFixture>,
    pub two_qubit: TwoQubitFixture,
    pub readout: ReadoutFixture,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitFixture {
    pub index: usize,
    pub frequency_ghz: f64,
    pub t1_s: f64,
    pub t2_star_s: f64,
    pub t2_echo_s: Option<f64>,
    pub x90_ns: f64,
    pub clifford_fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoQubitFixture {
    pub cz_ns: f64,
    pub cz_fidelity: f64,
    pub cz_fidelity_uncertainty: f64,
    pub bell_fidelity_raw: f64,
    pub bell_fidelity_corrected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutFixture {
    pub confusion: Vec<Vec<f64>>,
}

/// Parsed preset fixture for `label` (`"300mK"` or `"740mK"`).
pub fn preset_fixture(label: &str) -> Result<(PresetFixture, FixtureSource)> {
    if !matches!(label, "300mK" | "740mK") {
        return Err(Error::UnknownPreset(label.to_string()));
    }
    let (text, source) = load_fixture_text(&format!("preset_{label}.toml"))?;
    let fixture: PresetFixture =
        toml::from_str(&text).map_err(|e| Error::Fixture(format!("{}: {e}", source.name)))?;
    if fixture.schema != "spinq-preset/1" {
        return Err(Error::Fixture(format!("{}: unsupported schema `{}`", source.name, fixture.schema)));
    }
    if fixture.qubit.len() != 2 || fixture.qubit.iter().enumerate().any(|(i, q)| q.index != i) {
        return Err(Error::Fixture(format!("{}: expected qubits 0 and 1 in order", source.name)));
    }
    Ok((fixture, source))
}

/// Builds a noise model for `"ideal"`, `"300mK"` or `"740mK"`.
pub fn load_noise_preset(label: &str) -> Result<NoiseModel> {
    if label == "ideal" {
        return Ok(NoiseModel::ideal(2));
    }
    let (fixture, _) = preset_fixture(label)?;
    model_from_fixture(&fixture)
}

/// Dephasing split for one qubit: Markovian rate from the echo time and
/// quasi-static spread from what remains of the Ramsey decay.
///
/// The Ramsey envelope is `exp(-(t / T_s)^2) exp(-t / T2)` with
/// `T_s = 1 / (sqrt(2) pi sigma_f)`. Requiring it to reach `1/e` at `T2*`
/// gives `T_s = T2* / sqrt(1 - T2* / T2)`.
pub fn dephasing_from_times(t1_s: f64, t2_star_s: f64, t2_echo_s: Option<f64>) -> Result<(f64, f64)> {
    let gamma = t2_echo_s.map_or(0.0, |echo| (1.0 / echo - 0.5 / t1_s).max(0.0));
    let t2 = 1.0 / (gamma + 0.5 / t1_s);
    let ratio = t2_star_s / t2;
    if !(ratio < 1.0) {
        return Err(Error::Fixture(format!("T2*={t2_star_s} is not shorter than the Markovian T2={t2}")));
    }
    let t_sigma = t2_star_s / (1.0 - ratio).sqrt();
    let sigma_f = 2f64.sqrt() / (2.0 * PI * t_sigma);
    Ok((gamma, sigma_f))
}

fn unital_decay(channel: &QuantumChannel) -> (f64, f64) {
    // Diagonal Pauli transfer elements: transverse (mean of X and Y) and
    // longitudinal (Z).
    let ptm = |p: &crate::algebra::linalg::CMatrix| -> f64 {
        channel.kraus().iter().map(|k| (p * k * p * k.adjoint()).trace().re).sum::<f64>() / 2.0
    };
    use crate::algebra::linalg::{pauli_x, pauli_y, pauli_z};
    ((ptm(&pauli_x()) + ptm(&pauli_y())) / 2.0, ptm(&pauli_z()))
}

fn relaxation_decays(q: &QubitNoise, seconds: f64) -> Result<(f64, f64)> {
    let t1 = q.t1_s.unwrap_or(f64::INFINITY);
    Ok(unital_decay(&relaxation_channel(t1, q.t2_s(), seconds)?))
}

/// Pulse depolarizing strength giving a per-Clifford RB decay of
/// `2 F - 1` once relaxation during the pulses is accounted for.
///
/// Of the 24 single-qubit Cliffords, 4 need no pulse, 16 one quarter-turn
/// pulse and 4 one half-turn pulse.
pub fn pulse_depolarizing_for_clifford_fidelity(q: &QubitNoise, x90_ns: f64, fidelity: f64) -> Result<f64> {
    let target = 2.0 * fidelity - 1.0;
    let r = |ns: f64| -> Result<f64> {
        let (a, b) = relaxation_decays(q, ns * 1e-9)?;
        Ok((2.0 * a + b) / 3.0)
    };
    let lambda = (24.0 * target - 4.0) / (16.0 * r(x90_ns)? + 4.0 * r(2.0 * x90_ns)?);
    Ok((1.0 - lambda).clamp(0.0, 1.0))
}

/// Two-qubit depolarizing strength giving a gate layer of the requested
/// average fidelity once both qubits relax for `duration_ns`.
pub fn two_qubit_depolarizing_for_fidelity(qubits: &[QubitNoise], duration_ns: f64, fidelity: f64) -> Result<f64> {
    let process = (5.0 * fidelity - 1.0) / 4.0;
    let mut ptm_trace = 1.0;
    for q in qubits {
        let (a, b) = relaxation_decays(q, duration_ns * 1e-9)?;
        ptm_trace *= 1.0 + 2.0 * a + b;
    }
    let lambda = (16.0 * process - 1.0) / (ptm_trace - 1.0);
    Ok((1.0 - lambda).clamp(0.0, 1.0))
}

/// Builds the two-qubit model described by a preset fixture.
pub fn model_from_fixture(fixture: &PresetFixture) -> Result<NoiseModel> {
    let times = GateTimes {
        x90_ns: fixture.qubit.iter().map(|q| q.x90_ns).collect(),
        cz_ns: fixture.two_qubit.cz_ns,
        crot_ns: None,
    };
    let mut nm = NoiseModel::ideal(2).with_label(fixture.label.clone()).with_gate_times(times.clone())?;
    let mut qubits = Vec::with_capacity(2);
    for qf in &fixture.qubit {
        let (gamma, sigma_f) = dephasing_from_times(qf.t1_s, qf.t2_star_s, qf.t2_echo_s)?;
        let noise = QubitNoise { t1_s: Some(qf.t1_s), dephasing_rate: gamma, sigma_f_hz: sigma_f, overrotation: 0.0 };
        let p = pulse_depolarizing_for_clifford_fidelity(&noise, qf.x90_ns, qf.clifford_fidelity)?;
        nm = nm.with_qubit(qf.index, noise)?.with_pulse_depolarizing(qf.index, p)?;
        qubits.push(noise);
    }
    let p_cz = two_qubit_depolarizing_for_fidelity(&qubits, times.cz_ns, fixture.two_qubit.cz_fidelity)?;
    let two = depolarizing_channel(p_cz, 2)?;
    nm = nm
        .with_cz_channel(two.clone())?
        .with_crot_channel(two)?
        .with_readout(ConfusionMatrix::from_rows(fixture.readout.confusion.clone())?)?;
    Ok(nm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_checksums_match() {
        for (name, text) in EMBEDDED {
            assert_eq!(expected_sum(EMBEDDED_SUMS, name).as_deref(), Some(sha256_hex(text.as_bytes()).as_str()), "{name}");
        }
    }

    #[test]
    fn presets_are_cptp() {
        for label in PRESET_LABELS {
            let nm = load_noise_preset(label).unwrap();
            for q in 0..2 {
                assert!(nm.pulse_channel(q).is_cptp());
                if let Some(ch) = nm.idle_channel(q, 500.0).unwrap() {
                    assert!(ch.is_cptp());
                }
            }
            assert!(nm.cz_channel().is_cptp());
            assert!(nm.crot_channel().is_cptp());
        }
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(load_noise_preset("4K"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn readout_matches_fixture_rows() {
        let nm = load_noise_preset("300mK").unwrap();
        let row = &nm.readout().rows()[0];
        let sum = 0.958 + 0.008 + 0.002 + 0.039;
        assert!((row[0] - 0.958 / sum).abs() < 1e-12);
        assert!((row[3] - 0.039 / sum).abs() < 1e-12);
    }

    #[test]
    fn dephasing_split_reproduces_ramsey_time() {
        let (gamma, sigma) = dephasing_from_times(0.065, 4.4e-6, Some(41e-6)).unwrap();
        let t2 = 1.0 / (gamma + 0.5 / 0.065);
        let t = 4.4e-6;
        let envelope = (-2.0 * (PI * sigma * t).powi(2)).exp() * (-t / t2).exp();
        assert!((envelope - (-1.0f64).exp()).abs() < 1e-12);
        assert!((t2 - 41e-6).abs() < 1e-12);
    }

    #[test]
    fn two_qubit_calibration_without_relaxation() {
        let q = [QubitNoise::IDEAL; 2];
        let p = two_qubit_depolarizing_for_fidelity(&q, 96.0, 0.981).unwrap();
        assert!((p - 4.0 * (1.0 - 0.981) / 3.0).abs() < 1e-12);
        let p = pulse_depolarizing_for_clifford_fidelity(&q[0], 84.0, 0.994).unwrap();
        // 20 of 24 Cliffords carry a pulse, so each pulse is slightly worse
        // than the per-Clifford depolarizing strength 2 (1 - F).
        assert!((p - 2.0 * 0.006 * 24.0 / 20.0).abs() < 1e-12);
    }
}
