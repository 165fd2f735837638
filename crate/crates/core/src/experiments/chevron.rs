use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Excited-state probability of a driven qubit over drive detuning and pulse
/// length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChevronMap {
    pub rabi_hz: f64,
    pub detunings_hz: Vec<f64>,
    pub durations_s: Vec<f64>,
    /// `probability[i][j]` belongs to `detunings_hz[i]` and `durations_s[j]`.
    pub probability: Vec<Vec<f64>>,
}

impl ChevronMap {
    /// Pulse length with the highest excitation on the row closest to
    /// resonance.
    pub fn resonant_pi_time(&self) -> f64 {
        let row = self
            .detunings_hz
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .expect("non-empty map");
        let (j, _) = self.probability[row]
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty row");
        self.durations_s[j]
    }
}

/// Rabi frequency of a drive whose quarter turn takes `x90_ns`.
pub fn rabi_frequency_from_x90(x90_ns: f64) -> f64 {
    1.0 / (4.0 * x90_ns * 1e-9)
}

/// Rabi formula `P = W^2/(W^2+D^2) sin^2(pi sqrt(W^2+D^2) t)` over a grid.
pub fn rabi_chevron(rabi_hz: f64, detunings_hz: &[f64], durations_s: &[f64]) -> Result<ChevronMap> {
    if !(rabi_hz > 0.0 && rabi_hz.is_finite()) {
        return Err(Error::invalid("Rabi frequency must be positive"));
    }
    if detunings_hz.is_empty() || durations_s.is_empty() {
        return Err(Error::invalid("chevron grid is empty"));
    }
    if durations_s.iter().any(|t| *t < 0.0) {
        return Err(Error::invalid("pulse lengths must be non-negative"));
    }
    let w2 = rabi_hz * rabi_hz;
    let probability = detunings_hz
        .iter()
        .map(|d| {
            let g2 = w2 + d * d;
            durations_s.iter().map(|t| w2 / g2 * (PI * g2.sqrt() * t).sin().powi(2)).collect()
        })
        .collect();
    Ok(ChevronMap {
        rabi_hz,
        detunings_hz: detunings_hz.to_vec(),
        durations_s: durations_s.to_vec(),
        probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_time_from_x90() {
        let omega = rabi_frequency_from_x90(84.0);
        let durations: Vec<f64> = (0..=400).map(|i| i as f64 * 1e-9).collect();
        let map = rabi_chevron(omega, &[-2e6, 0.0, 2e6], &durations).unwrap();
        assert!((map.resonant_pi_time() - 168e-9).abs() < 1.5e-9);
        assert_eq!(map.probability[0], map.probability[2]);
    }
}
