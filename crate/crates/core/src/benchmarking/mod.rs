//! Clifford randomized benchmarking and interleaved character randomized
//! benchmarking.

mod icrb;
mod rb;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use icrb::{
    analyze_icrb, character_combine, fit_character_decay, fit_characters, icrb_fidelity, run_icrb, run_icrb_pair, CharacterData,
    CharacterFit, IcrbResult,
};
pub use rb::{bootstrap_rb_fidelity, fit_rb, run_clifford_rb, DecayCurve, RbFit};

/// Shared configuration of RB and ICRB runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RbConfig {
    /// Sequence lengths, strictly increasing.
    pub depths: Vec<usize>,
    pub sequences_per_depth: usize,
    /// Shots per sequence and initialization; `None` uses exact probabilities.
    pub shots: Option<u64>,
    pub seed: u64,
    /// Qubit benchmarked by single-qubit RB.
    pub qubit: usize,
    /// Random Pauli draws per ICRB sequence, cycling through the four
    /// initial basis states.
    pub pauli_draws: usize,
    /// Bootstrap resamples over sequences for uncertainties; 0 disables.
    pub bootstrap: usize,
    /// Depolarizing probability applied after every random Clifford (RB) or
    /// layer (ICRB), on top of the noise model.
    pub injected_depolarizing: Option<f64>,
}

impl Default for RbConfig {
    fn default() -> Self {
        Self {
            depths: (0..=8).map(|k| 1usize << k).collect(),
            sequences_per_depth: 25,
            shots: Some(200),
            seed: 0,
            qubit: 0,
            pauli_draws: 4,
            bootstrap: 200,
            injected_depolarizing: None,
        }
    }
}

impl RbConfig {
    pub fn validate(&self) -> Result<()> {
        if self.depths.is_empty() || self.depths[0] < 1 || self.depths.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("depths must be non-empty, at least 1 and strictly increasing"));
        }
        if self.sequences_per_depth < 2 {
            return Err(Error::invalid("at least two sequences per depth are required"));
        }
        if self.shots == Some(0) {
            return Err(Error::invalid("shots must be positive"));
        }
        if self.pauli_draws == 0 {
            return Err(Error::invalid("at least one Pauli draw is required"));
        }
        if let Some(p) = self.injected_depolarizing {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!("injected depolarizing {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Estimate of a probability from `shots` Bernoulli trials, or the probability
/// itself when `shots` is `None`.
pub(crate) fn estimate<R: Rng + ?Sized>(p: f64, shots: Option<u64>, rng: &mut R) -> f64 {
    match shots {
        None => p,
        Some(n) => {
            let p = p.clamp(0.0, 1.0);
            Binomial::new(n, p).expect("probability clamped to [0, 1]").sample(rng) as f64 / n as f64
        }
    }
}

pub(crate) fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}
