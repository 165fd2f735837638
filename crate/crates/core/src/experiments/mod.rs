//! Single-experiment simulations used to calibrate and characterize the
//! qubits outside of benchmarking and tomography.

pub mod allxy;
pub mod chevron;
pub mod coherence;
pub mod cz_phase;
pub mod parity;

pub use allxy::{allxy, allxy_sequences, AllxyResult, ALLXY_LABELS};
pub use chevron::{rabi_chevron, rabi_frequency_from_x90, ChevronMap};
pub use coherence::{
    delay_grid, fit_decay, implied_t2_star, simulate_echo, simulate_ramsey, simulate_t1, DecayFit, DecayKind,
    TimeTrace,
};
pub use cz_phase::{calibrate_cz_phases, cz_with_phase_errors, CzPhaseCalibration, PhaseScan};
pub use parity::{double_readout, heralded_initialize, DoubleReadout, Heralded, HeraldOptions};

use rand::Rng;
use rand_distr::{Binomial, Distribution};

/// Fraction of successes in `n` Bernoulli trials of probability `p`.
pub(crate) fn binomial_fraction<R: Rng + ?Sized>(rng: &mut R, p: f64, n: u64) -> f64 {
    let k = Binomial::new(n, p.clamp(0.0, 1.0)).expect("probability clamped").sample(rng);
    k as f64 / n as f64
}
