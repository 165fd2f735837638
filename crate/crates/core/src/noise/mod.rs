//! Noise channels, readout errors and temperature presets.

mod channels;
mod confusion;
mod model;
mod presets;

pub use channels::{depolarizing_channel, depolarizing_parameter, relaxation_channel};
pub use confusion::{ConfusionMatrix, MAX_CONDITION_NUMBER};
pub use model::{NoiseModel, NoiseSummary, QubitNoise};
pub use presets::{
    dephasing_from_times, load_fixture_text, load_noise_preset, model_from_fixture, preset_fixture,
    pulse_depolarizing_for_clifford_fidelity, two_qubit_depolarizing_for_fidelity, FixtureSource, PresetFixture,
    QubitFixture, ReadoutFixture, TwoQubitFixture, FIXTURE_DIR_ENV, PRESET_LABELS,
};

/// Applies a confusion matrix to a distribution over prepared states.
pub fn apply_confusion(dist: &[f64], a: &ConfusionMatrix) -> crate::Result<Vec<f64>> {
    a.apply(dist)
}
