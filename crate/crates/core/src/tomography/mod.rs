//! Two-qubit state tomography, readout mitigation and state metrics.

mod expectations;
mod metrics;
mod mle;
mod reference;
mod settings;

use serde::{Deserialize, Serialize};

pub use expectations::{expectations_from_counts, linear_reconstruct, ExpectationSet, Provenance};
pub use metrics::{concurrence, frobenius_distance, state_fidelity};
pub use mle::{log_likelihood, mle_reconstruct, mle_reconstruct_with, MleOptions, MleResult};
pub use reference::{hermitian_from_polar, polar_rendering, reference_matrices, ReferenceMatrix, ReportedMetrics};
pub use settings::{
    basis_change, estimate_confusion, measure_pauli_settings, measure_state_settings, CountsTable, Setting,
};

use crate::algebra::state::bell_phi_plus_vector;
use crate::algebra::{bell_prep, DensityMatrix};
use crate::noise::{ConfusionMatrix, NoiseModel};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Linear,
    SpamCorrected,
    Mle,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Linear => "Pauli decomposition",
            Method::SpamCorrected => "SPAM corrected",
            Method::Mle => "MLE",
        }
    }
}

/// A reconstructed matrix with its metrics against `(|00> + |11>)/sqrt(2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomographyResult {
    pub method: Method,
    pub rho: DensityMatrix,
    pub fidelity: f64,
    pub concurrence: f64,
    pub frobenius_distance: f64,
    pub trace: f64,
    pub min_eigenvalue: f64,
}

impl TomographyResult {
    pub fn evaluate(rho: DensityMatrix, method: Method) -> Result<Self> {
        let fidelity = state_fidelity(&rho, &bell_phi_plus_vector())?;
        let concurrence = concurrence(&rho)?;
        let frobenius_distance = frobenius_distance(&rho, &DensityMatrix::bell_phi_plus())?;
        Ok(Self {
            method,
            fidelity,
            concurrence,
            frobenius_distance,
            trace: rho.trace(),
            min_eigenvalue: rho.min_eigenvalue(),
            rho,
        })
    }
}

/// Every stage of a Bell-state tomography run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellTomography {
    pub counts: CountsTable,
    pub confusion: ConfusionMatrix,
    pub raw: TomographyResult,
    pub corrected: TomographyResult,
    pub mle: TomographyResult,
    pub mle_log_likelihood: f64,
    pub mle_converged: bool,
}

/// Prepares the Bell state with the native circuit, measures all settings and
/// reconstructs it three ways. `confusion` is the matrix used for mitigation;
/// `None` uses the model's own readout.
pub fn bell_tomography(
    nm: &NoiseModel,
    shots: Option<u64>,
    seed: u64,
    confusion: Option<&ConfusionMatrix>,
) -> Result<BellTomography> {
    let counts = measure_pauli_settings(&bell_prep(nm.gate_times()), shots, nm, seed)?;
    let confusion = confusion.cloned().unwrap_or_else(|| nm.readout().clone());
    let raw = TomographyResult::evaluate(linear_reconstruct(&expectations_from_counts(&counts, None)?), Method::Linear)?;
    let corrected = TomographyResult::evaluate(
        linear_reconstruct(&expectations_from_counts(&counts, Some(&confusion))?),
        Method::SpamCorrected,
    )?;
    let mle = mle_reconstruct(&counts, Some(&confusion))?;
    let mle_log_likelihood = mle.log_likelihood;
    let mle_converged = mle.converged;
    let mle = TomographyResult::evaluate(mle.rho, Method::Mle)?;
    Ok(BellTomography { counts, confusion, raw, corrected, mle, mle_log_likelihood, mle_converged })
}
