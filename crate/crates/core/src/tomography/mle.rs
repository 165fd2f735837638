//! Maximum-likelihood state reconstruction.
//!
//! Uses the diluted `R rho R` iteration: with `R = sum_j (f_j / p_j) E_j`
//! the update `rho -> N[(1 + eps R) rho (1 + eps R)]` never lowers the
//! likelihood for small enough `eps`. The step starts at a large `eps`, which
//! is close to the undiluted `R rho R` map, and is halved whenever a step
//! fails to raise the likelihood.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::settings::CountsTable;
use crate::algebra::linalg::{self, CMatrix};
use crate::algebra::DensityMatrix;
use crate::noise::ConfusionMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleOptions {
    pub max_iter: usize,
    /// Stop once an accepted step raises the mean log-likelihood by less.
    pub tol: f64,
}

impl Default for MleOptions {
    fn default() -> Self {
        Self { max_iter: 20_000, tol: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MleResult {
    pub rho: DensityMatrix,
    /// Log-likelihood per unit weight, `sum_j f_j ln p_j` with `sum_j f_j = 1`.
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Log-likelihood after every accepted step.
    #[serde(skip)]
    pub history: Vec<f64>,
}

/// Measurement model: effective POVM elements and normalized weights.
pub(crate) struct Model {
    effects: Vec<CMatrix>,
    weights: Vec<f64>,
}

impl Model {
    pub(crate) fn new(table: &CountsTable, readout: Option<&ConfusionMatrix>) -> Result<Self> {
        let identity = ConfusionMatrix::identity(4);
        let a = readout.unwrap_or(&identity);
        if a.dim() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, got: a.dim() });
        }
        let raw = table.weights();
        let total: f64 = raw.iter().flatten().sum();
        if !(total > 0.0) {
            return Err(Error::invalid("counts table carries no data"));
        }
        let mut effects = Vec::with_capacity(4 * table.settings.len());
        let mut weights = Vec::with_capacity(effects.capacity());
        for (setting, w) in table.settings.iter().zip(&raw) {
            let u = setting.rotation();
            let projectors: Vec<CMatrix> = (0..4)
                .map(|i| {
                    let row = u.row(i).into_owned();
                    row.adjoint() * row
                })
                .collect();
            for r in 0..4 {
                let mut e = CMatrix::zeros(4, 4);
                for (i, p) in projectors.iter().enumerate() {
                    e += p * Complex64::new(a.get(i, r), 0.0);
                }
                effects.push(e);
                weights.push(w[r] / total);
            }
        }
        Ok(Self { effects, weights })
    }

    fn probabilities(&self, rho: &CMatrix) -> Vec<f64> {
        self.effects.iter().map(|e| (e * rho).trace().re).collect()
    }

    pub(crate) fn log_likelihood(&self, rho: &CMatrix) -> f64 {
        self.probabilities(rho)
            .iter()
            .zip(&self.weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&p, &w)| if p > 0.0 { w * p.ln() } else { f64::NEG_INFINITY })
            .sum()
    }

    fn r_operator(&self, rho: &CMatrix) -> CMatrix {
        let mut r = CMatrix::zeros(4, 4);
        for ((e, p), &w) in self.effects.iter().zip(self.probabilities(rho)).zip(&self.weights) {
            if w > 0.0 {
                r += e * Complex64::new(w / p.max(1e-300), 0.0);
            }
        }
        r
    }
}

/// Log-likelihood of `rho` for `table`, in the normalization of
/// [`MleResult::log_likelihood`].
pub fn log_likelihood(table: &CountsTable, readout: Option<&ConfusionMatrix>, rho: &DensityMatrix) -> Result<f64> {
    Ok(Model::new(table, readout)?.log_likelihood(rho.matrix()))
}

pub fn mle_reconstruct(table: &CountsTable, readout: Option<&ConfusionMatrix>) -> Result<MleResult> {
    mle_reconstruct_with(table, readout, MleOptions::default())
}

pub fn mle_reconstruct_with(table: &CountsTable, readout: Option<&ConfusionMatrix>, opts: MleOptions) -> Result<MleResult> {
    let model = Model::new(table, readout)?;
    let mut rho = DensityMatrix::maximally_mixed(2).into_matrix();
    let mut ll = model.log_likelihood(&rho);
    let mut history = vec![ll];
    let mut eps: f64 = 1e3;
    let mut converged = false;
    let mut iterations = 0;
    let eye = linalg::identity(4);
    while iterations < opts.max_iter {
        iterations += 1;
        let r = model.r_operator(&rho);
        let mut accepted = false;
        while eps > 1e-12 {
            let step = &eye + &r * Complex64::new(eps, 0.0);
            let next = linalg::symmetrize(&(&step * &rho * step.adjoint()));
            let next = next.scale(1.0 / next.trace().re);
            let ll_next = model.log_likelihood(&next);
            if ll_next >= ll {
                let gain = ll_next - ll;
                rho = next;
                ll = ll_next;
                history.push(ll);
                accepted = true;
                eps = (eps * 2.0).min(1e3);
                if gain < opts.tol {
                    converged = true;
                }
                break;
            }
            eps /= 2.0;
        }
        if !accepted {
            converged = true;
        }
        if converged {
            break;
        }
    }
    let rho = DensityMatrix::new(rho)?;
    Ok(MleResult { rho, log_likelihood: ll, iterations, converged, history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Circuit;
    use crate::noise::NoiseModel;
    use crate::tomography::measure_pauli_settings;

    #[test]
    fn ground_state_recovered() {
        let t = measure_pauli_settings(&Circuit::new(2), None, &NoiseModel::ideal(2), 0).unwrap();
        let out = mle_reconstruct(&t, None).unwrap();
        assert!(out.rho.matrix()[(0, 0)].re > 0.999);
        assert!(out.history.windows(2).all(|w| w[1] >= w[0]));
        assert!((out.rho.trace() - 1.0).abs() < 1e-12);
    }
}
