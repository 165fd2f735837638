//! Interleaved character randomized benchmarking over single-qubit Clifford
//! pairs with the two-qubit Pauli group as character group.
//!
//! Each random sequence is run once per Pauli draw. Draw `k` prepares the
//! basis state `|s1 s0>` with `s = k mod 4` by a Pauli picked at random from
//! those that map `|00>` to `|s>`. Reference and interleaved runs share their
//! random layers and Pauli draws, so the ratio of their decays carries less
//! sampling noise.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{estimate, mean_std, RbConfig};
use crate::algebra::linalg::{self, CMatrix};
use crate::algebra::{
    apply_circuit, apply_logical_unitary, outcome_probabilities, Circuit, DensityMatrix, GateTimes, NativeGate,
    PhaseFrame,
};
use crate::clifford::{c1_element, compile_c1, invert_c1_sequence, sample_icrb_layer};
use crate::fit::{levenberg_marquardt, line_fit, FitOptions};
use crate::noise::{depolarizing_channel, NoiseModel};
use crate::{rng, Error, Result};

const STREAM_LAYERS: u64 = 0x4943_0001;
const STREAM_PAULI: u64 = 0x4943_0002;
const STREAM_SHOTS: u64 = 0x4943_0003;
const STREAM_BOOTSTRAP: u64 = 0x4943_0004;

/// Probabilities of reporting `00` per depth and initialization, plus their
/// character combinations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterData {
    pub interleaved: bool,
    pub depths: Vec<usize>,
    /// `per_sequence[i][j][s]`: `P_d(s)` of sequence `j` at `depths[i]`,
    /// averaged over the draws preparing `s`.
    pub per_sequence: Vec<Vec<[f64; 4]>>,
    pub mean: Vec<[f64; 4]>,
    /// `characters[i][k]`: `P^(k+1)` at `depths[i]` from the mean table.
    pub characters: Vec<[f64; 3]>,
    pub shots: Option<u64>,
}

impl CharacterData {
    fn from_sequences(interleaved: bool, depths: Vec<usize>, per_sequence: Vec<Vec<[f64; 4]>>, shots: Option<u64>) -> Self {
        let mean: Vec<[f64; 4]> = per_sequence
            .iter()
            .map(|seqs| {
                let mut m = [0.0; 4];
                for p in seqs {
                    for s in 0..4 {
                        m[s] += p[s] / seqs.len() as f64;
                    }
                }
                m
            })
            .collect();
        let characters = mean.iter().map(|&p| character_combine(p)).collect();
        Self { interleaved, depths, per_sequence, mean, characters, shots }
    }

    fn resampled(&self, picks: &[Vec<usize>]) -> Self {
        let per_sequence = self
            .per_sequence
            .iter()
            .zip(picks)
            .map(|(seqs, idx)| idx.iter().map(|&j| seqs[j]).collect())
            .collect();
        Self::from_sequences(self.interleaved, self.depths.clone(), per_sequence, self.shots)
    }
}

/// Signed sums of the `P_d(s1 s0)` table, in the order `00, 01, 10, 11`.
pub fn character_combine(p: [f64; 4]) -> [f64; 3] {
    [p[0] - p[1] + p[2] - p[3], p[0] + p[1] - p[2] - p[3], p[0] - p[1] - p[2] + p[3]]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterFit {
    pub amplitude: [f64; 3],
    pub alpha: [f64; 3],
    pub amplitude_err: [f64; 3],
    pub alpha_err: [f64; 3],
    /// `(alpha[0] + alpha[1] + 3 alpha[2]) / 5`.
    pub alpha_mean: f64,
    pub alpha_mean_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcrbResult {
    pub reference: CharacterFit,
    pub interleaved: CharacterFit,
    pub alpha_ref: f64,
    pub alpha_int: f64,
    pub fidelity: f64,
    /// Uncertainty propagated from the fit standard errors.
    pub fidelity_err: f64,
    /// Standard deviation over bootstrap resamples of the sequences.
    pub fidelity_bootstrap_std: Option<f64>,
}

/// Fits `y = A alpha^d` without offset; returns `(A, alpha, A_err, alpha_err)`.
pub fn fit_character_decay(depths: &[usize], ys: &[f64]) -> Result<(f64, f64, f64, f64)> {
    if depths.len() != ys.len() || depths.len() < 2 {
        return Err(Error::invalid("character fit needs matching depths and values, at least two"));
    }
    let xs: Vec<f64> = depths.iter().map(|&d| d as f64).collect();
    let positive: Vec<(f64, f64)> = xs.iter().zip(ys).filter(|(_, &y)| y > 0.0).map(|(&x, &y)| (x, y.ln())).collect();
    if positive.len() < 2 || positive.len() * 2 < ys.len() {
        return Err(Error::NonConvergence { message: "character signal is not a positive decay".into(), best: vec![] });
    }
    let (px, py): (Vec<f64>, Vec<f64>) = positive.into_iter().unzip();
    let (slope, intercept) = line_fit(&px, &py)?;
    let alpha0 = slope.exp();
    if alpha0 > 1.01 {
        return Err(Error::NonConvergence { message: format!("character signal grows (alpha ~ {alpha0:.4})"), best: vec![] });
    }
    let model = |d: f64, p: &[f64]| p[0] * p[1].powf(d);
    let start = [intercept.exp().clamp(1e-6, 4.0), alpha0.clamp(1e-6, 1.0)];
    let fit = levenberg_marquardt(model, &xs, ys, None, &start, &[(0.0, 4.0), (0.0, 1.0)], FitOptions::default())?;
    if !fit.converged {
        return Err(Error::NonConvergence { message: "character decay fit hit the iteration limit".into(), best: fit.params });
    }
    Ok((fit.params[0], fit.params[1], fit.std_errors[0], fit.std_errors[1]))
}

pub fn fit_characters(data: &CharacterData) -> Result<CharacterFit> {
    let mut amplitude = [0.0; 3];
    let mut alpha = [0.0; 3];
    let mut amplitude_err = [0.0; 3];
    let mut alpha_err = [0.0; 3];
    for k in 0..3 {
        let ys: Vec<f64> = data.characters.iter().map(|c| c[k]).collect();
        let (a, al, ae, ale) = fit_character_decay(&data.depths, &ys)?;
        amplitude[k] = a;
        alpha[k] = al;
        amplitude_err[k] = ae;
        alpha_err[k] = ale;
    }
    let alpha_mean = (alpha[0] + alpha[1] + 3.0 * alpha[2]) / 5.0;
    let alpha_mean_err = (alpha_err[0].powi(2) + alpha_err[1].powi(2) + 9.0 * alpha_err[2].powi(2)).sqrt() / 5.0;
    Ok(CharacterFit { amplitude, alpha, amplitude_err, alpha_err, alpha_mean, alpha_mean_err })
}

/// Gate fidelity `1 - (1 - alpha_int / alpha_ref) 3/4` with its propagated
/// uncertainty.
pub fn icrb_fidelity(reference: &CharacterFit, interleaved: &CharacterFit) -> (f64, f64) {
    let ratio = interleaved.alpha_mean / reference.alpha_mean;
    let rel = ((interleaved.alpha_mean_err / interleaved.alpha_mean).powi(2)
        + (reference.alpha_mean_err / reference.alpha_mean).powi(2))
    .sqrt();
    (1.0 - (1.0 - ratio) * 0.75, 0.75 * ratio * rel)
}

fn pauli_gates(label: u8, q: usize, times: &GateTimes) -> Vec<NativeGate> {
    match label {
        0 => vec![],
        1 => vec![times.x180(q)],
        2 => vec![NativeGate::virtual_z(q, FRAC_PI_2), times.x180(q), NativeGate::virtual_z(q, -FRAC_PI_2)],
        _ => vec![NativeGate::virtual_z(q, PI)],
    }
}

/// Random Pauli label (0=I, 1=X, 2=Y, 3=Z) that leaves `|0>` in `|bit>`.
fn pauli_for_bit<R: Rng + ?Sized>(bit: usize, rng: &mut R) -> u8 {
    let flip = rng.random_bool(0.5);
    match (bit, flip) {
        (0, false) => 0,
        (0, true) => 3,
        (_, false) => 1,
        (_, true) => 2,
    }
}

struct Compiled {
    times: GateTimes,
    q1: Vec<Vec<NativeGate>>,
    q0: Vec<Vec<NativeGate>>,
}

impl Compiled {
    fn new(times: &GateTimes) -> Self {
        Self {
            times: times.clone(),
            q1: (0..24).map(|i| compile_c1(i, 1, times).gates).collect(),
            q0: (0..24).map(|i| compile_c1(i, 0, times).gates).collect(),
        }
    }

    fn local_layer(&self, a: usize, b: usize) -> Result<Circuit> {
        let mut c = Circuit::new(2);
        c.push_parallel(&[(1, &self.q1[a][..]), (0, &self.q0[b][..])])?;
        Ok(c)
    }
}

/// Runs the reference (`interleave_cz = false`) or CZ-interleaved experiment.
pub fn run_icrb(cfg: &RbConfig, interleave_cz: bool, nm: &NoiseModel) -> Result<CharacterData> {
    cfg.validate()?;
    if nm.n_qubits() != 2 {
        return Err(Error::invalid("ICRB needs a two-qubit noise model"));
    }
    if cfg.pauli_draws < 4 {
        return Err(Error::invalid("ICRB needs at least four Pauli draws to cover every initialization"));
    }
    let compiled = Compiled::new(nm.gate_times());
    let injected = cfg.injected_depolarizing.map(|p| depolarizing_channel(p, 2)).transpose()?;
    let cz_ideal = linalg::cz();
    let jobs: Vec<(usize, usize)> = cfg
        .depths
        .iter()
        .flat_map(|&d| (0..cfg.sequences_per_depth).map(move |s| (d, s)))
        .collect();
    let tables: Vec<[f64; 4]> = jobs
        .par_iter()
        .map(|&(depth, s)| -> Result<[f64; 4]> {
            let layer_seed = rng::derive_seed(cfg.seed, &[STREAM_LAYERS, depth as u64, s as u64]);
            let pairs: Vec<(usize, usize)> = (0..depth as u64).map(|k| sample_icrb_layer(layer_seed, k)).collect();
            let mut layers = Vec::with_capacity(depth);
            for &(a, b) in &pairs {
                let mut c = compiled.local_layer(a, b)?;
                if interleave_cz {
                    c.push(compiled.times.cz())?;
                }
                layers.push(c);
            }
            enum Inverse {
                Local(Circuit),
                Ideal(CMatrix),
            }
            let inverse = if interleave_cz {
                let total = pairs.iter().fold(linalg::identity(4), |acc, &(a, b)| {
                    &cz_ideal * linalg::kron(&c1_element(a).unitary, &c1_element(b).unitary) * acc
                });
                Inverse::Ideal(total.adjoint())
            } else {
                let (a, b): (Vec<usize>, Vec<usize>) = pairs.iter().copied().unzip();
                Inverse::Local(compiled.local_layer(invert_c1_sequence(&a), invert_c1_sequence(&b))?)
            };
            let mut sums = [0.0; 4];
            let mut counts = [0usize; 4];
            for draw in 0..cfg.pauli_draws {
                let init = draw % 4;
                let mut pr = rng::stream(cfg.seed, &[STREAM_PAULI, depth as u64, s as u64, draw as u64]);
                let p1 = pauli_for_bit(init >> 1, &mut pr);
                let p0 = pauli_for_bit(init & 1, &mut pr);
                let mut prep = Circuit::new(2);
                prep.push_parallel(&[
                    (1, &pauli_gates(p1, 1, &compiled.times)[..]),
                    (0, &pauli_gates(p0, 0, &compiled.times)[..]),
                ])?;
                let mut frame = PhaseFrame::new(2);
                let mut rho = apply_circuit(&DensityMatrix::basis(2, 0), &prep, Some(nm), &mut frame)?;
                for layer in &layers {
                    rho = apply_circuit(&rho, layer, Some(nm), &mut frame)?;
                    if let Some(ch) = &injected {
                        rho = ch.apply(&rho)?;
                    }
                }
                rho = match &inverse {
                    Inverse::Local(c) => apply_circuit(&rho, c, Some(nm), &mut frame)?,
                    Inverse::Ideal(w) => apply_logical_unitary(&rho, w, &frame)?,
                };
                let p00 = outcome_probabilities(&rho, Some(nm.readout()))?[0];
                let mut sr = rng::stream(
                    cfg.seed,
                    &[STREAM_SHOTS, u64::from(interleave_cz), depth as u64, s as u64, draw as u64],
                );
                sums[init] += estimate(p00, cfg.shots, &mut sr);
                counts[init] += 1;
            }
            Ok(std::array::from_fn(|i| sums[i] / counts[i] as f64))
        })
        .collect::<Result<_>>()?;
    let per_sequence = tables.chunks(cfg.sequences_per_depth).map(<[[f64; 4]]>::to_vec).collect();
    Ok(CharacterData::from_sequences(interleave_cz, cfg.depths.clone(), per_sequence, cfg.shots))
}

/// Reference and interleaved runs, their fits and the CZ fidelity.
pub fn run_icrb_pair(cfg: &RbConfig, nm: &NoiseModel) -> Result<(CharacterData, CharacterData, IcrbResult)> {
    let reference_data = run_icrb(cfg, false, nm)?;
    let interleaved_data = run_icrb(cfg, true, nm)?;
    let result = analyze_icrb(cfg, &reference_data, &interleaved_data)?;
    Ok((reference_data, interleaved_data, result))
}

/// Fits both character sets and derives the CZ fidelity, with a bootstrap
/// over sequences when `cfg.bootstrap >= 2`.
pub fn analyze_icrb(cfg: &RbConfig, reference_data: &CharacterData, interleaved_data: &CharacterData) -> Result<IcrbResult> {
    let reference = fit_characters(reference_data)?;
    let interleaved = fit_characters(interleaved_data)?;
    let (fidelity, fidelity_err) = icrb_fidelity(&reference, &interleaved);
    let fidelity_bootstrap_std = if cfg.bootstrap >= 2 {
        let samples: Vec<f64> = (0..cfg.bootstrap)
            .into_par_iter()
            .filter_map(|k| {
                let mut r = rng::stream(cfg.seed, &[STREAM_BOOTSTRAP, k as u64]);
                let picks: Vec<Vec<usize>> = reference_data
                    .per_sequence
                    .iter()
                    .map(|seqs| (0..seqs.len()).map(|_| r.random_range(0..seqs.len())).collect())
                    .collect();
                let rf = fit_characters(&reference_data.resampled(&picks)).ok()?;
                let inf = fit_characters(&interleaved_data.resampled(&picks)).ok()?;
                Some(icrb_fidelity(&rf, &inf).0)
            })
            .collect();
        (samples.len() >= 2).then(|| mean_std(&samples).1)
    } else {
        None
    };
    let result = IcrbResult {
        alpha_ref: reference.alpha_mean,
        alpha_int: interleaved.alpha_mean,
        reference,
        interleaved,
        fidelity,
        fidelity_err,
        fidelity_bootstrap_std,
    };
    Ok(result)
}
