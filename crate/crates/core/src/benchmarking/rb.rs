use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{estimate, mean_std, RbConfig};
use crate::algebra::{apply_circuit, outcome_probabilities, Circuit, DensityMatrix, GateTimes, PhaseFrame};
use crate::clifford::{compile_c1, invert_c1_sequence, random_c1};
use crate::fit::{levenberg_marquardt, line_fit, FitOptions};
use crate::noise::{depolarizing_channel, NoiseModel};
use crate::{rng, Error, Result};

const STREAM_SEQUENCE: u64 = 0x5242_0001;
const STREAM_SHOTS: u64 = 0x5242_0002;
const STREAM_BOOTSTRAP: u64 = 0x5242_0003;

/// Survival probabilities per depth, averaged over random sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCurve {
    pub depths: Vec<usize>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    /// `per_sequence[i][j]`: survival of sequence `j` at `depths[i]`.
    pub per_sequence: Vec<Vec<f64>>,
    pub shots: Option<u64>,
}

impl DecayCurve {
    pub fn from_sequences(depths: Vec<usize>, per_sequence: Vec<Vec<f64>>, shots: Option<u64>) -> Self {
        let (mean, std) = per_sequence.iter().map(|s| mean_std(s)).unzip();
        Self { depths, mean, std, per_sequence, shots }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RbFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub a_err: f64,
    pub b_err: f64,
    pub c_err: f64,
    /// Average Clifford fidelity `(1 + b) / 2`.
    pub fidelity: f64,
    pub fidelity_err: f64,
}

fn c1_circuits(times: &GateTimes) -> Vec<Circuit> {
    (0..24)
        .map(|i| {
            let mut c = Circuit::new(1);
            for g in compile_c1(i, 0, times).gates {
                c.push(g).expect("single-qubit gate");
            }
            c
        })
        .collect()
}

/// Single-qubit Clifford RB on `cfg.qubit` starting from `|0>`.
pub fn run_clifford_rb(cfg: &RbConfig, nm: &NoiseModel) -> Result<DecayCurve> {
    cfg.validate()?;
    let nm = nm.single_qubit(cfg.qubit)?;
    let circuits = c1_circuits(nm.gate_times());
    let injected = cfg.injected_depolarizing.map(|p| depolarizing_channel(p, 1)).transpose()?;
    let jobs: Vec<(usize, usize)> = cfg
        .depths
        .iter()
        .flat_map(|&d| (0..cfg.sequences_per_depth).map(move |s| (d, s)))
        .collect();
    let survivals: Vec<f64> = jobs
        .par_iter()
        .map(|&(depth, s)| -> Result<f64> {
            let mut r = rng::stream(cfg.seed, &[STREAM_SEQUENCE, depth as u64, s as u64]);
            let seq: Vec<usize> = (0..depth).map(|_| random_c1(&mut r)).collect();
            let mut rho = DensityMatrix::basis(1, 0);
            let mut frame = PhaseFrame::new(1);
            for &c in &seq {
                rho = apply_circuit(&rho, &circuits[c], Some(&nm), &mut frame)?;
                if let Some(ch) = &injected {
                    rho = ch.apply(&rho)?;
                }
            }
            rho = apply_circuit(&rho, &circuits[invert_c1_sequence(&seq)], Some(&nm), &mut frame)?;
            let p0 = outcome_probabilities(&rho, Some(nm.readout()))?[0];
            let mut shots_rng = rng::stream(cfg.seed, &[STREAM_SHOTS, depth as u64, s as u64]);
            Ok(estimate(p0, cfg.shots, &mut shots_rng))
        })
        .collect::<Result<_>>()?;
    let per_sequence = survivals.chunks(cfg.sequences_per_depth).map(<[f64]>::to_vec).collect();
    Ok(DecayCurve::from_sequences(cfg.depths.clone(), per_sequence, cfg.shots))
}

/// Fits `W(d) = A b^d + c` to the mean survival.
pub fn fit_rb(curve: &DecayCurve) -> Result<RbFit> {
    let n = curve.depths.len();
    if n < 3 {
        return Err(Error::invalid("RB fit needs at least three depths"));
    }
    let xs: Vec<f64> = curve.depths.iter().map(|&d| d as f64).collect();
    let ys = &curve.mean;
    let spread = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max) - ys.iter().copied().fold(f64::INFINITY, f64::min);
    if !(spread > 1e-9) {
        return Err(Error::Unidentifiable(format!("survival is flat (spread {spread:.2e})")));
    }
    let tail = (n / 5).max(1);
    let c0 = (ys[n - tail..].iter().sum::<f64>() / tail as f64).clamp(0.0, 1.0);
    let mut c_init = c0;
    let mut points: Vec<(f64, f64)> = xs.iter().zip(ys).filter(|(_, &y)| y - c_init > 1e-6).map(|(&x, &y)| (x, (y - c_init).ln())).collect();
    if points.len() < 2 {
        // The tail has not reached the asymptote; fall back to a lower offset.
        c_init = (ys.iter().copied().fold(f64::INFINITY, f64::min) - 0.05).max(0.0);
        points = xs.iter().zip(ys).filter(|(_, &y)| y - c_init > 1e-6).map(|(&x, &y)| (x, (y - c_init).ln())).collect();
    }
    let (b0, a0) = if points.len() >= 2 {
        let (px, py): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
        let (slope, intercept) = line_fit(&px, &py)?;
        (slope.exp().clamp(1e-3, 1.0 - 1e-9), intercept.exp().clamp(1e-6, 1.0))
    } else {
        (0.9, 0.5)
    };
    let model = |d: f64, p: &[f64]| p[0] * p[1].powf(d) + p[2];
    let bounds = [(0.0, 1.0), (0.0, 1.0), (0.0, 1.0)];
    let fit = levenberg_marquardt(model, &xs, ys, None, &[a0, b0, c_init], &bounds, FitOptions::default())?;
    if !fit.converged {
        return Err(Error::NonConvergence { message: "RB decay fit hit the iteration limit".into(), best: fit.params });
    }
    let [a, b, c] = [fit.params[0], fit.params[1], fit.params[2]];
    if !(b > 0.0 && b < 1.0) || a <= 0.0 {
        return Err(Error::Unidentifiable(format!("decay parameter b={b} (A={a}) at a bound")));
    }
    Ok(RbFit {
        a,
        b,
        c,
        a_err: fit.std_errors[0],
        b_err: fit.std_errors[1],
        c_err: fit.std_errors[2],
        fidelity: (1.0 + b) / 2.0,
        fidelity_err: fit.std_errors[1] / 2.0,
    })
}

/// Standard deviation of the fitted fidelity over bootstrap resamples of the
/// sequences at each depth. Resamples whose fit fails are skipped.
pub fn bootstrap_rb_fidelity(curve: &DecayCurve, resamples: usize, seed: u64) -> Result<f64> {
    if resamples < 2 {
        return Err(Error::invalid("bootstrap needs at least two resamples"));
    }
    let fidelities: Vec<f64> = (0..resamples)
        .into_par_iter()
        .filter_map(|k| {
            let mut r = rng::stream(seed, &[STREAM_BOOTSTRAP, k as u64]);
            let per_sequence = curve
                .per_sequence
                .iter()
                .map(|s| (0..s.len()).map(|_| s[r.random_range(0..s.len())]).collect())
                .collect();
            let resampled = DecayCurve::from_sequences(curve.depths.clone(), per_sequence, curve.shots);
            fit_rb(&resampled).ok().map(|f| f.fidelity)
        })
        .collect();
    if fidelities.len() < 2 {
        return Err(Error::NonConvergence { message: "too few bootstrap fits succeeded".into(), best: vec![] });
    }
    Ok(mean_std(&fidelities).1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(a: f64, b: f64, c: f64, depths: Vec<usize>) -> DecayCurve {
        let per_sequence = depths.iter().map(|&d| vec![a * b.powi(d as i32) + c; 2]).collect();
        DecayCurve::from_sequences(depths, per_sequence, None)
    }

    #[test]
    fn exact_parameters_recovered() {
        let fit = fit_rb(&synthetic(0.5, 0.98, 0.5, (1..=200).collect())).unwrap();
        assert!((fit.a - 0.5).abs() < 1e-6);
        assert!((fit.b - 0.98).abs() < 1e-6);
        assert!((fit.c - 0.5).abs() < 1e-6);
    }

    #[test]
    fn flat_curve_is_unidentifiable() {
        let flat = synthetic(0.0, 0.5, 0.7, vec![1, 2, 4, 8]);
        assert!(matches!(fit_rb(&flat), Err(Error::Unidentifiable(_))));
    }

    #[test]
    fn ideal_survival_is_one() {
        let cfg = RbConfig { depths: vec![1, 7, 30], sequences_per_depth: 3, shots: None, ..RbConfig::default() };
        let curve = run_clifford_rb(&cfg, &NoiseModel::ideal(2)).unwrap();
        assert!(curve.mean.iter().all(|&w| (w - 1.0).abs() < 1e-12));
    }
}
