//! Ramsey, Hahn-echo and T1 traces and their decay fits.
//!
//! A quasi-static detuning `f` adds a phase `2 pi f t` during each wait. For a
//! sequence made of `k` equal waits the readout probability is a
//! trigonometric polynomial of degree `k` in the phase of one wait, so it is
//! sampled at `2k + 1` phases and interpolated exactly. Gaussian averaging of
//! that polynomial gives the analytic trace; Monte Carlo draws one detuning
//! per shot.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    linalg,
    apply_circuit, outcome_probabilities, project_parity, Circuit, DensityMatrix, NativeGate, PhaseFrame, QuantumChannel,
};
use crate::fit::{levenberg_marquardt, FitOptions};
use crate::noise::{NoiseModel, QubitNoise};
use crate::{rng, Error, Result};

const FIT_OPTIONS: FitOptions = FitOptions { max_iter: 2000, ftol: 1e-12, xtol: 1e-10 };

const STREAM_RAMSEY: u64 = 0x434f_0001;
const STREAM_ECHO: u64 = 0x434f_0002;
const STREAM_T1: u64 = 0x434f_0003;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayKind {
    Ramsey,
    Echo,
    T1,
}

impl DecayKind {
    pub fn label(self) -> &'static str {
        match self {
            DecayKind::Ramsey => "ramsey",
            DecayKind::Echo => "echo",
            DecayKind::T1 => "t1",
        }
    }
}

/// Measured signal against delay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeTrace {
    pub kind: DecayKind,
    pub qubit: usize,
    pub times_s: Vec<f64>,
    pub signal: Vec<f64>,
    /// Binomial standard error per point (zero for exact traces).
    pub std: Vec<f64>,
    pub shots: Option<u64>,
    /// Artificial detuning of a Ramsey trace.
    pub detuning_hz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub kind: DecayKind,
    /// Decay time in seconds.
    pub t: f64,
    pub alpha: f64,
    pub frequency_hz: f64,
    pub phase: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub t_err: f64,
    pub alpha_err: f64,
    pub frequency_err: f64,
}

/// Ramsey decay time implied by a qubit's dephasing parameters: the delay at
/// which `exp(-2 pi^2 sigma^2 t^2 - t / T2)` reaches `1/e`.
pub fn implied_t2_star(q: &QubitNoise) -> f64 {
    let a = 2.0 * (PI * q.sigma_f_hz).powi(2);
    let b = 1.0 / q.t2_s();
    if a == 0.0 {
        return if b > 0.0 { 1.0 / b } else { f64::INFINITY };
    }
    (-b + (b * b + 4.0 * a).sqrt()) / (2.0 * a)
}

/// `n` evenly spaced delays on `[0, t_max]`.
pub fn delay_grid(t_max: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| t_max * i as f64 / (n - 1).max(1) as f64).collect()
}

fn check_grid(times: &[f64]) -> Result<()> {
    if times.len() < 2 || times[0] < 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("delays must be non-negative, strictly increasing, at least two"));
    }
    Ok(())
}

enum Step {
    Pulse(NativeGate),
    Frame(f64),
    /// Free evolution of the given length, in seconds.
    Wait(f64),
}

/// Readout probability of `|1>` after `steps` as a function of the phase
/// picked up during a single wait.
struct PhaseResponse {
    a0: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl PhaseResponse {
    fn build(steps: &[Step], nm: &NoiseModel) -> Result<Self> {
        let k = steps.iter().filter(|s| matches!(s, Step::Wait(_))).count();
        let n = 2 * k + 1;
        let samples: Vec<f64> = (0..n)
            .map(|m| run_steps(steps, nm, TAU * m as f64 / n as f64))
            .collect::<Result<_>>()?;
        let a0 = samples.iter().sum::<f64>() / n as f64;
        let coeff = |h: usize, f: fn(f64) -> f64| -> f64 {
            2.0 / n as f64 * samples.iter().enumerate().map(|(m, s)| s * f(TAU * (h * m) as f64 / n as f64)).sum::<f64>()
        };
        Ok(Self {
            a0,
            cos: (1..=k).map(|h| coeff(h, f64::cos)).collect(),
            sin: (1..=k).map(|h| coeff(h, f64::sin)).collect(),
        })
    }

    fn at(&self, phase: f64) -> f64 {
        self.a0
            + self
                .cos
                .iter()
                .zip(&self.sin)
                .enumerate()
                .map(|(i, (c, s))| {
                    let h = (i + 1) as f64;
                    c * (h * phase).cos() + s * (h * phase).sin()
                })
                .sum::<f64>()
    }

    /// Mean over a zero-mean Gaussian phase of standard deviation `s`.
    fn gaussian_mean(&self, s: f64) -> f64 {
        self.a0
            + self
                .cos
                .iter()
                .enumerate()
                .map(|(i, c)| c * (-0.5 * ((i + 1) as f64 * s).powi(2)).exp())
                .sum::<f64>()
    }
}

fn run_steps(steps: &[Step], nm: &NoiseModel, wait_phase: f64) -> Result<f64> {
    let mut rho = DensityMatrix::basis(1, 0);
    let mut frame = PhaseFrame::new(1);
    for step in steps {
        match step {
            Step::Pulse(g) => {
                let mut c = Circuit::new(1);
                c.push(g.clone())?;
                rho = apply_circuit(&rho, &c, Some(nm), &mut frame)?;
            }
            Step::Frame(theta) => frame.advance(0, *theta),
            Step::Wait(t) => {
                let rot = QuantumChannel::unitary(linalg::rz(wait_phase))?;
                rho = rot.apply(&rho)?;
                if let Some(ch) = nm.idle_channel(0, t * 1e9)? {
                    rho = ch.apply(&rho)?;
                }
            }
        }
    }
    Ok(outcome_probabilities(&rho, Some(nm.readout()))?[1])
}

fn sample_trace(
    kind: DecayKind,
    qubit: usize,
    times: &[f64],
    shots: Option<u64>,
    seed: u64,
    stream: u64,
    per_point: impl Fn(f64) -> Result<(PhaseResponse, f64, bool)> + Sync,
) -> Result<TimeTrace> {
    if shots == Some(0) {
        return Err(Error::invalid("shots must be positive"));
    }
    let rows: Vec<(f64, f64)> = times
        .par_iter()
        .enumerate()
        .map(|(i, &t)| -> Result<(f64, f64)> {
            // `sigma_phase` is the spread of the unit wait phase; `complement`
            // reports P(0) instead of P(1).
            let (resp, sigma_phase, complement) = per_point(t)?;
            let flip = |p: f64| if complement { 1.0 - p } else { p };
            match shots {
                None => Ok((flip(resp.gaussian_mean(sigma_phase)).clamp(0.0, 1.0), 0.0)),
                Some(n) => {
                    let mut r = rng::stream(seed, &[stream, i as u64]);
                    let normal = Normal::new(0.0, sigma_phase).expect("finite spread");
                    let mut hits = 0u64;
                    for _ in 0..n {
                        let phase = if sigma_phase > 0.0 { normal.sample(&mut r) } else { 0.0 };
                        if r.random_bool(flip(resp.at(phase)).clamp(0.0, 1.0)) {
                            hits += 1;
                        }
                    }
                    let p = hits as f64 / n as f64;
                    Ok((p, (p * (1.0 - p) / n as f64).sqrt()))
                }
            }
        })
        .collect::<Result<_>>()?;
    let (signal, std) = rows.into_iter().unzip();
    Ok(TimeTrace { kind, qubit, times_s: times.to_vec(), signal, std, shots, detuning_hz: None })
}

/// Ramsey `X90 - wait - X90` on `qubit`; the signal is `P(1)`.
///
/// The artificial detuning advances the frame by `2 pi detuning t` before the
/// second pulse. By default it is six fringes over the delay span.
pub fn simulate_ramsey(
    qubit: usize,
    times: &[f64],
    nm: &NoiseModel,
    shots: Option<u64>,
    seed: u64,
    detuning_hz: Option<f64>,
) -> Result<TimeTrace> {
    check_grid(times)?;
    let one = nm.single_qubit(qubit)?;
    let detuning = detuning_hz.unwrap_or(6.0 / times[times.len() - 1]);
    let sigma = one.qubit(0).sigma_f_hz;
    let gt = one.gate_times().clone();
    let mut trace = sample_trace(DecayKind::Ramsey, qubit, times, shots, seed, STREAM_RAMSEY, |t| {
        let steps = [Step::Pulse(gt.x90(0)), Step::Wait(t), Step::Frame(TAU * detuning * t), Step::Pulse(gt.x90(0))];
        Ok((PhaseResponse::build(&steps, &one)?, TAU * sigma * t, false))
    })?;
    trace.detuning_hz = Some(detuning);
    Ok(trace)
}

/// Hahn echo `X90 - t/2 - X180 - t/2 - X90`; the signal is `P(0)`.
pub fn simulate_echo(qubit: usize, times: &[f64], nm: &NoiseModel, shots: Option<u64>, seed: u64) -> Result<TimeTrace> {
    check_grid(times)?;
    let one = nm.single_qubit(qubit)?;
    let sigma = one.qubit(0).sigma_f_hz;
    let gt = one.gate_times().clone();
    sample_trace(DecayKind::Echo, qubit, times, shots, seed, STREAM_ECHO, |t| {
        let steps = [
            Step::Pulse(gt.x90(0)),
            Step::Wait(t / 2.0),
            Step::Pulse(gt.x180(0)),
            Step::Wait(t / 2.0),
            Step::Pulse(gt.x90(0)),
        ];
        Ok((PhaseResponse::build(&steps, &one)?, TAU * sigma * t / 2.0, true))
    })
}

/// Energy relaxation of the antiparallel state: `qubit` is flipped, the pair
/// waits, and a parity readout reports odd with probability `P(odd)`.
pub fn simulate_t1(qubit: usize, times: &[f64], nm: &NoiseModel, shots: Option<u64>, seed: u64) -> Result<TimeTrace> {
    check_grid(times)?;
    if nm.n_qubits() != 2 || qubit > 1 {
        return Err(Error::invalid("T1 through parity readout needs a two-qubit model"));
    }
    if shots == Some(0) {
        return Err(Error::invalid("shots must be positive"));
    }
    let gt = nm.gate_times().clone();
    let q = nm.parity_flip();
    let mut prep = Circuit::new(2);
    prep.push(gt.x180(qubit))?;
    let start = apply_circuit(&DensityMatrix::basis(2, 0), &prep, Some(nm), &mut PhaseFrame::new(2))?;
    let rows: Vec<(f64, f64)> = times
        .par_iter()
        .enumerate()
        .map(|(i, &t)| -> Result<(f64, f64)> {
            let mut rho = start.clone();
            for target in 0..2 {
                if let Some(ch) = nm.idle_channel(target, t * 1e9)? {
                    rho = ch.apply_to(&rho, &[target])?;
                }
            }
            let odd = project_parity(&rho)?.odd_probability;
            let reported = (1.0 - q) * odd + q * (1.0 - odd);
            match shots {
                None => Ok((reported, 0.0)),
                Some(n) => {
                    let mut r = rng::stream(seed, &[STREAM_T1, i as u64]);
                    let p = super::binomial_fraction(&mut r, reported, n);
                    Ok((p, (p * (1.0 - p) / n as f64).sqrt()))
                }
            }
        })
        .collect::<Result<_>>()?;
    let (signal, std) = rows.into_iter().unzip();
    Ok(TimeTrace { kind: DecayKind::T1, qubit, times_s: times.to_vec(), signal, std, shots, detuning_hz: None })
}

fn periodogram_peak(times: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = times.len();
    let span = times[n - 1] - times[0];
    let mean = ys.iter().sum::<f64>() / n as f64;
    let nyquist = 0.5 * (n - 1) as f64 / span;
    let steps = 4 * n;
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for k in 1..=steps {
        let f = nyquist * k as f64 / steps as f64;
        let (mut c, mut s) = (0.0, 0.0);
        for (t, y) in times.iter().zip(ys) {
            c += (y - mean) * (TAU * f * t).cos();
            s += (y - mean) * (TAU * f * t).sin();
        }
        let power = c * c + s * s;
        if power > best.2 {
            best = (f, s.atan2(c), power);
        }
    }
    // y - mean ~ A cos(2 pi f t + phi) correlates as (A/2)(cos phi, -sin phi).
    (best.0, -best.1)
}

/// Fits `A exp(-(t/T)^alpha) cos(2 pi f t + phi) + c`.
///
/// Echo and T1 fits have no oscillation and a plain exponential envelope
/// (`alpha = 1`), since both decays are Markovian in this model. Several
/// starting points are tried and the lowest residual wins.
pub fn fit_decay(trace: &TimeTrace, kind: DecayKind) -> Result<DecayFit> {
    let xs = &trace.times_s;
    let ys = &trace.signal;
    check_grid(xs)?;
    if xs.len() < 6 {
        return Err(Error::invalid("decay fit needs at least six points"));
    }
    let span = xs[xs.len() - 1] - xs[0];
    let dt = xs[1] - xs[0];
    let model = |t: f64, p: &[f64]| p[0] * (-(t / p[1]).powf(p[2])).exp() * (TAU * p[3] * t + p[4]).cos() + p[5];
    let tail = (xs.len() / 5).max(1);
    let c0 = ys[ys.len() - tail..].iter().sum::<f64>() / tail as f64;
    let mut starts = Vec::new();
    let mut bounds = vec![(0.0, 2.0), (dt * 0.1, span * 1e3), (1.0, 2.5), (0.0, 0.0), (0.0, 0.0), (-1.0, 2.0)];
    match kind {
        DecayKind::Ramsey => {
            let (f0, phi0) = periodogram_peak(xs, ys);
            let nyquist = 0.5 * (xs.len() - 1) as f64 / span;
            bounds[3] = (0.0, nyquist);
            bounds[4] = (-2.0 * TAU, 2.0 * TAU);
            let amp = (ys.iter().copied().fold(f64::NEG_INFINITY, f64::max) - ys.iter().copied().fold(f64::INFINITY, f64::min)) / 2.0;
            for frac in [0.15, 0.3, 0.6] {
                for alpha in [1.2, 2.0] {
                    starts.push(vec![amp.max(1e-3), span * frac, alpha, f0, phi0, ys.iter().sum::<f64>() / ys.len() as f64]);
                }
            }
        }
        DecayKind::Echo | DecayKind::T1 => {
            bounds[2] = (1.0, 1.0);
            let a0 = (ys[0] - c0).max(1e-3);
            for frac in [0.1, 0.3, 1.0] {
                starts.push(vec![a0, span * frac, 1.0, 0.0, 0.0, c0]);
                starts.push(vec![a0, span * frac, 1.0, 0.0, 0.0, 0.5 * c0]);
            }
        }
    }
    let mut best: Option<crate::fit::FitOutcome> = None;
    let mut last_err = None;
    for p0 in &starts {
        match levenberg_marquardt(model, xs, ys, None, p0, &bounds, FIT_OPTIONS) {
            Ok(f) if f.converged => {
                if best.as_ref().is_none_or(|b| f.cost < b.cost) {
                    best = Some(f);
                }
            }
            Ok(f) => last_err = Some(Error::NonConvergence { message: "decay fit hit the iteration limit".into(), best: f.params }),
            Err(e) => last_err = Some(e),
        }
    }
    let fit = best.ok_or_else(|| last_err.unwrap_or_else(|| Error::invalid("no starting point")))?;
    let p = &fit.params;
    let phase = if kind == DecayKind::Ramsey { (p[4] + PI).rem_euclid(TAU) - PI } else { 0.0 };
    Ok(DecayFit {
        kind,
        t: p[1],
        alpha: p[2],
        frequency_hz: p[3],
        phase,
        amplitude: p[0],
        offset: p[5],
        t_err: fit.std_errors[1],
        alpha_err: fit.std_errors[2],
        frequency_err: fit.std_errors[3],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_ramsey_is_a_cosine() {
        let times = delay_grid(2e-6, 41);
        let det = 3e6;
        let tr = simulate_ramsey(0, &times, &NoiseModel::ideal(2), None, 0, Some(det)).unwrap();
        for (t, p) in times.iter().zip(&tr.signal) {
            assert!((p - (1.0 + (TAU * det * t).cos()) / 2.0).abs() < 1e-12, "{t} {p}");
        }
    }

    #[test]
    fn echo_refocuses_quasi_static_noise() {
        let nm = NoiseModel::ideal(2).with_quasi_static(0, 2e5).unwrap();
        let tr = simulate_echo(0, &delay_grid(20e-6, 11), &nm, None, 0).unwrap();
        assert!(tr.signal.iter().all(|p| (p - 1.0).abs() < 1e-12));
    }

    #[test]
    fn t1_exact_fit() {
        let t1 = 0.065;
        let times = delay_grid(3.0 * t1, 61);
        let trace = TimeTrace {
            kind: DecayKind::T1,
            qubit: 0,
            signal: times.iter().map(|t| (-t / t1).exp()).collect(),
            std: vec![0.0; times.len()],
            times_s: times,
            shots: None,
            detuning_hz: None,
        };
        let fit = fit_decay(&trace, DecayKind::T1).unwrap();
        assert!((fit.t / t1 - 1.0).abs() < 1e-6, "{}", fit.t);
    }

    #[test]
    fn implied_ramsey_time() {
        let q = QubitNoise { t1_s: Some(1.0), dephasing_rate: 0.0, sigma_f_hz: 2f64.sqrt() / (TAU * 5e-6), overrotation: 0.0 };
        assert!((implied_t2_star(&q) / 5e-6 - 1.0).abs() < 1e-5);
    }
}
