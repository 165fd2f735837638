//! Config-driven runs: build the noise model, execute one protocol, and
//! persist a JSON record with CSV data and SVG plots next to it.
//!
//! Exit-code contract used by the `spinq` binary: 0 on success, 2 for a
//! config error (nothing is written), 3 when a fit failed (the record is
//! still written, flagged), 1 for anything else.

pub mod config;
pub mod csv;
pub mod record;
pub mod report;
pub mod svg;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use config::{
    CalibrateSection, CoherenceSection, ExperimentKind, NoiseSection, Overrides, ReportSection, RunConfig,
    SpamSection, TomographySection, CONFIG_SCHEMA,
};
pub use record::{canonical_json, sha256_hex, RunRecord, RECORD_FILE, RECORD_SCHEMA};
pub use report::{collect_records, render_report, write_report, Report};

use crate::algebra::{DensityMatrix, QuantumChannel};
use crate::benchmarking::{
    analyze_icrb, bootstrap_rb_fidelity, fit_rb, run_clifford_rb, run_icrb, CharacterData, DecayCurve, IcrbResult,
    RbFit,
};
use crate::experiments::{
    allxy, calibrate_cz_phases, cz_with_phase_errors, delay_grid, fit_decay, implied_t2_star, rabi_chevron,
    rabi_frequency_from_x90, simulate_echo, simulate_ramsey, simulate_t1, AllxyResult, ChevronMap,
    CzPhaseCalibration, DecayFit, DecayKind, TimeTrace,
};
use crate::noise::{preset_fixture, ConfusionMatrix, NoiseModel};
use crate::tomography::{bell_tomography, estimate_confusion, polar_rendering, BellTomography};
use crate::{Error, Result, TOOLKIT_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RbQubit {
    pub qubit: usize,
    pub curve: DecayCurve,
    pub fit: Option<RbFit>,
    pub bootstrap_std: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceEntry {
    pub trace: TimeTrace,
    pub fit: Option<DecayFit>,
    /// Decay time the noise model was built with, when it has one.
    pub configured_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomographyPayload {
    pub result: BellTomography,
    pub estimated_confusion: bool,
    /// `r e^{i theta pi}` strings per method, in the layout of the matrices.
    pub polar: Vec<(String, Vec<Vec<String>>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpamPayload {
    pub installed: ConfusionMatrix,
    pub estimated: ConfusionMatrix,
    pub max_abs_deviation: f64,
    pub parity_flip_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibratePayload {
    pub injected_phases_pi: [f64; 2],
    pub cz: Option<CzPhaseCalibration>,
    pub allxy: Vec<AllxyResult>,
    pub chevrons: Vec<(usize, ChevronMap)>,
}

/// Result content of a record, tagged by experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Payload {
    Rb { qubits: Vec<RbQubit> },
    Icrb { reference: CharacterData, interleaved: CharacterData, result: Option<IcrbResult> },
    Tomography(TomographyPayload),
    Spam(SpamPayload),
    Coherence { entries: Vec<CoherenceEntry> },
    Calibrate(CalibratePayload),
}

/// What a run produced on disk.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub record: Option<RunRecord>,
    pub artifacts: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn converged(&self) -> bool {
        self.record.as_ref().is_none_or(|r| r.converged)
    }
}

/// Process exit code for a finished run.
pub fn exit_code(result: &Result<RunOutcome>) -> i32 {
    match result {
        Ok(o) if o.converged() => 0,
        Ok(_) => 3,
        Err(Error::Config(_)) | Err(Error::UnknownPreset(_)) => 2,
        Err(Error::NonConvergence { .. }) | Err(Error::Unidentifiable(_)) => 3,
        Err(_) => 1,
    }
}

/// Fit problems become record failures; other errors abort the run.
fn soft<T>(r: Result<T>, what: &str, failures: &mut Vec<String>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ (Error::NonConvergence { .. } | Error::Unidentifiable(_) | Error::LowContrast { .. })) => {
            failures.push(format!("{what}: {e}"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

struct Produced {
    payload: Payload,
    failures: Vec<String>,
    files: Vec<(String, String)>,
}

/// Loads `path`, applies `overrides` and runs it.
pub fn run_file(path: &Path, overrides: &Overrides) -> Result<RunOutcome> {
    let mut cfg = RunConfig::load(path)?;
    cfg.apply(overrides)?;
    run(&cfg)
}

/// Executes a validated config and writes its artifacts to `cfg.out_dir()`.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let dir = cfg.out_dir();
    if cfg.experiment == ExperimentKind::Report {
        let artifacts = write_report(&cfg.report.runs, &dir)?;
        return Ok(RunOutcome { dir, record: None, artifacts });
    }
    let nm = cfg.noise.build().map_err(|e| match e {
        Error::InvalidArgument(m) => Error::Config(format!("`noise`: {m}")),
        other => other,
    })?;
    let (fixtures, preset) = if cfg.noise.preset == "ideal" {
        (vec![], None)
    } else {
        let (fixture, source) = preset_fixture(&cfg.noise.preset)?;
        (vec![source], Some(fixture))
    };
    let started_at = chrono::Utc::now().to_rfc3339();
    let produced = match cfg.experiment {
        ExperimentKind::Rb => run_rb(cfg, &nm)?,
        ExperimentKind::Icrb => run_icrb_experiment(cfg, &nm)?,
        ExperimentKind::Tomography => run_tomography(cfg, &nm)?,
        ExperimentKind::Spam => run_spam(cfg, &nm)?,
        ExperimentKind::Coherence => run_coherence(cfg, &nm)?,
        ExperimentKind::Calibrate => run_calibrate(cfg, &nm)?,
        ExperimentKind::Report => unreachable!("handled above"),
    };
    let payload = serde_json::to_value(&produced.payload)?;
    let record = RunRecord {
        schema: RECORD_SCHEMA.into(),
        toolkit_version: TOOLKIT_VERSION.into(),
        experiment: cfg.experiment.label().into(),
        seed: cfg.seed,
        config: cfg.clone(),
        config_sha256: sha256_hex(&canonical_json(cfg)?),
        started_at,
        finished_at: chrono::Utc::now().to_rfc3339(),
        fixtures,
        preset,
        noise: Some(nm.summary()),
        converged: produced.failures.is_empty(),
        failures: produced.failures,
        payload_sha256: sha256_hex(&canonical_json(&payload)?),
        payload,
    };
    std::fs::create_dir_all(&dir)?;
    let mut artifacts = Vec::new();
    for (name, content) in &produced.files {
        let path = dir.join(name);
        std::fs::write(&path, content)?;
        artifacts.push(path);
    }
    let path = dir.join(RECORD_FILE);
    std::fs::write(&path, serde_json::to_string_pretty(&record)? + "\n")?;
    artifacts.push(path);
    for f in &record.failures {
        log::warn!("{f}");
    }
    Ok(RunOutcome { dir, record: Some(record), artifacts })
}

fn run_rb(cfg: &RunConfig, nm: &NoiseModel) -> Result<Produced> {
    let mut failures = Vec::new();
    let mut files = Vec::new();
    let mut qubits = Vec::new();
    for &q in &cfg.qubits {
        let rb = crate::benchmarking::RbConfig { qubit: q, ..cfg.rb_config() };
        let curve = run_clifford_rb(&rb, nm)?;
        let fit = soft(fit_rb(&curve), &format!("RB fit Q{q}"), &mut failures)?;
        let bootstrap_std = if fit.is_some() && rb.bootstrap >= 2 {
            soft(bootstrap_rb_fidelity(&curve, rb.bootstrap, rb.seed), &format!("RB bootstrap Q{q}"), &mut failures)?
        } else {
            None
        };
        files.push((format!("rb_q{q}.csv"), csv::rb_csv(&curve)?));
        let xs: Vec<f64> = curve.depths.iter().map(|&d| d as f64).collect();
        let mut series = vec![svg::Series::points("mean survival", xs.clone(), curve.mean.clone(), Some(curve.std.clone()))];
        if let Some(f) = &fit {
            let dense: Vec<f64> = (0..=200).map(|k| xs[0] * (xs[xs.len() - 1] / xs[0]).powf(k as f64 / 200.0)).collect();
            let ys = dense.iter().map(|d| f.a * f.b.powf(*d) + f.c).collect();
            series.push(svg::Series::line(format!("fit F = {:.4}", f.fidelity), dense, ys));
        }
        files.push((format!("rb_q{q}.svg"), svg::line_plot(&format!("Clifford RB, Q{q}"), "sequence length", "P(0)", &series, true)));
        qubits.push(RbQubit { qubit: q, curve, fit, bootstrap_std });
    }
    Ok(Produced { payload: Payload::Rb { qubits }, failures, files })
}

fn run_icrb_experiment(cfg: &RunConfig, nm: &NoiseModel) -> Result<Produced> {
    let rb = cfg.rb_config();
    let reference = run_icrb(&rb, false, nm)?;
    let interleaved = run_icrb(&rb, true, nm)?;
    let mut failures = Vec::new();
    let result = soft(analyze_icrb(&rb, &reference, &interleaved), "character fits", &mut failures)?;
    let mut files = vec![("characters.csv".to_string(), csv::characters_csv(&[&reference, &interleaved])?)];
    let xs: Vec<f64> = reference.depths.iter().map(|&d| d as f64).collect();
    let names = ["P1 (Q0)", "P2 (Q1)", "P12"];
    let mut series = Vec::new();
    for (data, tag) in [(&reference, "ref"), (&interleaved, "int")] {
        for k in 0..3 {
            let ys = data.characters.iter().map(|c| c[k]).collect();
            series.push(svg::Series::points(format!("{tag} {}", names[k]), xs.clone(), ys, None));
        }
    }
    let title = match &result {
        Some(r) => format!("Interleaved character RB, F_CZ = {:.4}", r.fidelity),
        None => "Interleaved character RB".to_string(),
    };
    files.push(("icrb.svg".into(), svg::line_plot(&title, "sequence length", "character-weighted signal", &series, true)));
    Ok(Produced { payload: Payload::Icrb { reference, interleaved, result }, failures, files })
}

fn run_tomography(cfg: &RunConfig, nm: &NoiseModel) -> Result<Produced> {
    let shots = cfg.shots_for(cfg.tomography.shots);
    let confusion = if cfg.tomography.estimate_confusion {
        Some(estimate_confusion(nm, cfg.shots_for(cfg.tomography.confusion_shots), cfg.seed ^ 0x5350_414d)?)
    } else {
        None
    };
    let result = bell_tomography(nm, shots, cfg.seed, confusion.as_ref())?;
    let mut failures = Vec::new();
    if !result.mle_converged {
        failures.push("MLE reconstruction hit the iteration limit".to_string());
    }
    let ideal = DensityMatrix::bell_phi_plus();
    let mut files = Vec::new();
    let mut polar = Vec::new();
    for (tag, r) in [("raw", &result.raw), ("corrected", &result.corrected), ("mle", &result.mle)] {
        polar.push((tag.to_string(), polar_rendering(&r.rho)));
        files.push((format!("rho_{tag}.csv"), csv::density_csv(&r.rho)?));
        let title = format!("{} ({}), F = {:.3}", r.method.label(), nm.label(), r.fidelity);
        files.push((format!("cityscape_{tag}.svg"), svg::cityscape(&title, &r.rho, Some(&ideal))));
    }
    files.push(("confusion.csv".into(), csv::confusion_csv(&result.confusion)?));
    Ok(Produced {
        payload: Payload::Tomography(TomographyPayload { result, estimated_confusion: confusion.is_some(), polar }),
        failures,
        files,
    })
}

fn run_spam(cfg: &RunConfig, nm: &NoiseModel) -> Result<Produced> {
    let estimated = estimate_confusion(nm, cfg.shots_for(cfg.spam.shots), cfg.seed)?;
    let installed = nm.readout().clone();
    let max_abs_deviation = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .map(|(i, j)| (estimated.get(i, j) - installed.get(i, j)).abs())
        .fold(0.0, f64::max);
    let files = vec![
        ("confusion_estimated.csv".to_string(), csv::confusion_csv(&estimated)?),
        ("confusion_installed.csv".to_string(), csv::confusion_csv(&installed)?),
    ];
    let parity_flip_estimate = estimated.parity_flip_estimate();
    Ok(Produced {
        payload: Payload::Spam(SpamPayload { installed, estimated, max_abs_deviation, parity_flip_estimate }),
        failures: vec![],
        files,
    })
}

fn coherence_time(kind: DecayKind, nm: &NoiseModel, q: usize) -> Option<f64> {
    let noise = nm.qubit(q);
    let t = match kind {
        DecayKind::Ramsey => implied_t2_star(noise),
        DecayKind::Echo if noise.dephasing_rate == 0.0 => return None,
        DecayKind::Echo => noise.t2_s(),
        DecayKind::T1 => noise.t1_s?,
    };
    t.is_finite().then_some(t)
}

fn run_coherence(cfg: &RunConfig, nm: &NoiseModel) -> Result<Produced> {
    let c = &cfg.coherence;
    let mut failures = Vec::new();
    let mut files = Vec::new();
    let mut entries = Vec::new();
    for &q in &cfg.qubits {
        for &kind in &c.kinds {
            let configured = coherence_time(kind, nm, q);
            let t_max = match (c.t_max_s, configured) {
                (Some(t), _) => t,
                (None, Some(t)) => c.span * t,
                (None, None) if kind == DecayKind::Echo => {
                    log::info!("skipping echo on Q{q}: the model has no Markovian dephasing");
                    continue;
                }
                (None, None) => {
                    return Err(Error::Config(format!(
                        "`coherence.t_max_s`: the model has no finite {} time on Q{q}; set the grid end explicitly",
                        kind.label()
                    )))
                }
            };
            let grid = delay_grid(t_max, c.points);
            let seed = crate::rng::derive_seed(cfg.seed, &[q as u64, kind as u64]);
            let trace = match kind {
                DecayKind::Ramsey => simulate_ramsey(q, &grid, nm, cfg.shots_for(c.shots), seed, c.detuning_hz)?,
                DecayKind::Echo => simulate_echo(q, &grid, nm, cfg.shots_for(c.shots), seed)?,
                DecayKind::T1 => simulate_t1(q, &grid, nm, cfg.shots_for(c.t1_shots), seed)?,
            };
            let fit = soft(fit_decay(&trace, kind), &format!("{} fit Q{q}", kind.label()), &mut failures)?;
            let stem = format!("{}_q{q}", kind.label());
            files.push((format!("{stem}.csv"), csv::trace_csv(&trace)?));
            let us: Vec<f64> = trace.times_s.iter().map(|t| t * 1e6).collect();
            let mut series = vec![svg::Series::points("data", us.clone(), trace.signal.clone(), Some(trace.std.clone()))];
            if let Some(f) = &fit {
                let dense: Vec<f64> = (0..=400).map(|k| t_max * k as f64 / 400.0).collect();
                let ys = dense
                    .iter()
                    .map(|t| f.amplitude * (-(t / f.t).powf(f.alpha)).exp() * (std::f64::consts::TAU * f.frequency_hz * t + f.phase).cos() + f.offset)
                    .collect();
                series.push(svg::Series::line(format!("fit T = {:.3e} s", f.t), dense.iter().map(|t| t * 1e6).collect(), ys));
            }
            let y_label = if kind == DecayKind::Echo { "P(0)" } else if kind == DecayKind::T1 { "P(odd)" } else { "P(1)" };
            files.push((format!("{stem}.svg"), svg::line_plot(&format!("{} Q{q}", kind.label()), "delay (us)", y_label, &series, false)));
            entries.push(CoherenceEntry { trace, fit, configured_s: configured });
        }
    }
    Ok(Produced { payload: Payload::Coherence { entries }, failures, files })
}

fn run_calibrate(cfg: &RunConfig, nm: &NoiseModel) -> Result<Produced> {
    let c = &cfg.calibrate;
    let shots = cfg.shots_for(c.shots);
    let mut failures = Vec::new();
    let mut files = Vec::new();
    let pi = std::f64::consts::PI;
    let gate = QuantumChannel::unitary(cz_with_phase_errors(c.cz_phases_pi[1] * pi, c.cz_phases_pi[0] * pi))?
        .then(nm.cz_channel())?;
    let cz = soft(calibrate_cz_phases(&gate, nm, c.points, shots, cfg.seed), "CZ phase calibration", &mut failures)?;
    if let Some(cal) = &cz {
        files.push(("cz_phase_scans.csv".into(), csv::phase_scans_csv(&cal.scans)?));
        let series: Vec<svg::Series> = cal
            .scans
            .iter()
            .map(|s| svg::Series::points(format!("Q{} target, control |{}>", s.target, s.control_state), s.thetas.clone(), s.p1.clone(), None))
            .collect();
        files.push(("cz_phase.svg".into(), svg::line_plot("CZ phase scans", "virtual Z (rad)", "P(1)", &series, false)));
    }
    let mut allxy_results = Vec::new();
    let mut chevrons = Vec::new();
    for &q in &cfg.qubits {
        let r = allxy(q, nm, shots, crate::rng::derive_seed(cfg.seed, &[q as u64]))?;
        files.push((format!("allxy_q{q}.csv"), csv::allxy_csv(&r)?));
        let idx: Vec<f64> = (0..r.values.len()).map(|i| i as f64).collect();
        files.push((
            format!("allxy_q{q}.svg"),
            svg::line_plot(
                &format!("ALLXY Q{q}"),
                "pair index",
                "<Z>",
                &[svg::Series::points("measured", idx.clone(), r.values.clone(), None), svg::Series::line("ideal", idx, r.ideal.clone())],
                false,
            ),
        ));
        allxy_results.push(r);
        let omega = rabi_frequency_from_x90(nm.gate_times().x90_ns[q]);
        let n = c.chevron_points;
        let detunings: Vec<f64> = (0..n).map(|k| -c.chevron_detuning_hz + 2.0 * c.chevron_detuning_hz * k as f64 / (n - 1) as f64).collect();
        let durations = delay_grid(2.0 / omega, 201);
        let map = rabi_chevron(omega, &detunings, &durations)?;
        files.push((format!("chevron_q{q}.csv"), csv::chevron_csv(&map)?));
        let ns: Vec<f64> = durations.iter().map(|t| t * 1e9).collect();
        let mhz: Vec<f64> = detunings.iter().map(|d| d * 1e-6).collect();
        files.push((format!("chevron_q{q}.svg"), svg::heatmap(&format!("Rabi chevron Q{q}"), "pulse length (ns)", "detuning (MHz)", &ns, &mhz, &map.probability)));
        chevrons.push((q, map));
    }
    Ok(Produced {
        payload: Payload::Calibrate(CalibratePayload { injected_phases_pi: c.cz_phases_pi, cz, allxy: allxy_results, chevrons }),
        failures,
        files,
    })
}
