//! Markdown summaries of run directories: a tomography table and a
//! per-qubit metrics table.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use super::record::{RunRecord, RECORD_FILE};
use super::{svg, Payload};
use crate::algebra::DensityMatrix;
use crate::experiments::DecayKind;
use crate::{Error, Result};

/// Rendered report: markdown text plus SVG files keyed by name.
#[derive(Debug, Clone)]
pub struct Report {
    pub markdown: String,
    pub figures: Vec<(String, String)>,
}

/// Loads every record found in `dirs`, either directly or one level down.
pub fn collect_records(dirs: &[PathBuf]) -> Result<Vec<(PathBuf, RunRecord)>> {
    let mut found = Vec::new();
    for dir in dirs {
        if !dir.is_dir() {
            return Err(Error::Record(format!("{} is not a directory", dir.display())));
        }
        let direct = dir.join(RECORD_FILE);
        if direct.is_file() {
            found.push((dir.clone(), RunRecord::load(&direct)?));
            continue;
        }
        let mut subdirs: Vec<PathBuf> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.join(RECORD_FILE).is_file())
            .collect();
        subdirs.sort();
        for sub in subdirs {
            let record = RunRecord::load(&sub.join(RECORD_FILE))?;
            found.push((sub, record));
        }
    }
    if found.is_empty() {
        let names: Vec<String> = dirs.iter().map(|d| d.display().to_string()).collect();
        return Err(Error::Record(format!("no run records found in {}", names.join(", "))));
    }
    Ok(found)
}

fn pct(x: f64) -> String {
    format!("{:.1}%", 100.0 * x)
}

fn time(t: f64) -> String {
    if t >= 1e-3 {
        format!("{:.0} ms", t * 1e3)
    } else {
        format!("{:.1} µs", t * 1e6)
    }
}

#[derive(Default)]
struct QubitRow {
    frequency_ghz: Option<f64>,
    t1: Option<f64>,
    t2_star: Option<f64>,
    t2_echo: Option<f64>,
    x90_ns: Option<f64>,
    cz_ns: Option<f64>,
    clifford: Option<f64>,
    cz_fidelity: Option<(f64, f64)>,
    bell: Option<(f64, f64)>,
}

fn cell<T>(v: &Option<T>, f: impl Fn(&T) -> String) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), f)
}

/// Renders the tables and figures for `records`.
pub fn render_report(records: &[(PathBuf, RunRecord)]) -> Result<Report> {
    let mut md = String::from("# Characterization report\n\n");
    let mut figures = Vec::new();
    let mut rows: BTreeMap<(String, usize), QubitRow> = BTreeMap::new();
    let mut tomography_columns: Vec<(String, [f64; 4])> = Vec::new();
    let mut extra = String::new();
    for (dir, record) in records {
        let preset = record.config.noise.preset.clone();
        for q in 0..2 {
            let row = rows.entry((preset.clone(), q)).or_default();
            if let Some(p) = &record.preset {
                row.frequency_ghz = Some(p.qubit[q].frequency_ghz);
            }
            if let Some(n) = &record.noise {
                row.x90_ns = n.gate_times.x90_ns.get(q).copied();
                row.cz_ns = Some(n.gate_times.cz_ns);
            }
        }
        let payload: Payload = record.payload_as()?;
        match payload {
            Payload::Rb { qubits } => {
                for r in qubits {
                    if let Some(f) = r.fit {
                        rows.entry((preset.clone(), r.qubit)).or_default().clifford = Some(f.fidelity);
                    }
                }
            }
            Payload::Icrb { result: Some(r), .. } => {
                let err = r.fidelity_bootstrap_std.unwrap_or(r.fidelity_err);
                rows.entry((preset.clone(), 0)).or_default().cz_fidelity = Some((r.fidelity, err));
            }
            Payload::Icrb { result: None, .. } => {}
            Payload::Coherence { entries } => {
                for e in entries {
                    let Some(f) = e.fit else { continue };
                    let row = rows.entry((preset.clone(), e.trace.qubit)).or_default();
                    match e.trace.kind {
                        DecayKind::Ramsey => row.t2_star = Some(f.t),
                        DecayKind::Echo => row.t2_echo = Some(f.t),
                        DecayKind::T1 => row.t1 = Some(f.t),
                    }
                }
            }
            Payload::Tomography(t) => {
                let r = &t.result;
                rows.entry((preset.clone(), 0)).or_default().bell = Some((r.raw.fidelity, r.corrected.fidelity));
                for m in [&r.raw, &r.corrected, &r.mle] {
                    tomography_columns
                        .push((format!("{preset} {}", m.method.label()), [m.fidelity, m.concurrence, m.frobenius_distance, m.trace]));
                }
                let name = format!("cityscape_{}_{}.svg", preset, dir.file_name().map_or("run".into(), |s| s.to_string_lossy().into_owned()));
                figures.push((name.clone(), svg::cityscape(&format!("SPAM corrected, {preset}"), &r.corrected.rho, Some(&DensityMatrix::bell_phi_plus()))));
                let _ = writeln!(extra, "![{name}]({name})\n");
            }
            Payload::Spam(s) => {
                let _ = writeln!(extra, "## Readout confusion ({preset})\n\n| prepared | 00 | 01 | 10 | 11 |\n|---|---|---|---|---|");
                for (i, row) in s.estimated.rows().iter().enumerate() {
                    let _ = writeln!(extra, "| {i:02b} | {} |", row.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join(" | "));
                }
                let _ = writeln!(extra, "\nLargest deviation from the installed matrix: {:.4}\n", s.max_abs_deviation);
            }
            Payload::Calibrate(c) => {
                if let Some(cz) = c.cz {
                    let _ = writeln!(
                        extra,
                        "## CZ phase calibration ({preset})\n\nphi0 = {:.4} pi, phi1 = {:.4} pi (injected {:.4} pi, {:.4} pi)\n",
                        cz.phi0 / std::f64::consts::PI,
                        cz.phi1 / std::f64::consts::PI,
                        c.injected_phases_pi[0],
                        c.injected_phases_pi[1]
                    );
                }
            }
        }
    }
    if !tomography_columns.is_empty() {
        md.push_str("## Tomography results for the two-qubit Bell state\n\n|");
        for (name, _) in &tomography_columns {
            let _ = write!(md, " | {name}");
        }
        md.push_str(" |\n|---|");
        md.push_str(&"---|".repeat(tomography_columns.len()));
        md.push('\n');
        for (k, label) in ["Fidelity", "Concurrence", "Frobenius distance", "Trace"].iter().enumerate() {
            let _ = write!(md, "| {label}");
            for (_, v) in &tomography_columns {
                let _ = write!(md, " | {:.3}", v[k]);
            }
            md.push_str(" |\n");
        }
        md.push('\n');
    }
    md.push_str("## Summary of qubit metrics\n\n");
    md.push_str("| Qubit | frequency | T1 | T2* | T2echo | X90 | CZ180 | 1Q F_Clif | 2Q F_CZ | Bell state fidelity Raw (SPAM corr.) |\n");
    md.push_str("|---|---|---|---|---|---|---|---|---|---|\n");
    for ((preset, q), r) in &rows {
        let _ = writeln!(
            md,
            "| Q{q} @ {preset} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
            cell(&r.frequency_ghz, |f| format!("{f:.2} GHz")),
            cell(&r.t1, |t| time(*t)),
            cell(&r.t2_star, |t| time(*t)),
            cell(&r.t2_echo, |t| time(*t)),
            cell(&r.x90_ns, |t| format!("{t:.0} ns")),
            cell(&r.cz_ns, |t| format!("{t:.0} ns")),
            cell(&r.clifford, |f| pct(*f)),
            cell(&r.cz_fidelity, |(f, e)| format!("{} ± {}", pct(*f), pct(*e))),
            cell(&r.bell, |(raw, corr)| format!("{} ({})", pct(*raw), pct(*corr))),
        );
    }
    md.push('\n');
    md.push_str(&extra);
    md.push_str("## Runs\n\n| directory | experiment | seed | payload sha256 | converged |\n|---|---|---|---|---|\n");
    let mut fixtures = BTreeMap::new();
    for (dir, r) in records {
        let _ = writeln!(md, "| {} | {} | {} | `{}` | {} |", dir.display(), r.experiment, r.seed, &r.payload_sha256[..16], r.converged);
        for f in &r.fixtures {
            fixtures.insert(f.name.clone(), (f.origin.clone(), f.sha256.clone()));
        }
    }
    if !fixtures.is_empty() {
        md.push_str("\n## Fixture provenance\n\n| fixture | origin | sha256 |\n|---|---|---|\n");
        for (name, (origin, sha)) in fixtures {
            let _ = writeln!(md, "| {name} | {origin} | `{sha}` |");
        }
    }
    Ok(Report { markdown: md, figures })
}

/// Collects, renders and writes `report.md` plus figures into `out`.
pub fn write_report(dirs: &[PathBuf], out: &Path) -> Result<Vec<PathBuf>> {
    let records = collect_records(dirs)?;
    let report = render_report(&records)?;
    std::fs::create_dir_all(out)?;
    let mut written = Vec::new();
    for (name, content) in &report.figures {
        let p = out.join(name);
        std::fs::write(&p, content)?;
        written.push(p);
    }
    let p = out.join("report.md");
    std::fs::write(&p, &report.markdown)?;
    written.push(p);
    Ok(written)
}
