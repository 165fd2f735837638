//! Config runner, run records, reports and the `spinq` binary.

use std::path::{Path, PathBuf};
use std::process::Command;

use spinq::benchmarking::IcrbResult;
use spinq::runner::{
    collect_records, exit_code, render_report, run, run_file, ExperimentKind, Overrides, RunConfig, RunRecord,
    RECORD_FILE,
};

fn shipped_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn spinq() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinq"))
}

fn small_icrb(out: &Path) -> RunConfig {
    let mut cfg = RunConfig::new(ExperimentKind::Icrb);
    cfg.seed = 7;
    cfg.noise.preset = "740mK".into();
    cfg.rb.depths = vec![1, 2, 4, 8, 16, 32];
    cfg.rb.sequences_per_depth = 8;
    cfg.rb.bootstrap = 10;
    cfg.out = Some(out.to_path_buf());
    cfg
}

#[test]
fn unknown_key_exits_2_without_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never");
    let config = dir.path().join("bad.toml");
    std::fs::write(
        &config,
        format!("schema = \"spinq-config/1\"\nexperiment = \"rb\"\nout = {:?}\n\n[rb]\nsequences = 3\n", out),
    )
    .unwrap();

    let result = run_file(&config, &Overrides::default());
    assert_eq!(exit_code(&result), 2);

    let output = spinq().arg("--config").arg(&config).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("sequences"), "{stderr}");
    assert!(!out.exists());
}

#[test]
fn invalid_values_name_their_key() {
    let mut cfg = RunConfig::new(ExperimentKind::Coherence);
    cfg.coherence.points = 1;
    let err = run(&cfg).unwrap_err().to_string();
    assert!(err.contains("coherence.points"), "{err}");
    assert_eq!(exit_code(&Err(spinq::Error::Config(err))), 2);

    let mut cfg = RunConfig::new(ExperimentKind::Rb);
    cfg.noise.preset = "4K".into();
    assert_eq!(exit_code(&run(&cfg)), 2);
}

#[test]
fn identical_runs_have_identical_payloads() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&small_icrb(&dir.path().join("a"))).unwrap().record.unwrap();
    let b = run(&small_icrb(&dir.path().join("b"))).unwrap().record.unwrap();
    assert_eq!(a.payload_sha256, b.payload_sha256);
    assert_eq!(serde_json::to_string(&a.payload).unwrap(), serde_json::to_string(&b.payload).unwrap());

    let mut other = small_icrb(&dir.path().join("c"));
    other.seed = 8;
    let c = run(&other).unwrap().record.unwrap();
    assert_ne!(a.payload_sha256, c.payload_sha256);
}

#[test]
fn written_records_revalidate() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = run(&small_icrb(&dir.path().join("run"))).unwrap();
    let record = RunRecord::load(&outcome.dir.join(RECORD_FILE)).unwrap();
    record.validate().unwrap();
    assert!(record.toolkit_matches());
    assert!(record.fixtures.iter().any(|f| f.name == "preset_740mK.toml"));
    for artifact in &outcome.artifacts {
        assert!(artifact.is_file(), "{}", artifact.display());
    }

    let mut text: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(outcome.dir.join(RECORD_FILE)).unwrap()).unwrap();
    text["payload"]["kind"] = serde_json::Value::String("tampered".into());
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, serde_json::to_string(&text).unwrap()).unwrap();
    assert!(RunRecord::load(&tampered).and_then(|r| r.validate()).is_err());
}

#[test]
fn shipped_icrb_config_reproduces_cz_fidelity() {
    let dir = tempfile::tempdir().unwrap();
    let overrides = Overrides { out: Some(dir.path().join("icrb")), ..Overrides::default() };
    let outcome = run_file(&shipped_config("icrb_740mK.toml"), &overrides).unwrap();
    assert_eq!(exit_code(&Ok(outcome.clone())), 0);
    let record = outcome.record.unwrap();
    assert_eq!(record.seed, 7);
    let result: IcrbResult = serde_json::from_value(record.payload["result"].clone()).unwrap();
    assert!((result.fidelity - 0.993).abs() <= 0.003, "F_CZ = {}", result.fidelity);
}

#[test]
fn flat_decay_is_flagged_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(ExperimentKind::Rb);
    cfg.rb.depths = vec![1, 4, 16];
    cfg.rb.sequences_per_depth = 3;
    cfg.rb.bootstrap = 0;
    cfg.qubits = vec![0];
    cfg.out = Some(dir.path().join("flat"));
    let result = run(&cfg);
    assert_eq!(exit_code(&result), 3);
    let outcome = result.unwrap();
    let record = RunRecord::load(&outcome.dir.join(RECORD_FILE)).unwrap();
    assert!(!record.converged);
    assert!(!record.failures.is_empty());
}

#[test]
fn report_rejects_empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    let err = collect_records(&[dir.path().to_path_buf()]).unwrap_err().to_string();
    assert!(err.contains("no run records"), "{err}");

    let output = spinq().arg("--report").arg(dir.path()).output().unwrap();
    assert_ne!(output.status.code(), Some(0));
}

#[test]
fn report_lays_out_tomography_and_metric_tables() {
    let dir = tempfile::tempdir().unwrap();
    let runs = dir.path().join("runs");

    let mut tomo = RunConfig::new(ExperimentKind::Tomography);
    tomo.noise.preset = "740mK".into();
    tomo.tomography.shots = Some(2000);
    tomo.out = Some(runs.join("tomography"));
    run(&tomo).unwrap();

    let mut rb = RunConfig::new(ExperimentKind::Rb);
    rb.noise.preset = "740mK".into();
    rb.rb.sequences_per_depth = 5;
    rb.rb.bootstrap = 0;
    rb.out = Some(runs.join("rb"));
    run(&rb).unwrap();

    run(&small_icrb(&runs.join("icrb"))).unwrap();

    let records = collect_records(&[runs.clone()]).unwrap();
    assert_eq!(records.len(), 3);
    let report = render_report(&records).unwrap();
    for row in ["Fidelity", "Concurrence", "Frobenius distance", "Trace"] {
        assert!(report.markdown.lines().any(|l| l.starts_with(&format!("| {row}"))), "missing row {row}");
    }
    let header = "| Qubit | frequency | T1 | T2* | T2echo | X90 | CZ180 | 1Q F_Clif | 2Q F_CZ |";
    assert!(report.markdown.contains(header), "{}", report.markdown);
    assert!(report.figures.iter().any(|(name, svg)| name.starts_with("cityscape") && svg.starts_with("<svg")));

    let output = spinq().arg("--report").arg(&runs).arg("--out").arg(dir.path().join("report")).output().unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", String::from_utf8_lossy(&output.stderr));
    assert!(dir.path().join("report").join("report.md").is_file());
}

#[test]
fn binary_applies_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spam");
    let status = spinq()
        .arg("--config")
        .arg(shipped_config("spam_740mK.toml"))
        .args(["--seed", "99", "--analytic"])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let record = RunRecord::load(&out.join(RECORD_FILE)).unwrap();
    assert_eq!(record.seed, 99);
    assert!(record.config.analytic);
    assert!(record.payload["max_abs_deviation"].as_f64().unwrap() < 1e-9);
}

#[test]
fn clifford_table_flag_prints_24_rows() {
    let output = spinq().arg("--clifford-table").output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 24);
}
