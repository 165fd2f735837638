//! Drives the config runner from code: builds an ICRB config, runs it twice
//! into a scratch directory, checks that the payloads hash identically and
//! renders a report from the records.
//!
//! ```text
//! cargo run --release --example run_config [OUT_DIR]
//! ```

use std::path::PathBuf;

use spinq::runner::{run, write_report, ExperimentKind, RunConfig};

fn main() -> spinq::Result<()> {
    let root = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("spinq-example"));

    let mut cfg = RunConfig::new(ExperimentKind::Icrb);
    cfg.seed = 7;
    cfg.noise.preset = "740mK".into();
    cfg.rb.depths = vec![1, 2, 4, 8, 16, 32, 64];
    cfg.rb.bootstrap = 50;

    let mut hashes = Vec::new();
    for attempt in ["a", "b"] {
        cfg.out = Some(root.join(format!("icrb_{attempt}")));
        let outcome = run(&cfg)?;
        let record = outcome.record.expect("runs write a record");
        println!("{}: {} artifacts, payload sha256 {}", outcome.dir.display(), outcome.artifacts.len(), record.payload_sha256);
        hashes.push(record.payload_sha256);
    }
    println!("payloads identical: {}", hashes[0] == hashes[1]);

    let written = write_report(&[root.clone()], &root.join("report"))?;
    for path in written {
        println!("wrote {}", path.display());
    }
    let report = std::fs::read_to_string(root.join("report").join("report.md"))?;
    println!("{}", report.lines().take(20).collect::<Vec<_>>().join("\n"));
    Ok(())
}
