use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use spinq::clifford::c1_table_text;
use spinq::runner::{exit_code, run_file, write_report, Overrides};

/// Runs a characterization protocol described by a TOML config, or renders a
/// report over existing run directories.
#[derive(Parser, Debug)]
#[command(name = "spinq", version, about)]
struct Cli {
    /// Run config (TOML).
    #[arg(long, value_name = "PATH", conflicts_with_all = ["report", "clifford_table"])]
    config: Option<PathBuf>,

    /// Overrides the config's seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Overrides the noise preset (ideal, 300mK, 740mK).
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,

    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Exact probabilities instead of sampled shots.
    #[arg(long)]
    analytic: bool,

    /// Renders report.md from the run records under DIR.
    #[arg(long, value_name = "DIR")]
    report: Option<PathBuf>,

    /// Prints the single-qubit Clifford compilation table.
    #[arg(long)]
    clifford_table: bool,

    /// Directory holding preset and reference fixtures.
    #[arg(long, value_name = "DIR", env = "SPINQ_FIXTURE_DIR")]
    fixtures: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(dir) = &cli.fixtures {
        std::env::set_var(spinq::noise::FIXTURE_DIR_ENV, dir);
    }
    if cli.clifford_table {
        print!("{}", c1_table_text());
        return ExitCode::SUCCESS;
    }
    if let Some(dir) = &cli.report {
        let out = cli.out.clone().unwrap_or_else(|| dir.clone());
        return match write_report(std::slice::from_ref(dir), &out) {
            Ok(files) => {
                for f in files {
                    println!("{}", f.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        };
    }
    let Some(config) = &cli.config else {
        eprintln!("error: one of --config, --report or --clifford-table is required");
        return ExitCode::from(2);
    };
    let overrides = Overrides { seed: cli.seed, preset: cli.preset.clone(), out: cli.out.clone(), analytic: cli.analytic };
    let result = run_file(config, &overrides);
    match &result {
        Ok(outcome) => {
            if let Some(r) = &outcome.record {
                println!("{} run -> {} (payload {})", r.experiment, outcome.dir.display(), &r.payload_sha256[..16]);
                for f in &r.failures {
                    eprintln!("fit failure: {f}");
                }
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
