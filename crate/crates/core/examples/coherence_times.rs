//! Ramsey, Hahn echo and T1 experiments driven by the temperature presets,
//! each fitted with a stretched-exponential decay.
//!
//! ```text
//! cargo run --release --example coherence_times
//! ```

use spinq::experiments::{
    delay_grid, fit_decay, implied_t2_star, simulate_echo, simulate_ramsey, simulate_t1, DecayKind,
};
use spinq::noise::{load_noise_preset, preset_fixture};

fn main() -> spinq::Result<()> {
    println!("{:<7} {:<3} {:<7} {:>12} {:>12} {:>7}", "preset", "q", "kind", "configured", "fitted", "alpha");
    for preset in ["300mK", "740mK"] {
        let nm = load_noise_preset(preset)?;
        let (fixture, _) = preset_fixture(preset)?;
        for (q, spec) in fixture.qubit.iter().enumerate() {
            let noise = nm.qubit(q);
            let seed = 100 + q as u64;

            let t2s = implied_t2_star(noise);
            let ramsey = simulate_ramsey(q, &delay_grid(3.0 * t2s, 121), &nm, Some(10_000), seed, None)?;
            let fit = fit_decay(&ramsey, DecayKind::Ramsey)?;
            row(preset, q, "Ramsey", spec.t2_star_s, fit.t, fit.alpha);

            if let Some(t2e) = spec.t2_echo_s {
                let echo = simulate_echo(q, &delay_grid(3.0 * t2e, 121), &nm, Some(10_000), seed)?;
                let fit = fit_decay(&echo, DecayKind::Echo)?;
                row(preset, q, "echo", t2e, fit.t, fit.alpha);
            }

            let t1 = simulate_t1(q, &delay_grid(3.0 * spec.t1_s, 121), &nm, Some(200), seed)?;
            let fit = fit_decay(&t1, DecayKind::T1)?;
            row(preset, q, "T1", spec.t1_s, fit.t, fit.alpha);
        }
    }
    Ok(())
}

fn row(preset: &str, q: usize, kind: &str, configured: f64, fitted: f64, alpha: f64) {
    let (scale, unit) = if configured > 1e-3 { (1e3, "ms") } else { (1e6, "us") };
    println!(
        "{preset:<7} Q{q:<2} {kind:<7} {:>9.2} {unit} {:>9.2} {unit} {alpha:>7.2}",
        configured * scale,
        fitted * scale
    );
}
