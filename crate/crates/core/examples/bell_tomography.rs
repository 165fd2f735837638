//! Bell-state tomography on both presets: prepare with the native circuit,
//! measure the nine Pauli settings and reconstruct three ways.
//!
//! ```text
//! cargo run --release --example bell_tomography [shots]
//! ```

use spinq::noise::load_noise_preset;
use spinq::tomography::{bell_tomography, polar_rendering};

fn main() -> spinq::Result<()> {
    let shots: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    for preset in ["300mK", "740mK"] {
        let nm = load_noise_preset(preset)?;
        let t = bell_tomography(&nm, Some(shots), 1, None)?;
        println!("== {preset}, {shots} shots per setting");
        println!("{:<22} {:>9} {:>12} {:>10} {:>7}", "method", "fidelity", "concurrence", "Frobenius", "trace");
        for r in [&t.raw, &t.corrected, &t.mle] {
            println!(
                "{:<22} {:>9.3} {:>12.3} {:>10.3} {:>7.3}",
                r.method.label(),
                r.fidelity,
                r.concurrence,
                r.frobenius_distance,
                r.trace
            );
        }
        println!("MLE matrix:");
        for row in polar_rendering(&t.mle.rho) {
            println!("  {}", row.join("  "));
        }
    }
    Ok(())
}
