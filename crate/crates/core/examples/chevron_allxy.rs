//! Rabi chevron from the X90 duration and an ALLXY check of a deliberately
//! over-rotated qubit.
//!
//! ```text
//! cargo run --example chevron_allxy
//! ```

use spinq::experiments::{allxy, rabi_chevron, rabi_frequency_from_x90};
use spinq::noise::NoiseModel;

fn main() -> spinq::Result<()> {
    let rabi = rabi_frequency_from_x90(84.0);
    let detunings: Vec<f64> = (-20..=20).map(|k| k as f64 * 0.5e6).collect();
    let durations: Vec<f64> = (0..=60).map(|k| k as f64 * 10e-9).collect();
    let map = rabi_chevron(rabi, &detunings, &durations)?;
    println!("Rabi frequency {:.3} MHz, resonant pi time {:.1} ns", rabi / 1e6, map.resonant_pi_time() * 1e9);

    // A coarse text rendering of the chevron: rows are detunings.
    let shades = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    for (row, d) in map.probability.iter().zip(&detunings).step_by(4) {
        let line: String = row.iter().map(|p| shades[((p * 9.0).round() as usize).min(9)]).collect();
        println!("{:>6.1} MHz |{line}|", d / 1e6);
    }

    println!();
    let nm = NoiseModel::ideal(2).with_overrotation(0, 0.05)?;
    let ideal = allxy(0, &NoiseModel::ideal(2), None, 0)?;
    let over = allxy(0, &nm, None, 0)?;
    println!("{:<4} {:>7} {:>7}", "seq", "ideal", "+5%");
    for ((label, a), b) in ideal.labels.iter().zip(&ideal.values).zip(&over.values) {
        println!("{label:<4} {a:>7.3} {b:>7.3}");
    }
    println!("max deviation with 5% over-rotation: {:.3}", over.max_deviation());
    Ok(())
}
