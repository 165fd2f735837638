//! Calibrates the single-qubit phases picked up by a CZ gate, then checks
//! that applying the corrections removes them.
//!
//! ```text
//! cargo run --example cz_phase_calibration
//! ```

use std::f64::consts::PI;

use spinq::algebra::linalg::{cz, embed, equal_up_to_phase, rz};
use spinq::algebra::QuantumChannel;
use spinq::experiments::{calibrate_cz_phases, cz_with_phase_errors};
use spinq::noise::NoiseModel;

fn main() -> spinq::Result<()> {
    let (phi1, phi0) = (0.3 * PI, -0.1 * PI);
    let gate = QuantumChannel::unitary(cz_with_phase_errors(phi1, phi0))?;
    let nm = NoiseModel::ideal(2);

    for shots in [None, Some(1000)] {
        let cal = calibrate_cz_phases(&gate, &nm, 24, shots, 9)?;
        println!(
            "{:<10} phi0 = {:+.4} pi (true {:+.4}), phi1 = {:+.4} pi (true {:+.4})",
            shots.map_or("analytic".to_string(), |n| format!("{n} shots")),
            cal.phi0 / PI,
            phi0 / PI,
            cal.phi1 / PI,
            phi1 / PI
        );
        for scan in &cal.scans {
            println!(
                "    target Q{} control |{}>: contrast {:.3}, theta* = {:+.4} pi",
                scan.target,
                scan.control_state,
                scan.contrast,
                scan.theta_star / PI
            );
        }
        if shots.is_none() {
            let undo = embed(&rz(cal.phi1), &[1], 2) * embed(&rz(cal.phi0), &[0], 2);
            let corrected = cz_with_phase_errors(phi1, phi0) * undo;
            println!("    corrected gate equals CZ: {}", equal_up_to_phase(&corrected, &cz(), 1e-9));
        }
    }
    Ok(())
}
