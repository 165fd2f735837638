//! Recomputes fidelity, concurrence, Frobenius distance and trace from the
//! four printed reference density matrices and compares them with the
//! printed metrics.
//!
//! ```text
//! cargo run --example tomography_tables
//! ```

use spinq::algebra::state::bell_phi_plus_vector;
use spinq::algebra::DensityMatrix;
use spinq::tomography::{concurrence, frobenius_distance, reference_matrices, state_fidelity};

fn main() -> spinq::Result<()> {
    let (refs, source) = reference_matrices()?;
    println!("fixture {} ({}), sha256 {}", source.name, source.origin, &source.sha256[..12]);
    let bell = DensityMatrix::bell_phi_plus();
    println!(
        "{:<8} {:<16} {:>15} {:>15} {:>15} {:>15}",
        "temp", "method", "fidelity", "concurrence", "Frobenius", "trace"
    );
    for r in &refs {
        let f = state_fidelity(&r.rho, &bell_phi_plus_vector())?;
        let c = concurrence(&r.rho)?;
        let d = frobenius_distance(&r.rho, &bell)?;
        let t = r.rho.trace();
        let pair = |ours: f64, theirs: Option<f64>| match theirs {
            Some(v) => format!("{ours:.3} ({v:.3})"),
            None => format!("{ours:.3}"),
        };
        let m = r.reported.as_ref();
        println!(
            "{:<8} {:<16} {:>15} {:>15} {:>15} {:>15}",
            &r.temperature,
            &r.method,
            pair(f, m.map(|m| m.fidelity)),
            pair(c, m.map(|m| m.concurrence)),
            pair(d, m.map(|m| m.frobenius_distance)),
            pair(t, m.map(|m| m.trace)),
        );
    }
    println!("(printed values in parentheses)");
    Ok(())
}
