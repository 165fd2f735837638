//! Heralded initialization from a fully mixed state and the two-step parity
//! readout that distinguishes all four basis states.
//!
//! ```text
//! cargo run --example parity_init_readout
//! ```

use spinq::algebra::DensityMatrix;
use spinq::experiments::{double_readout, heralded_initialize, HeraldOptions};
use spinq::noise::NoiseModel;

const LABELS: [&str; 4] = ["00", "01", "10", "11"];

fn main() -> spinq::Result<()> {
    let mixed = DensityMatrix::maximally_mixed(2);
    let ideal = NoiseModel::ideal(2);

    for control_state in [0u8, 1] {
        let opts = HeraldOptions { control_state, ..HeraldOptions::default() };
        let h = heralded_initialize(&mixed, &ideal, opts)?;
        let pops = h.state.populations();
        let label = pops.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| LABELS[i]).unwrap();
        println!(
            "CROT on control |{control_state}>: acceptance {:.4}, purity {:.6}, state |{label}>",
            h.acceptance,
            h.state.purity()
        );
    }
    let first = heralded_initialize(&mixed, &ideal, HeraldOptions { first_filter_only: true, ..HeraldOptions::default() })?;
    println!("first filter only: acceptance {:.4}, purity {:.4}", first.acceptance, first.state.purity());

    let noisy = NoiseModel::ideal(2).with_parity_flip(0.03)?;
    println!();
    println!("double readout of basis states (parity meter error 3%):");
    for label in 0..4 {
        let rho = DensityMatrix::basis(2, label);
        let clean = double_readout(&rho, &ideal, 0, None, 0)?;
        let flipped = double_readout(&rho, &noisy, 0, Some(10_000), label as u64)?;
        let ideal_dist: Vec<String> = clean.distribution.iter().map(|p| format!("{p:.3}")).collect();
        println!(
            "  |{}>: ideal [{}]  noisy counts {:?}",
            LABELS[label],
            ideal_dist.join(", "),
            flipped.counts.unwrap_or_default()
        );
    }
    Ok(())
}
