//! Interleaved character randomized benchmarking of the CZ gate at 740 mK.
//!
//! Prints the three character decays of the reference and interleaved
//! experiments and the CZ fidelity derived from them.
//!
//! ```text
//! cargo run --release --example icrb_cz
//! ```

use spinq::benchmarking::{run_icrb_pair, RbConfig};
use spinq::noise::load_noise_preset;

fn main() -> spinq::Result<()> {
    let nm = load_noise_preset("740mK")?;
    let cfg = RbConfig { seed: 7, depths: vec![1, 2, 4, 8, 16, 32, 64], ..RbConfig::default() };
    let (reference, interleaved, result) = run_icrb_pair(&cfg, &nm)?;

    println!("depth   P1_ref  P2_ref  P12_ref | P1_int  P2_int  P12_int");
    for (i, d) in reference.depths.iter().enumerate() {
        let r = reference.characters[i];
        let n = interleaved.characters[i];
        println!("{d:>5}  {:7.4} {:7.4} {:7.4} | {:7.4} {:7.4} {:7.4}", r[0], r[1], r[2], n[0], n[1], n[2]);
    }
    println!();
    println!("alpha_ref = {:?}", result.reference.alpha);
    println!("alpha_int = {:?}", result.interleaved.alpha);
    let spread = result.fidelity_bootstrap_std.unwrap_or(result.fidelity_err);
    println!("F_CZ = {:.2}% ± {:.2}%", 100.0 * result.fidelity, 100.0 * spread);
    Ok(())
}
