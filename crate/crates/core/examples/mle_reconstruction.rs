//! Maximum-likelihood reconstruction of a known physical state.
//!
//! The 740 mK SPAM-corrected reference matrix is not positive semidefinite;
//! its nearest physical state serves as ground truth. Counts are sampled at
//! increasing shot numbers and reconstructed both linearly and by MLE.
//!
//! ```text
//! cargo run --release --example mle_reconstruction
//! ```

use spinq::noise::NoiseModel;
use spinq::tomography::{
    expectations_from_counts, frobenius_distance, linear_reconstruct, measure_state_settings, mle_reconstruct,
    reference_matrices,
};

fn main() -> spinq::Result<()> {
    let (refs, _) = reference_matrices()?;
    let source = refs
        .iter()
        .find(|r| r.temperature == "740mK" && r.method == "spam-corrected")
        .expect("reference matrices are shipped");
    println!(
        "source: {} {}, min eigenvalue {:.4}",
        source.temperature, source.method, source.rho.min_eigenvalue()
    );
    let truth = source.rho.nearest_physical();
    let nm = NoiseModel::ideal(2);

    println!("{:>9} {:>14} {:>14} {:>14} {:>10}", "shots", "linear dist", "linear min ev", "MLE dist", "MLE iters");
    for shots in [1_000u64, 10_000, 100_000, 1_000_000] {
        let counts = measure_state_settings(&truth, Some(shots), &nm, shots)?;
        let linear = linear_reconstruct(&expectations_from_counts(&counts, None)?);
        let mle = mle_reconstruct(&counts, None)?;
        println!(
            "{shots:>9} {:>14.4} {:>14.4} {:>14.4} {:>10}",
            frobenius_distance(&linear, &truth)?,
            linear.min_eigenvalue(),
            frobenius_distance(&mle.rho, &truth)?,
            mle.iterations
        );
    }
    Ok(())
}
