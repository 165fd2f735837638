//! Values reported for the device, reproduced from the shipped fixtures and
//! the calibrated presets.

use approx::assert_abs_diff_eq;

use spinq::algebra::state::bell_phi_plus_vector;
use spinq::algebra::{sample_counts, DensityMatrix};
use spinq::benchmarking::{fit_rb, run_clifford_rb, RbConfig};
use spinq::experiments::{rabi_chevron, rabi_frequency_from_x90};
use spinq::noise::{load_noise_preset, preset_fixture};
use spinq::tomography::{
    estimate_confusion, frobenius_distance, measure_state_settings, mle_reconstruct, reference_matrices,
    state_fidelity, Method, TomographyResult,
};

fn renormalized_row(label: &str, row: usize) -> Vec<f64> {
    let (fixture, _) = preset_fixture(label).unwrap();
    let raw = &fixture.readout.confusion[row];
    let sum: f64 = raw.iter().sum();
    raw.iter().map(|x| x / sum).collect()
}

#[test]
fn readout_of_ground_state_at_300mk() {
    let nm = load_noise_preset("300mK").unwrap();
    let want = renormalized_row("300mK", 0);
    let counts = sample_counts(&DensityMatrix::basis(2, 0), 1_000_000, 3, Some(nm.readout())).unwrap();
    for (f, w) in counts.frequencies().iter().zip(&want) {
        assert!((f - w).abs() < 0.001, "{f} vs {w}");
    }
    let pushed = nm.readout().apply(&[1.0, 0.0, 0.0, 0.0]).unwrap();
    for (p, w) in pushed.iter().zip(&want) {
        assert_abs_diff_eq!(*p, *w, epsilon = 1e-12);
    }
    assert_abs_diff_eq!(want[0] * 1.007, 0.958, epsilon = 1e-12);
}

#[test]
fn clifford_rb_at_300mk_matches_q0() {
    let nm = load_noise_preset("300mK").unwrap();
    let cfg = RbConfig { seed: 8, bootstrap: 0, ..RbConfig::default() };
    let fit = fit_rb(&run_clifford_rb(&cfg, &nm).unwrap()).unwrap();
    assert!((0.992..=0.996).contains(&fit.fidelity), "F = {}", fit.fidelity);
}

#[test]
fn confusion_estimate_at_740mk() {
    let nm = load_noise_preset("740mK").unwrap();
    let shots = 10_000u64;
    let est = estimate_confusion(&nm, Some(shots), 12).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let p = nm.readout().get(i, j);
            let tol = 3.0 * (p * (1.0 - p) / shots as f64).sqrt() + 1e-12;
            assert!((est.get(i, j) - p).abs() <= tol, "A[{i}][{j}] = {:.4} vs {p:.4}", est.get(i, j));
        }
    }
}

#[test]
fn corrected_matrix_at_740mk_keeps_negative_populations() {
    let (refs, _) = reference_matrices().unwrap();
    let r = refs.iter().find(|r| r.temperature == "740mK" && r.method == "spam-corrected").unwrap();
    let pops = r.rho.populations();
    assert!(pops.iter().any(|p| *p < 0.0), "{pops:?}");
    let metrics = TomographyResult::evaluate(r.rho.clone(), Method::SpamCorrected).unwrap();
    assert!(metrics.min_eigenvalue < 0.0);
    assert_abs_diff_eq!(metrics.trace, 0.942, epsilon = 0.001 + 1e-9);
}

#[test]
fn mle_from_printed_300mk_matrix_is_near_bell() {
    let (refs, _) = reference_matrices().unwrap();
    let raw = refs.iter().find(|r| r.temperature == "300mK" && r.method == "linear").unwrap();
    let truth = raw.rho.nearest_physical();
    let counts = measure_state_settings(&truth, Some(100_000), &spinq::noise::NoiseModel::ideal(2), 2).unwrap();
    let out = mle_reconstruct(&counts, None).unwrap();
    assert!(frobenius_distance(&out.rho, &truth).unwrap() < 0.02);
    let f = state_fidelity(&out.rho, &bell_phi_plus_vector()).unwrap();
    assert!(f > 0.9, "F = {f}");
    let eig = out.rho.eigenvalues();
    assert!(eig[3] > 0.9 && eig[2] < 0.1, "{eig:?}");
    let coherence = out.rho.matrix()[(0, 3)];
    assert!(coherence.arg().abs() < 0.05 * std::f64::consts::PI, "phase {}", coherence.arg());
}

#[test]
fn printed_300mk_raw_matrix_fidelity() {
    let (refs, _) = reference_matrices().unwrap();
    let raw = refs.iter().find(|r| r.temperature == "300mK" && r.method == "linear").unwrap();
    let f = state_fidelity(&raw.rho, &bell_phi_plus_vector()).unwrap();
    assert!((f - 0.977).abs() <= 0.02, "F = {f}");
    assert_abs_diff_eq!(raw.rho.trace(), 1.022, epsilon = 1e-9);
}

#[test]
fn printed_300mk_raw_matrix_frobenius_distance() {
    let (refs, _) = reference_matrices().unwrap();
    let raw = refs.iter().find(|r| r.temperature == "300mK" && r.method == "linear").unwrap();
    let d = frobenius_distance(&raw.rho, &DensityMatrix::bell_phi_plus()).unwrap();
    assert!((d - 0.065).abs() <= 0.02, "distance {d:.4} vs printed 0.065");
}

#[test]
fn pi_time_from_84ns_quarter_turn() {
    let rabi = rabi_frequency_from_x90(84.0);
    assert_abs_diff_eq!(rabi / 1e6, 2.976, epsilon = 1e-3);
    let durations: Vec<f64> = (0..=400).map(|k| k as f64 * 1e-9).collect();
    let map = rabi_chevron(rabi, &[-1e6, 0.0, 1e6], &durations).unwrap();
    assert_abs_diff_eq!(map.resonant_pi_time(), 168e-9, epsilon = 1e-12);
}
