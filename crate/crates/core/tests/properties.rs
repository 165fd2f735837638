//! Property tests for invariants that must hold for arbitrary inputs.

use num_complex::Complex64;
use proptest::prelude::*;

use spinq::algebra::linalg::{self, CMatrix};
use spinq::algebra::parity::parity_projector;
use spinq::algebra::{
    apply_circuit, circuit_unitary, logical_unitary, pauli_expectation, project_parity, DensityMatrix, GateTimes,
    PauliString, PhaseFrame, QuantumChannel,
};
use spinq::benchmarking::{character_combine, fit_rb, DecayCurve};
use spinq::clifford::{c1_element, invert_c1_sequence, TwoQubitCliffords};
use spinq::experiments::{
    double_readout, heralded_initialize, rabi_chevron, simulate_echo, HeraldOptions,
};
use spinq::noise::{depolarizing_channel, relaxation_channel, ConfusionMatrix, NoiseModel, QubitNoise};
use spinq::tomography::{
    concurrence, expectations_from_counts, linear_reconstruct, log_likelihood, mle_reconstruct, CountsTable,
    ExpectationSet, Setting,
};

fn complex_matrix(dim: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim)
        .prop_map(move |v| CMatrix::from_fn(dim, dim, |i, j| Complex64::new(v[2 * (i * dim + j)], v[2 * (i * dim + j) + 1])))
}

/// Random physical state `G G^dagger / tr`.
fn physical_state() -> impl Strategy<Value = DensityMatrix> {
    complex_matrix(4).prop_map(|g| {
        let m = &g * g.adjoint();
        let tr = m.trace().re.max(1e-12);
        DensityMatrix::new(m.scale(1.0 / tr)).expect("Hermitian by construction")
    })
}

/// Random Hermitian unit-trace matrix, not necessarily positive.
fn hermitian_unit_trace() -> impl Strategy<Value = DensityMatrix> {
    complex_matrix(4).prop_map(|a| {
        let mut h = (&a + a.adjoint()).scale(0.5);
        let shift = (h.trace().re - 1.0) / 4.0;
        for i in 0..4 {
            h[(i, i)] -= Complex64::new(shift, 0.0);
        }
        DensityMatrix::new(h).expect("Hermitian by construction")
    })
}

fn random_unitary_1q() -> impl Strategy<Value = CMatrix> {
    (0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU)
        .prop_map(|(a, b, c)| linalg::rz(a) * linalg::ry(b) * linalg::rz(c))
}

fn row_stochastic() -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.01f64..1.0, 4), 4).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                // a dominant diagonal keeps the matrix well conditioned
                r[i] += 6.0;
                let s: f64 = r.iter().sum();
                r.iter().map(|x| x / s).collect()
            })
            .collect()
    })
}

fn distribution() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 4).prop_map(|v| {
        let s: f64 = v.iter().sum::<f64>().max(1e-9);
        v.iter().map(|x| x / s).collect()
    })
}

fn counts_table() -> impl Strategy<Value = CountsTable> {
    prop::collection::vec(prop::collection::vec(0u64..333, 3), 9).prop_map(|rows| {
        let counts = rows.into_iter().map(|r| vec![r[0], r[1], r[2], 1000 - r.iter().sum::<u64>()]).collect();
        CountsTable::from_counts(Setting::all(), counts).expect("nine settings of 1000 shots")
    })
}

fn frob(a: &CMatrix, b: &CMatrix) -> f64 {
    linalg::frobenius_norm(&(a - b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn channels_preserve_trace_and_hermiticity(rho in physical_state(), p in 0.0f64..1.0, t in 0.0f64..5.0) {
        let channels = [
            depolarizing_channel(p, 2).unwrap(),
            depolarizing_channel(p, 1).unwrap(),
            relaxation_channel(1.0, 1.5, t).unwrap(),
        ];
        for ch in &channels {
            prop_assert!(ch.completeness_deviation() < 1e-9);
            let out = if ch.n_qubits() == 2 { ch.apply(&rho).unwrap() } else { ch.apply_to(&rho, &[1]).unwrap() };
            prop_assert!((out.trace() - 1.0).abs() < 1e-9);
            prop_assert_eq!(linalg::hermitian_deviation(out.matrix()), 0.0);
        }
    }

    #[test]
    fn depolarizing_composes_multiplicatively(rho in physical_state(), p1 in 0.0f64..1.0, p2 in 0.0f64..1.0) {
        let a = depolarizing_channel(p1, 2).unwrap();
        let b = depolarizing_channel(p2, 2).unwrap();
        let joint = depolarizing_channel(1.0 - (1.0 - p1) * (1.0 - p2), 2).unwrap();
        let seq = b.apply(&a.apply(&rho).unwrap()).unwrap();
        prop_assert!(frob(seq.matrix(), joint.apply(&rho).unwrap().matrix()) < 1e-12);
    }

    #[test]
    fn channel_composition_is_associative(rho in physical_state(), p in 0.0f64..1.0, t in 0.0f64..3.0) {
        let a = depolarizing_channel(p, 1).unwrap();
        let b = relaxation_channel(2.0, 1.0, t).unwrap();
        let c = QuantumChannel::unitary(linalg::hadamard()).unwrap();
        let left = a.then(&b).unwrap().then(&c).unwrap();
        let right = a.then(&b.then(&c).unwrap()).unwrap();
        let l = left.apply_to(&rho, &[0]).unwrap();
        let r = right.apply_to(&rho, &[0]).unwrap();
        prop_assert!(frob(l.matrix(), r.matrix()) < 1e-12);
    }

    #[test]
    fn noiseless_circuits_are_invertible(rho in physical_state(), index in 0usize..11520) {
        let circuit = TwoQubitCliffords::get().synthesize(index, &GateTimes::default());
        let out = apply_circuit(&rho, &circuit, None, &mut PhaseFrame::new(2)).unwrap();
        let u = circuit_unitary(&circuit, &mut PhaseFrame::new(2)).unwrap();
        let back = u.adjoint() * out.matrix() * &u;
        prop_assert!(frob(&back, rho.matrix()) < 1e-9);
    }

    #[test]
    fn pauli_decomposition_is_complete(rho in hermitian_unit_trace()) {
        let mut sum = CMatrix::zeros(4, 4);
        for sigma in PauliString::all() {
            let e = pauli_expectation(&rho, sigma).unwrap();
            sum += sigma.matrix().scale(e / 4.0);
        }
        prop_assert!(frob(&sum, rho.matrix()) < 1e-12);
        let round = linear_reconstruct(&ExpectationSet::of_state(&rho).unwrap());
        prop_assert!(frob(round.matrix(), rho.matrix()) < 1e-12);
    }

    #[test]
    fn parity_split_is_complete(rho in physical_state()) {
        let sum = parity_projector(0) + parity_projector(1);
        prop_assert_eq!(sum, linalg::identity(4));
        let proj = project_parity(&rho).unwrap();
        prop_assert!((proj.even_probability + proj.odd_probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn confusion_is_linear_and_invertible(rows in row_stochastic(), d1 in distribution(), d2 in distribution(), w in 0.0f64..1.0) {
        let a = ConfusionMatrix::from_rows(rows).unwrap();
        let mix: Vec<f64> = d1.iter().zip(&d2).map(|(x, y)| w * x + (1.0 - w) * y).collect();
        let f_mix = a.apply(&mix).unwrap();
        let f1 = a.apply(&d1).unwrap();
        let f2 = a.apply(&d2).unwrap();
        for k in 0..4 {
            prop_assert!((f_mix[k] - (w * f1[k] + (1.0 - w) * f2[k])).abs() < 1e-12);
        }
        let back = a.correct(&f1).unwrap();
        for k in 0..4 {
            prop_assert!((back[k] - d1[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn uniform_is_fixed_only_by_doubly_stochastic(rows in row_stochastic()) {
        let a = ConfusionMatrix::from_rows(rows).unwrap();
        let out = a.apply(&[0.25; 4]).unwrap();
        let uniform = out.iter().all(|x| (x - 0.25).abs() < 1e-12);
        prop_assert_eq!(uniform, a.is_doubly_stochastic(1e-10));
    }

    #[test]
    fn concurrence_is_locally_invariant(rho in physical_state(), u1 in random_unitary_1q(), u0 in random_unitary_1q()) {
        let u = linalg::kron(&u1, &u0);
        let rotated = DensityMatrix::new(&u * rho.matrix() * u.adjoint()).unwrap();
        prop_assert!((concurrence(&rho).unwrap() - concurrence(&rotated).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn clifford_sequences_invert(seq in prop::collection::vec(0usize..24, 1..256)) {
        let inverse = invert_c1_sequence(&seq);
        let mut total = linalg::identity(2);
        for &i in seq.iter().chain(std::iter::once(&inverse)) {
            total = &c1_element(i).unitary * total;
        }
        prop_assert!(linalg::equal_up_to_phase(&total, &linalg::identity(2), 1e-9));
    }

    #[test]
    fn chevron_is_symmetric_in_detuning(rabi in 1e5f64..1e7, detuning in 0.0f64..2e7, t in 0.0f64..2e-6) {
        let map = rabi_chevron(rabi, &[-detuning, 0.0, detuning], &[t]).unwrap();
        prop_assert!((map.probability[0][0] - map.probability[2][0]).abs() < 1e-12);
        let resonant = (std::f64::consts::PI * rabi * t).sin().powi(2);
        prop_assert!((map.probability[1][0] - resonant).abs() < 1e-12);
    }

    #[test]
    fn mle_is_physical_and_beats_projected_inversion(table in counts_table()) {
        let out = mle_reconstruct(&table, None).unwrap();
        prop_assert!(out.rho.min_eigenvalue() >= -1e-9);
        prop_assert!((out.rho.trace() - 1.0).abs() <= 1e-9);
        prop_assert!(out.history.windows(2).all(|w| w[1] >= w[0]));
        let projected = linear_reconstruct(&expectations_from_counts(&table, None).unwrap()).nearest_physical();
        prop_assert!(out.log_likelihood >= log_likelihood(&table, None, &projected).unwrap() - 1e-9);
    }

    #[test]
    fn character_combination_matches_signed_sums(p in prop::array::uniform4(0.0f64..1.0)) {
        let sign = |s: usize, bit: usize| if (s >> bit) & 1 == 1 { -1.0 } else { 1.0 };
        let oracle = [
            (0..4).map(|s| sign(s, 0) * p[s]).sum::<f64>(),
            (0..4).map(|s| sign(s, 1) * p[s]).sum::<f64>(),
            (0..4).map(|s| sign(s, 0) * sign(s, 1) * p[s]).sum::<f64>(),
        ];
        let got = character_combine(p);
        for k in 0..3 {
            prop_assert!((got[k] - oracle[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn rb_fit_recovers_its_own_model(a in 0.2f64..0.5, b in 0.9f64..0.995, c in 0.3f64..0.6) {
        let depths: Vec<usize> = (0..=9).map(|k| 1 << k).collect();
        let per_sequence = depths.iter().map(|&d| vec![a * b.powi(d as i32) + c; 2]).collect();
        let fit = fit_rb(&DecayCurve::from_sequences(depths, per_sequence, None)).unwrap();
        prop_assert!((fit.a - a).abs() < 1e-6);
        prop_assert!((fit.b - b).abs() < 1e-6);
        prop_assert!((fit.c - c).abs() < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn echo_refocuses_any_quasi_static_spread(sigma in 0.0f64..2e6) {
        let noise = QubitNoise { sigma_f_hz: sigma, ..QubitNoise::IDEAL };
        let nm = NoiseModel::ideal(2).with_qubit(0, noise).unwrap();
        let times: Vec<f64> = (0..20).map(|k| k as f64 * 1e-6).collect();
        let trace = simulate_echo(0, &times, &nm, None, 0).unwrap();
        prop_assert!(trace.signal.iter().all(|s| (s - 1.0).abs() < 1e-9));
    }

    #[test]
    fn heralded_state_is_pure_and_read_back(rho in physical_state(), control_state in 0u8..2) {
        let nm = NoiseModel::ideal(2);
        let opts = HeraldOptions { control_state, ..HeraldOptions::default() };
        let Ok(h) = heralded_initialize(&rho, &nm, opts) else {
            // an input without weight on the heralded preimage is rejected
            return Ok(());
        };
        prop_assert!((h.state.purity() - 1.0).abs() < 1e-12);
        let label = h.state.populations().iter().position(|p| *p > 0.5).unwrap();
        let readout = double_readout(&h.state, &nm, control_state, None, 0).unwrap();
        prop_assert!((readout.distribution[label] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn logical_unitary_of_empty_circuit_is_identity() {
    let c = spinq::algebra::Circuit::new(2);
    assert_eq!(logical_unitary(&c), linalg::identity(4));
}
