//! Acceptance checks. Each criterion prints one `PASS` or `FAIL` line with the
//! numbers it was judged on; the process exits non-zero if any failed.

use std::time::Instant;

use spinq::algebra::linalg::equal_up_to_phase;
use spinq::algebra::state::bell_phi_plus_vector;
use spinq::algebra::{bell_prep, logical_unitary, Circuit, DensityMatrix, GateTimes};
use spinq::benchmarking::{fit_rb, run_clifford_rb, run_icrb_pair, RbConfig};
use spinq::clifford::{c1_compose, compile_c1, enumerate_c1, mean_physical_x_count, TwoQubitCliffords};
use spinq::experiments::{
    delay_grid, double_readout, fit_decay, heralded_initialize, simulate_echo, simulate_ramsey, simulate_t1,
    DecayKind, HeraldOptions,
};
use spinq::noise::{depolarizing_channel, load_noise_preset, preset_fixture, ConfusionMatrix, NoiseModel};
use spinq::runner::{run, ExperimentKind, RunConfig, RunRecord, RECORD_FILE};
use spinq::tomography::{
    bell_tomography, concurrence, frobenius_distance, measure_pauli_settings, measure_state_settings,
    mle_reconstruct, reference_matrices, state_fidelity,
};

type Outcome = spinq::Result<(bool, String)>;

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("printed density matrices reproduce the printed metrics", criterion_1),
        ("single-qubit Clifford compiler", criterion_2),
        ("RB recovers injected depolarizing", criterion_3),
        ("ICRB character decays and CZ fidelity", criterion_4),
        ("SPAM mitigation", criterion_5),
        ("MLE physicality, monotonicity and recovery", criterion_6),
        ("coherence times from preset-driven experiments", criterion_7),
        ("heralded initialization and double readout", criterion_8),
        ("two-qubit Clifford group", criterion_9),
        ("run determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match check() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2}: {} {name} ({:.1} s)\n    {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn criterion_1() -> Outcome {
    let (refs, _) = reference_matrices()?;
    let mut pass = true;
    let mut notes = Vec::new();
    let mut checked = 0;
    for r in refs.iter().filter(|r| r.reported.is_some()) {
        let m = r.reported.as_ref().expect("filtered");
        checked += 1;
        let ours = [
            ("F", state_fidelity(&r.rho, &bell_phi_plus_vector())?, m.fidelity, 0.02),
            ("C", concurrence(&r.rho)?, m.concurrence, 0.02),
            ("D", frobenius_distance(&r.rho, &DensityMatrix::bell_phi_plus())?, m.frobenius_distance, 0.02),
            ("Tr", r.rho.trace(), m.trace, 0.001 + 1e-9),
        ];
        for (label, got, want, tol) in ours {
            if !within(got, want, tol) {
                pass = false;
                notes.push(format!("{} {} {label}={got:.3} vs {want:.3}", r.temperature, r.method));
            }
        }
    }
    pass &= checked == 4;
    let detail = if notes.is_empty() {
        format!("{checked} matrices, all metrics within tolerance")
    } else {
        format!("{checked} matrices; out of tolerance: {}", notes.join("; "))
    };
    Ok((pass, detail))
}

fn criterion_2() -> Outcome {
    let elements = enumerate_c1();
    let times = GateTimes::default();
    let recomposed = elements.iter().all(|e| {
        let mut c = Circuit::new(1);
        for g in compile_c1(e.index, 0, &times).gates {
            c.push(g).expect("single-qubit gate");
        }
        equal_up_to_phase(&logical_unitary(&c), &e.unitary, 1e-9)
    });
    let products = (0..24).all(|a| {
        (0..24).all(|b| {
            let u = &elements[a].unitary * &elements[b].unitary;
            equal_up_to_phase(&u, &elements[c1_compose(a, b)].unitary, 1e-9)
        })
    });
    let mean = mean_physical_x_count();
    let pass = elements.len() == 24 && recomposed && products && within(mean, 0.8333, 5e-5) && within(mean, 0.83, 0.005);
    Ok((pass, format!("{} elements, recompose {recomposed}, products closed {products}, mean X {mean:.4}", elements.len())))
}

fn criterion_3() -> Outcome {
    let target = 0.994;
    let cfg = RbConfig {
        depths: (0..=8).map(|k| 1 << k).collect(),
        sequences_per_depth: 25,
        shots: Some(200),
        seed: 3,
        bootstrap: 0,
        injected_depolarizing: Some(2.0 * (1.0 - target)),
        ..RbConfig::default()
    };
    let fit = fit_rb(&run_clifford_rb(&cfg, &NoiseModel::ideal(2))?)?;
    let pass = (0.992..=0.996).contains(&fit.fidelity);
    Ok((pass, format!("injected F {:.2}%, fitted F {:.3}%", 100.0 * target, 100.0 * fit.fidelity)))
}

fn criterion_4() -> Outcome {
    let base = RbConfig { seed: 4, bootstrap: 0, ..RbConfig::default() };

    let (_, _, clean) = run_icrb_pair(&base, &NoiseModel::ideal(2))?;
    let alphas: Vec<f64> = clean.reference.alpha.iter().chain(&clean.interleaved.alpha).copied().collect();
    let a_ok = alphas.iter().all(|a| within(*a, 1.0, 0.001)) && within(clean.fidelity, 1.0, 1e-9);

    let global = RbConfig { injected_depolarizing: Some(0.02), ..base.clone() };
    let (_, _, dep) = run_icrb_pair(&global, &NoiseModel::ideal(2))?;
    let b_ok = dep.reference.alpha.iter().all(|a| within(*a, 0.98, 0.005));

    let f_star = 0.981;
    let p = (1.0 - f_star) * 4.0 / 3.0;
    let nm = NoiseModel::ideal(2).with_cz_channel(depolarizing_channel(p, 2)?)?;
    let (_, _, cz) = run_icrb_pair(&base, &nm)?;
    let c_ok = within(cz.fidelity, f_star, 0.003);

    Ok((
        a_ok && b_ok && c_ok,
        format!(
            "(a) alphas {:?} F {:.6}; (b) alpha_ref {:.4?}; (c) F {:.4} vs {f_star}",
            alphas.iter().map(|a| format!("{a:.4}")).collect::<Vec<_>>(),
            clean.fidelity,
            dep.reference.alpha,
            cz.fidelity
        ),
    ))
}

fn criterion_5() -> Outcome {
    let confusion = load_noise_preset("740mK")?.readout().clone();
    let nm = NoiseModel::ideal(2).with_readout(confusion)?;
    let t = bell_tomography(&nm, Some(10_000), 5, None)?;
    let main_ok = t.raw.fidelity <= 0.85 && t.corrected.fidelity >= 0.97;

    let synthetic = ConfusionMatrix::from_rows(vec![
        vec![0.92, 0.03, 0.03, 0.02],
        vec![0.04, 0.90, 0.02, 0.04],
        vec![0.03, 0.02, 0.91, 0.04],
        vec![0.01, 0.04, 0.05, 0.90],
    ])?;
    let with = bell_tomography(&NoiseModel::ideal(2).with_readout(synthetic)?, Some(10_000), 6, None)?;
    let without = bell_tomography(&NoiseModel::ideal(2), Some(10_000), 6, None)?;
    let synth_ok = within(with.corrected.fidelity, without.raw.fidelity, 0.01);

    Ok((
        main_ok && synth_ok,
        format!(
            "740mK confusion: raw {:.3}, corrected {:.3}; synthetic: corrected {:.4} vs confusion-free {:.4}",
            t.raw.fidelity, t.corrected.fidelity, with.corrected.fidelity, without.raw.fidelity
        ),
    ))
}

fn criterion_6() -> Outcome {
    let (refs, _) = reference_matrices()?;
    let ideal = NoiseModel::ideal(2);
    let preset = load_noise_preset("740mK")?;
    let mut tables = vec![
        measure_pauli_settings(&bell_prep(preset.gate_times()), Some(100), &preset, 1)?,
        measure_pauli_settings(&bell_prep(preset.gate_times()), Some(10_000), &preset, 2)?,
    ];
    for (k, r) in refs.iter().enumerate() {
        tables.push(measure_state_settings(&r.rho.nearest_physical(), Some(500), &ideal, 10 + k as u64)?);
    }
    let mut worst_eig = f64::INFINITY;
    let mut worst_trace: f64 = 0.0;
    let mut monotone = true;
    for table in &tables {
        for readout in [None, Some(preset.readout())] {
            let out = mle_reconstruct(table, readout)?;
            worst_eig = worst_eig.min(out.rho.min_eigenvalue());
            worst_trace = worst_trace.max((out.rho.trace() - 1.0).abs());
            monotone &= out.history.windows(2).all(|w| w[1] >= w[0]);
        }
    }
    let truth = refs
        .iter()
        .find(|r| r.temperature == "740mK" && r.method == "spam-corrected")
        .expect("shipped reference")
        .rho
        .nearest_physical();
    let counts = measure_state_settings(&truth, Some(1_000_000), &ideal, 99)?;
    let dist = frobenius_distance(&mle_reconstruct(&counts, None)?.rho, &truth)?;
    let pass = worst_eig >= -1e-9 && worst_trace <= 1e-9 && monotone && dist <= 0.02;
    Ok((
        pass,
        format!(
            "{} reconstructions: min eigenvalue {worst_eig:.2e}, max |Tr-1| {worst_trace:.1e}, monotone {monotone}; 1e6-shot distance {dist:.4}",
            2 * tables.len()
        ),
    ))
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for preset in ["300mK", "740mK"] {
        let nm = load_noise_preset(preset)?;
        let (fixture, _) = preset_fixture(preset)?;
        for (q, spec) in fixture.qubit.iter().enumerate() {
            let seed = 70 + q as u64;
            let mut check = |kind: &str, configured: f64, fitted: f64| {
                let rel = (fitted - configured).abs() / configured;
                pass &= rel <= 0.10;
                parts.push(format!("{preset} Q{q} {kind} {:+.1}%", 100.0 * (fitted / configured - 1.0)));
            };
            let trace = simulate_ramsey(q, &delay_grid(3.0 * spec.t2_star_s, 121), &nm, Some(10_000), seed, None)?;
            check("T2*", spec.t2_star_s, fit_decay(&trace, DecayKind::Ramsey)?.t);
            if let Some(t2e) = spec.t2_echo_s {
                let trace = simulate_echo(q, &delay_grid(3.0 * t2e, 121), &nm, Some(10_000), seed)?;
                check("T2echo", t2e, fit_decay(&trace, DecayKind::Echo)?.t);
            }
            if preset == "740mK" || q == 0 {
                let trace = simulate_t1(q, &delay_grid(3.0 * spec.t1_s, 121), &nm, Some(200), seed)?;
                check("T1", spec.t1_s, fit_decay(&trace, DecayKind::T1)?.t);
            }
        }
    }
    Ok((pass, parts.join(", ")))
}

fn criterion_8() -> Outcome {
    let ideal = NoiseModel::ideal(2);
    let h = heralded_initialize(&DensityMatrix::maximally_mixed(2), &ideal, HeraldOptions::default())?;
    let herald_ok = within(h.acceptance, 0.25, 1e-9) && within(h.state.purity(), 1.0, 1e-9);
    let mut decoded = true;
    for control_state in [0u8, 1] {
        for label in 0..4 {
            let r = double_readout(&DensityMatrix::basis(2, label), &ideal, control_state, None, 0)?;
            decoded &= within(r.distribution[label], 1.0, 1e-12);
        }
    }
    Ok((
        herald_ok && decoded,
        format!("acceptance {:.12}, purity {:.12}, all basis states decoded {decoded}", h.acceptance, h.state.purity()),
    ))
}

fn criterion_9() -> Outcome {
    let group = TwoQubitCliffords::get();
    let mean = group.mean_cz_count();
    let times = GateTimes::default();
    let sampled = (0..group.len())
        .step_by(37)
        .all(|i| equal_up_to_phase(&logical_unitary(&group.synthesize(i, &times)), &group.unitary(i), 1e-9));
    let pass = group.len() == 11520 && within(mean, 1.5, 0.02) && sampled;
    Ok((pass, format!("order {}, mean CZ {mean:.4}, sampled synthesis recomposes {sampled}", group.len())))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir()?;
    let mut configs = Vec::new();

    let mut icrb = RunConfig::new(ExperimentKind::Icrb);
    icrb.seed = 7;
    icrb.noise.preset = "740mK".into();
    icrb.rb.depths = vec![1, 2, 4, 8, 16, 32];
    icrb.rb.sequences_per_depth = 10;
    icrb.rb.bootstrap = 20;
    configs.push(icrb);

    let mut tomo = RunConfig::new(ExperimentKind::Tomography);
    tomo.seed = 3;
    tomo.noise.preset = "300mK".into();
    tomo.tomography.estimate_confusion = true;
    configs.push(tomo);

    let mut coh = RunConfig::new(ExperimentKind::Coherence);
    coh.seed = 5;
    coh.noise.preset = "740mK".into();
    coh.coherence.points = 41;
    coh.coherence.shots = Some(2000);
    configs.push(coh);

    let mut identical = 0;
    let mut notes = Vec::new();
    for (k, cfg) in configs.iter_mut().enumerate() {
        let mut payloads = Vec::new();
        for attempt in 0..2 {
            cfg.out = Some(dir.path().join(format!("{k}_{attempt}")));
            let outcome = run(cfg)?;
            let record = RunRecord::load(&outcome.dir.join(RECORD_FILE))?;
            record.validate()?;
            payloads.push((record.payload_sha256.clone(), serde_json::to_vec(&record.payload)?));
        }
        if payloads[0] == payloads[1] {
            identical += 1;
        }
        notes.push(format!("{} {}", cfg.experiment.label(), &payloads[0].0[..12]));
    }
    Ok((identical == configs.len(), format!("{identical}/{} configs byte-identical: {}", configs.len(), notes.join(", "))))
}
