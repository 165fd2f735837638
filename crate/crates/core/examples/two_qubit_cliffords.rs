//! Enumerates the two-qubit Clifford group by breadth-first search over
//! CZ-separated layers of single-qubit Cliffords, then synthesizes a few
//! elements to native circuits.
//!
//! ```text
//! cargo run --release --example two_qubit_cliffords
//! ```

use spinq::algebra::linalg::equal_up_to_phase;
use spinq::algebra::{logical_unitary, GateKind, GateTimes};
use spinq::clifford::TwoQubitCliffords;

fn main() {
    let group = TwoQubitCliffords::get();
    let times = GateTimes::default();
    println!("group order:            {}", group.len());
    println!("elements per CZ count:  {:?}", group.level_sizes());
    println!("mean CZ per Clifford:   {:.4}", group.mean_cz_count());
    println!("mean 1Q pulses:         {:.4}", group.mean_single_qubit_pulses(&times));

    for index in [0, 1, 600, 6000, group.len() - 1] {
        let circuit = group.synthesize(index, &times);
        let ok = equal_up_to_phase(&logical_unitary(&circuit), &group.unitary(index), 1e-9);
        println!(
            "element {index:>5}: {} layers, {} CZ, {:.0} ns, recomposes: {ok}",
            circuit.layers().len(),
            circuit.count(|g| matches!(g.kind, GateKind::Cz)),
            circuit.duration_ns() + 0.0,
        );
    }
}
