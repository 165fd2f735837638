//! Prints the 24-element single-qubit Clifford table compiled to
//! `Zv - X - Zv` and checks that every native sequence recomposes to its
//! element.
//!
//! ```text
//! cargo run --example clifford_table
//! ```

use spinq::algebra::linalg::equal_up_to_phase;
use spinq::algebra::{logical_unitary, Circuit, GateTimes};
use spinq::clifford::{c1_compose, c1_inverse, compile_c1, enumerate_c1, mean_physical_x_count, c1_table_text};

fn main() {
    print!("{}", c1_table_text());

    let times = GateTimes::default();
    let mut mismatches = 0;
    for e in enumerate_c1() {
        let mut c = Circuit::new(1);
        for g in compile_c1(e.index, 0, &times).gates {
            c.push(g).expect("single-qubit gate");
        }
        if !equal_up_to_phase(&logical_unitary(&c), &e.unitary, 1e-9) {
            mismatches += 1;
        }
    }
    let closed = (0..24).all(|a| c1_compose(a, c1_inverse(a)) == 0);

    println!();
    println!("elements:            {}", enumerate_c1().len());
    println!("recompose mismatches: {mismatches}");
    println!("inverses close:      {closed}");
    println!("mean physical X:     {:.4}", mean_physical_x_count());
}
