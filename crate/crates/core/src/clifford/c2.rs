//! Two-qubit Clifford group by breadth-first search over CZ count.
//!
//! Every element is written as `P_k CZ P_{k-1} CZ ... CZ P_0` with each `P_j`
//! a product of single-qubit Cliffords. Level `k` holds the elements first
//! reached with `k` CZ gates.

use std::collections::HashMap;
use std::sync::OnceLock;

use nalgebra::Matrix4;
use num_complex::Complex64;

use super::c1::{compile_c1, enumerate_c1};
use crate::algebra::linalg::{self, CMatrix};
use crate::algebra::{Circuit, GateTimes, NativeGate};

type M4 = Matrix4<Complex64>;

#[derive(Debug, Clone)]
struct Node {
    unitary: M4,
    /// `(q1 element, q0 element)` applied last.
    pair: (u8, u8),
    /// Element this one extends with `pair * CZ`, absent on level 0.
    parent: Option<u32>,
    cz_count: u8,
}

/// The 11520 two-qubit Cliffords modulo global phase.
pub struct TwoQubitCliffords {
    nodes: Vec<Node>,
    level_sizes: Vec<usize>,
}

fn to_m4(m: &CMatrix) -> M4 {
    M4::from_fn(|i, j| m[(i, j)])
}

fn key(u: &M4) -> [i64; 32] {
    let pivot = u.iter().copied().find(|z| z.norm() > 1e-6).expect("unitary has a nonzero entry");
    let phase = pivot.conj() / pivot.norm();
    let mut k = [0i64; 32];
    for (i, z) in u.iter().enumerate() {
        let w = z * phase;
        k[2 * i] = (w.re * 1e6).round() as i64;
        k[2 * i + 1] = (w.im * 1e6).round() as i64;
    }
    k
}

impl TwoQubitCliffords {
    pub fn get() -> &'static TwoQubitCliffords {
        static TABLE: OnceLock<TwoQubitCliffords> = OnceLock::new();
        TABLE.get_or_init(Self::build)
    }

    fn build() -> Self {
        let c1 = enumerate_c1();
        let locals: Vec<((u8, u8), M4)> = c1
            .iter()
            .flat_map(|a| {
                c1.iter().map(move |b| ((a.index as u8, b.index as u8), to_m4(&linalg::kron(&a.unitary, &b.unitary))))
            })
            .collect();
        let cz = to_m4(&linalg::cz());
        let mut seen: HashMap<[i64; 32], u32> = HashMap::new();
        let mut nodes: Vec<Node> = Vec::new();
        for (pair, u) in &locals {
            if seen.insert(key(u), nodes.len() as u32).is_none() {
                nodes.push(Node { unitary: *u, pair: *pair, parent: None, cz_count: 0 });
            }
        }
        let mut level_sizes = vec![nodes.len()];
        let mut frontier = 0..nodes.len();
        loop {
            let start = nodes.len();
            for parent in frontier.clone() {
                let through = cz * nodes[parent].unitary;
                for (pair, p) in &locals {
                    let u = p * through;
                    let k = key(&u);
                    if !seen.contains_key(&k) {
                        seen.insert(k, nodes.len() as u32);
                        let cz_count = nodes[parent].cz_count + 1;
                        nodes.push(Node { unitary: u, pair: *pair, parent: Some(parent as u32), cz_count });
                    }
                }
            }
            if nodes.len() == start {
                break;
            }
            level_sizes.push(nodes.len() - start);
            frontier = start..nodes.len();
        }
        Self { nodes, level_sizes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of elements needing 0, 1, 2, ... CZ gates.
    pub fn level_sizes(&self) -> &[usize] {
        &self.level_sizes
    }

    pub fn cz_count(&self, index: usize) -> usize {
        self.nodes[index].cz_count as usize
    }

    pub fn mean_cz_count(&self) -> f64 {
        self.nodes.iter().map(|n| n.cz_count as f64).sum::<f64>() / self.len() as f64
    }

    pub fn unitary(&self, index: usize) -> CMatrix {
        let u = &self.nodes[index].unitary;
        CMatrix::from_fn(4, 4, |i, j| u[(i, j)])
    }

    /// Native circuit for element `index`.
    pub fn synthesize(&self, index: usize, times: &GateTimes) -> Circuit {
        let mut chain = Vec::new();
        let mut cursor = Some(index as u32);
        while let Some(i) = cursor {
            let node = &self.nodes[i as usize];
            chain.push(node.pair);
            cursor = node.parent;
        }
        chain.reverse();
        let mut circuit = Circuit::new(2);
        for (k, (a, b)) in chain.into_iter().enumerate() {
            if k > 0 {
                circuit.push(times.cz()).expect("CZ fits a two-qubit circuit");
            }
            let s1 = compile_c1(a as usize, 1, times);
            let s0 = compile_c1(b as usize, 0, times);
            circuit
                .push_parallel(&[(1, &s1.gates[..]), (0, &s0.gates[..])])
                .expect("single-qubit sequences on distinct qubits");
        }
        circuit
    }

    /// Mean number of physical single-qubit pulses per element.
    pub fn mean_single_qubit_pulses(&self, times: &GateTimes) -> f64 {
        let total: usize = (0..self.len())
            .map(|i| self.synthesize(i, times).count(|g: &NativeGate| g.kind.is_x_pulse()))
            .sum();
        total as f64 / self.len() as f64
    }
}

/// Native circuit for two-qubit Clifford `index` with default gate times.
pub fn synthesize_c2(index: usize) -> Circuit {
    TwoQubitCliffords::get().synthesize(index, &GateTimes::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::logical_unitary;

    #[test]
    fn group_order_and_levels() {
        let g = TwoQubitCliffords::get();
        assert_eq!(g.len(), 11520);
        assert_eq!(g.level_sizes(), &[576, 5184, 5184, 576]);
        assert!((g.mean_cz_count() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn identity_is_empty_circuit() {
        assert!(synthesize_c2(0).is_empty());
    }

    #[test]
    fn synthesis_recomposes() {
        let g = TwoQubitCliffords::get();
        let times = GateTimes::default();
        for i in (0..g.len()).step_by(97) {
            let c = g.synthesize(i, &times);
            assert_eq!(c.count(|g| matches!(g.kind, crate::algebra::GateKind::Cz)), g.cz_count(i));
            assert!(linalg::equal_up_to_phase(&logical_unitary(&c), &g.unitary(i), 1e-9), "element {i}");
        }
    }
}
