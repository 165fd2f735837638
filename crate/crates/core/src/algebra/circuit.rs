use serde::{Deserialize, Serialize};

use super::gate::{GateTimes, NativeGate};
use crate::{Error, Result};

/// Gates executed simultaneously on disjoint qubits.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub gates: Vec<NativeGate>,
}

impl Layer {
    /// Wall-clock time of the layer: the longest gate.
    pub fn duration_ns(&self) -> f64 {
        self.gates.iter().map(|g| g.duration_ns).fold(0.0, f64::max)
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let mut used = 0usize;
        for g in &self.gates {
            if g.qubits.len() != g.kind.arity() {
                return Err(Error::MalformedLayer(format!(
                    "{:?} expects {} qubit(s), got {:?}",
                    g.kind,
                    g.kind.arity(),
                    g.qubits
                )));
            }
            for &q in &g.qubits {
                if q >= n_qubits {
                    return Err(Error::MalformedLayer(format!(
                        "qubit {q} out of range for {n_qubits}-qubit circuit"
                    )));
                }
                if used & (1 << q) != 0 {
                    return Err(Error::MalformedLayer(format!("qubit {q} targeted twice in one layer")));
                }
                used |= 1 << q;
            }
        }
        Ok(())
    }
}

/// Ordered layers of native gates on 1 or 2 qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    layers: Vec<Layer>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits == 1 || n_qubits == 2, "only 1 or 2 qubits are supported");
        Self { n_qubits, layers: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn is_empty(&self) -> bool {
        self.layers.iter().all(|l| l.gates.is_empty())
    }

    pub fn push_layer(&mut self, gates: Vec<NativeGate>) -> Result<&mut Self> {
        let layer = Layer { gates };
        layer.validate(self.n_qubits)?;
        if !layer.gates.is_empty() {
            self.layers.push(layer);
        }
        Ok(self)
    }

    /// Appends a single gate as its own layer.
    pub fn push(&mut self, gate: NativeGate) -> Result<&mut Self> {
        self.push_layer(vec![gate])
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: other.n_qubits });
        }
        self.layers.extend(other.layers.iter().cloned());
        Ok(self)
    }

    /// Schedules per-qubit gate lists side by side, aligning the k-th
    /// physical pulse of every qubit into one layer.
    pub fn push_parallel(&mut self, sequences: &[(usize, &[NativeGate])]) -> Result<&mut Self> {
        // chunks: (virtual gates before pulse, pulse) per qubit
        let split: Vec<(usize, Vec<(Vec<NativeGate>, Option<NativeGate>)>)> = sequences
            .iter()
            .map(|&(q, gates)| {
                let mut chunks = Vec::new();
                let mut pending = Vec::new();
                for g in gates {
                    let mut g = g.clone();
                    if g.kind.arity() != 1 {
                        return Err(Error::MalformedLayer("parallel scheduling takes single-qubit gates".into()));
                    }
                    g.qubits = vec![q];
                    if g.kind.is_virtual() {
                        pending.push(g);
                    } else {
                        chunks.push((std::mem::take(&mut pending), Some(g)));
                    }
                }
                if !pending.is_empty() {
                    chunks.push((pending, None));
                }
                Ok((q, chunks))
            })
            .collect::<Result<_>>()?;
        let n_chunks = split.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
        for k in 0..n_chunks {
            let depth = split
                .iter()
                .filter_map(|(_, c)| c.get(k).map(|(v, _)| v.len()))
                .max()
                .unwrap_or(0);
            for v in 0..depth {
                let layer = split
                    .iter()
                    .filter_map(|(_, c)| c.get(k).and_then(|(virt, _)| virt.get(v).cloned()))
                    .collect();
                self.push_layer(layer)?;
            }
            let pulses = split
                .iter()
                .filter_map(|(_, c)| c.get(k).and_then(|(_, p)| p.clone()))
                .collect();
            self.push_layer(pulses)?;
        }
        Ok(self)
    }

    pub fn duration_ns(&self) -> f64 {
        self.layers.iter().map(Layer::duration_ns).sum()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(|l| l.gates.len()).sum()
    }

    /// Number of gates matching `pred`.
    pub fn count(&self, pred: impl Fn(&NativeGate) -> bool) -> usize {
        self.layers.iter().flat_map(|l| &l.gates).filter(|g| pred(g)).count()
    }

    /// Same gates with durations re-derived from `times`.
    pub fn retimed(&self, times: &GateTimes) -> Circuit {
        let mut out = self.clone();
        for g in out.layers.iter_mut().flat_map(|l| l.gates.iter_mut()) {
            if g.kind != super::gate::GateKind::I {
                g.duration_ns = times.duration(g.kind, &g.qubits);
            }
        }
        out
    }
}

/// Native circuit taking `|00>` to `(|00> + |11>)/sqrt(2)`.
///
/// Both qubits get a quarter turn about a Y-type axis (`-Y` on qubit 1, `+Y`
/// on qubit 0), then a CZ, then qubit 0 turns back about `-Y`. Every virtual
/// rotation is undone inside its block, so the frames end at zero and the
/// physical state equals the logical one.
pub fn bell_prep(times: &GateTimes) -> Circuit {
    use std::f64::consts::FRAC_PI_2;
    let minus_y = |q: usize| vec![NativeGate::virtual_z(q, -FRAC_PI_2), times.x90(q), NativeGate::virtual_z(q, FRAC_PI_2)];
    let plus_y = |q: usize| vec![NativeGate::virtual_z(q, FRAC_PI_2), times.x90(q), NativeGate::virtual_z(q, -FRAC_PI_2)];
    let mut c = Circuit::new(2);
    c.push_parallel(&[(1, &minus_y(1)[..]), (0, &plus_y(0)[..])]).expect("disjoint qubits");
    c.push(times.cz()).expect("two-qubit circuit");
    c.push_parallel(&[(0, &minus_y(0)[..])]).expect("single qubit");
    c
}
