use num_complex::Complex64;

use crate::algebra::linalg::{self, CMatrix};
use crate::algebra::{Pauli, PauliString, QuantumChannel};
use crate::{Error, Result};

/// Depolarizing channel `rho -> (1 - p) rho + p I / 2^n` on one or two qubits.
///
/// `p` may range over `[0, 1]`. The Kraus set is the identity weighted by
/// `sqrt(1 - p (d^2 - 1) / d^2)` plus every non-identity Pauli weighted by
/// `sqrt(p / d^2)`; for `p = 0` only the identity is kept.
pub fn depolarizing_channel(p: f64, n_qubits: usize) -> Result<QuantumChannel> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::invalid(format!("depolarizing probability {p} outside [0, 1]")));
    }
    if !(n_qubits == 1 || n_qubits == 2) {
        return Err(Error::invalid(format!("depolarizing channel on {n_qubits} qubits")));
    }
    if p == 0.0 {
        return Ok(QuantumChannel::identity(n_qubits));
    }
    let d2 = (1usize << (2 * n_qubits)) as f64;
    let paulis: Vec<CMatrix> = if n_qubits == 1 {
        Pauli::ALL.iter().map(|p| p.matrix()).collect()
    } else {
        PauliString::all().iter().map(|s| s.matrix()).collect()
    };
    let mut kraus = Vec::with_capacity(paulis.len());
    for (i, sigma) in paulis.into_iter().enumerate() {
        let weight = if i == 0 { 1.0 - p * (d2 - 1.0) / d2 } else { p / d2 };
        if weight > 0.0 {
            kraus.push(sigma * Complex64::new(weight.sqrt(), 0.0));
        }
    }
    QuantumChannel::new(kraus)
}

/// Energy relaxation plus pure dephasing for a wait of `t` seconds.
///
/// Populations relax toward `|0>` with time constant `t1`; coherences decay as
/// `exp(-t / t2)`. Requires `0 < t2 <= 2 t1`. Use `f64::INFINITY` for `t1` to
/// switch off relaxation.
pub fn relaxation_channel(t1: f64, t2: f64, t: f64) -> Result<QuantumChannel> {
    if !(t1 > 0.0) || !(t2 > 0.0) {
        return Err(Error::invalid(format!("relaxation times must be positive (T1={t1}, T2={t2})")));
    }
    if t2 > 2.0 * t1 * (1.0 + 1e-12) {
        return Err(Error::invalid(format!("T2={t2} exceeds 2*T1={}", 2.0 * t1)));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("wait time {t} must be finite and non-negative")));
    }
    if t == 0.0 || (t1.is_infinite() && t2.is_infinite()) {
        return Ok(QuantumChannel::identity(1));
    }
    let gamma = if t1.is_infinite() { 0.0 } else { -(-t / t1).exp_m1() };
    // Coherence left after amplitude damping is sqrt(1 - gamma) = exp(-t / 2T1);
    // the rest of the exp(-t / T2) decay comes from pure dephasing.
    let rate = (1.0 / t2 - if t1.is_infinite() { 0.0 } else { 0.5 / t1 }).max(0.0);
    let f = (-t * rate).exp();
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut kraus = Vec::with_capacity(4);
    let dephase: Vec<CMatrix> = if f < 1.0 {
        vec![
            linalg::identity(2) * c(((1.0 + f) / 2.0).sqrt()),
            linalg::pauli_z() * c(((1.0 - f) / 2.0).sqrt()),
        ]
    } else {
        vec![linalg::identity(2)]
    };
    let k0 = linalg::from_rows(&[&[linalg::ONE, linalg::ZERO], &[linalg::ZERO, c((1.0 - gamma).sqrt())]]);
    let k1 = linalg::from_rows(&[&[linalg::ZERO, c(gamma.sqrt())], &[linalg::ZERO, linalg::ZERO]]);
    for d in &dephase {
        kraus.push(&k0 * d);
        if gamma > 0.0 {
            kraus.push(&k1 * d);
        }
    }
    QuantumChannel::new(kraus)
}

/// Depolarizing strength `lambda` of a channel's unital Pauli transfer part,
/// `(tr(PTM) - 1) / (d^2 - 1)`, computed from its Kraus operators.
pub fn depolarizing_parameter(channel: &QuantumChannel) -> f64 {
    let d = 1usize << channel.n_qubits();
    let d2 = (d * d) as f64;
    let entanglement_fidelity: f64 = channel
        .kraus()
        .iter()
        .map(|k| k.trace().norm_sqr())
        .sum::<f64>()
        / d2;
    (d2 * entanglement_fidelity - 1.0) / (d2 - 1.0)
}
