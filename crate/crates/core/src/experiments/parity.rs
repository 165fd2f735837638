//! Parity-based initialization and readout of the qubit pair.
//!
//! Both protocols use a ZZ-parity measurement that reports the wrong parity
//! with probability `parity_flip`, and a CROT with Q1 as control and Q0 as
//! target.

use serde::{Deserialize, Serialize};

use crate::algebra::{
    apply_circuit, multinomial, project_parity, Circuit, DensityMatrix, PhaseFrame,
};
use crate::noise::NoiseModel;
use crate::{rng, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeraldOptions {
    /// Q1 state on which the CROT flips Q0.
    pub control_state: u8,
    /// Acceptance probabilities below this raise `LowAcceptance`.
    pub min_acceptance: f64,
    /// Stop after the first parity filter.
    pub first_filter_only: bool,
}

impl Default for HeraldOptions {
    fn default() -> Self {
        Self { control_state: 0, min_acceptance: 1e-9, first_filter_only: false }
    }
}

#[derive(Debug, Clone)]
pub struct Heralded {
    pub state: DensityMatrix,
    /// Probability that both parity filters report even.
    pub acceptance: f64,
}

/// State kept when the parity meter reports `reported`, weighted by its
/// probability.
fn filter(rho: &DensityMatrix, reported: u8, flip: f64) -> Result<Option<(f64, DensityMatrix)>> {
    let proj = project_parity(rho)?;
    let branches = [(proj.even_probability, proj.even_state), (proj.odd_probability, proj.odd_state)];
    let mut total = 0.0;
    let mut mixed: Option<crate::algebra::CMatrix> = None;
    for (parity, (p, state)) in branches.into_iter().enumerate() {
        let w = p * if parity as u8 == reported { 1.0 - flip } else { flip };
        if let (Some(s), true) = (state, w > 0.0) {
            total += w;
            let term = s.matrix().scale(w);
            mixed = Some(match mixed {
                Some(m) => m + term,
                None => term,
            });
        }
    }
    match mixed {
        Some(m) if total > 0.0 => Ok(Some((total, DensityMatrix::new(m.scale(1.0 / total))?))),
        _ => Ok(None),
    }
}

fn crot_circuit(nm: &NoiseModel, control_state: u8) -> Result<Circuit> {
    let mut c = Circuit::new(2);
    c.push(nm.gate_times().crot(1, 0, control_state))?;
    Ok(c)
}

fn flip_q1(nm: &NoiseModel) -> Result<Circuit> {
    let mut c = Circuit::new(2);
    c.push(nm.gate_times().x180(1))?;
    Ok(c)
}

/// Heralded initialization into `|00>`: keep even parity, flip Q1, apply the
/// CROT and keep even parity again.
///
/// Starting from the maximally mixed state the acceptance is `1/4`.
pub fn heralded_initialize(input: &DensityMatrix, nm: &NoiseModel, opts: HeraldOptions) -> Result<Heralded> {
    if input.n_qubits() != 2 || nm.n_qubits() != 2 {
        return Err(Error::invalid("heralded initialization needs two qubits"));
    }
    let q = nm.parity_flip();
    let low = |got: f64| Error::LowAcceptance { got, floor: opts.min_acceptance };
    let (a1, rho) = filter(input, 0, q)?.ok_or_else(|| low(0.0))?;
    if opts.first_filter_only {
        if a1 < opts.min_acceptance {
            return Err(low(a1));
        }
        return Ok(Heralded { state: rho, acceptance: a1 });
    }
    let mut frame = PhaseFrame::new(2);
    let rho = apply_circuit(&rho, &flip_q1(nm)?, Some(nm), &mut frame)?;
    let rho = apply_circuit(&rho, &crot_circuit(nm, opts.control_state)?, Some(nm), &mut frame)?;
    let (a2, state) = filter(&rho, 0, q)?.ok_or_else(|| low(0.0))?;
    let acceptance = a1 * a2;
    if acceptance < opts.min_acceptance {
        return Err(low(acceptance));
    }
    Ok(Heralded { state, acceptance })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleReadout {
    /// Probability of each decoded two-qubit label, indexed `2 s1 + s0`.
    pub distribution: [f64; 4],
    /// Sampled label counts when shots were requested.
    pub counts: Option<[u64; 4]>,
    /// `decode[2 m1 + m2]` is the label reported for parity outcomes
    /// `(m1, m2)`.
    pub decode: [usize; 4],
}

/// Joint distribution of the two parity outcomes `(m1, m2)`, indexed
/// `2 m1 + m2`.
fn parity_outcomes(rho: &DensityMatrix, nm: &NoiseModel, control_state: u8) -> Result<[f64; 4]> {
    let q = nm.parity_flip();
    let mut out = [0.0; 4];
    for m1 in 0..2u8 {
        let Some((w1, state)) = filter(rho, m1, q)? else { continue };
        let mut frame = PhaseFrame::new(2);
        let state = if m1 == 1 { apply_circuit(&state, &flip_q1(nm)?, Some(nm), &mut frame)? } else { state };
        let state = apply_circuit(&state, &crot_circuit(nm, control_state)?, Some(nm), &mut frame)?;
        let odd = project_parity(&state)?.odd_probability;
        let p_m2_odd = (1.0 - q) * odd + q * (1.0 - odd);
        out[2 * m1 as usize] += w1 * (1.0 - p_m2_odd);
        out[2 * m1 as usize + 1] += w1 * p_m2_odd;
    }
    Ok(out)
}

/// Parity outcome pair produced by each basis label under ideal operation.
fn decode_table(control_state: u8) -> Result<[usize; 4]> {
    let ideal = NoiseModel::ideal(2);
    let mut decode = [usize::MAX; 4];
    for label in 0..4 {
        let p = parity_outcomes(&DensityMatrix::basis(2, label), &ideal, control_state)?;
        let pair = p.iter().position(|x| *x > 0.5).expect("ideal readout is deterministic");
        decode[pair] = label;
    }
    Ok(decode)
}

/// Two-shot parity readout that resolves all four basis labels: measure
/// parity, flip Q1 if odd, apply the CROT, measure parity again and decode
/// the pair of outcomes.
pub fn double_readout(
    rho: &DensityMatrix,
    nm: &NoiseModel,
    control_state: u8,
    shots: Option<u64>,
    seed: u64,
) -> Result<DoubleReadout> {
    if rho.n_qubits() != 2 || nm.n_qubits() != 2 {
        return Err(Error::invalid("double readout needs two qubits"));
    }
    let decode = decode_table(control_state)?;
    let outcomes = parity_outcomes(rho, nm, control_state)?;
    let mut distribution = [0.0; 4];
    for (pair, p) in outcomes.iter().enumerate() {
        distribution[decode[pair]] += p;
    }
    let counts = match shots {
        None => None,
        Some(0) => return Err(Error::invalid("shots must be positive")),
        Some(n) => {
            let c = multinomial(&mut rng::stream(seed, &[0x5052_0001]), &distribution, n);
            Some([c[0], c[1], c[2], c[3]])
        }
    };
    Ok(DoubleReadout { distribution, counts, decode })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_input_accepts_a_quarter() {
        let h = heralded_initialize(&DensityMatrix::maximally_mixed(2), &NoiseModel::ideal(2), HeraldOptions::default())
            .unwrap();
        assert!((h.acceptance - 0.25).abs() < 1e-12);
        assert!((h.state.populations()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn basis_labels_decode() {
        for cs in 0..2 {
            for label in 0..4 {
                let r = double_readout(&DensityMatrix::basis(2, label), &NoiseModel::ideal(2), cs, None, 0).unwrap();
                assert!((r.distribution[label] - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bell_state_splits_evenly() {
        let r = double_readout(&DensityMatrix::bell_phi_plus(), &NoiseModel::ideal(2), 0, None, 0).unwrap();
        assert!((r.distribution[0] - 0.5).abs() < 1e-12 && (r.distribution[3] - 0.5).abs() < 1e-12);
    }
}
