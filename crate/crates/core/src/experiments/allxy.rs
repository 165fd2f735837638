//! The 21 ALLXY pulse pairs. Capital letters are pi rotations and lower case
//! letters pi/2 rotations; `Y` pulses are X pulses in a frame advanced by a
//! quarter turn.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::algebra::{apply_circuit, outcome_probabilities, Circuit, DensityMatrix, GateTimes, NativeGate, PhaseFrame};
use crate::noise::NoiseModel;
use crate::{rng, Error, Result};

pub const ALLXY_LABELS: [&str; 21] = [
    "II", "XX", "YY", "XY", "YX", "xI", "yI", "xy", "yx", "xY", "yX", "Xy", "Yx", "xX", "Xx", "yY", "Yy", "XI", "YI",
    "xx", "yy",
];

const IDEAL: [f64; 21] = [
    1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, -1.0, -1.0, -1.0,
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllxyResult {
    pub qubit: usize,
    pub labels: Vec<String>,
    /// Measured `<Z>` for each pair.
    pub values: Vec<f64>,
    pub ideal: Vec<f64>,
    pub shots: Option<u64>,
}

impl AllxyResult {
    /// Largest deviation from the ideal staircase.
    pub fn max_deviation(&self) -> f64 {
        self.values.iter().zip(&self.ideal).map(|(v, i)| (v - i).abs()).fold(0.0, f64::max)
    }
}

fn pulse(c: char, times: &GateTimes) -> Vec<NativeGate> {
    let wrap = |g: NativeGate| vec![NativeGate::virtual_z(0, FRAC_PI_2), g, NativeGate::virtual_z(0, -FRAC_PI_2)];
    match c {
        'I' => vec![],
        'X' => vec![times.x180(0)],
        'x' => vec![times.x90(0)],
        'Y' => wrap(times.x180(0)),
        'y' => wrap(times.x90(0)),
        _ => unreachable!("ALLXY labels use I, X, Y, x, y"),
    }
}

/// Single-qubit circuits for the 21 pairs, first pulse first.
pub fn allxy_sequences(times: &GateTimes) -> Vec<Circuit> {
    ALLXY_LABELS
        .iter()
        .map(|label| {
            let mut c = Circuit::new(1);
            for ch in label.chars() {
                for g in pulse(ch, times) {
                    c.push(g).expect("single-qubit gate");
                }
            }
            c
        })
        .collect()
}

/// Runs ALLXY on `qubit`. With `shots` the readout outcome is sampled and
/// `<Z> = 2 P(0) - 1` is estimated from the counts.
pub fn allxy(qubit: usize, nm: &NoiseModel, shots: Option<u64>, seed: u64) -> Result<AllxyResult> {
    if shots == Some(0) {
        return Err(Error::invalid("shots must be positive"));
    }
    let one = nm.single_qubit(qubit)?;
    let values = allxy_sequences(one.gate_times())
        .iter()
        .enumerate()
        .map(|(i, c)| -> Result<f64> {
            let rho = apply_circuit(&DensityMatrix::basis(1, 0), c, Some(&one), &mut PhaseFrame::new(1))?;
            let p0 = outcome_probabilities(&rho, Some(one.readout()))?[0];
            let p0 = match shots {
                None => p0,
                Some(n) => super::binomial_fraction(&mut rng::stream(seed, &[0x4158_0001, i as u64]), p0, n),
            };
            Ok(2.0 * p0 - 1.0)
        })
        .collect::<Result<_>>()?;
    Ok(AllxyResult {
        qubit,
        labels: ALLXY_LABELS.iter().map(|s| s.to_string()).collect(),
        values,
        ideal: IDEAL.to_vec(),
        shots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_staircase() {
        let r = allxy(0, &NoiseModel::ideal(2), None, 0).unwrap();
        assert!(r.max_deviation() < 1e-12, "{:?}", r.values);
        assert_eq!(r.ideal.iter().filter(|v| **v == 1.0).count(), 5);
        assert_eq!(r.ideal.iter().filter(|v| **v == 0.0).count(), 12);
    }
}
