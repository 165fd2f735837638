use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::state::DensityMatrix;
use crate::noise::ConfusionMatrix;
use crate::{Error, Result};

/// Outcome counts over the computational basis (`00, 01, 10, 11` for two
/// qubits).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Counts(pub Vec<u64>);

impl Counts {
    pub fn shots(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.shots() as f64;
        self.0.iter().map(|&c| c as f64 / total).collect()
    }

    pub fn get(&self, outcome: usize) -> u64 {
        self.0[outcome]
    }
}

/// Draws a multinomial sample of size `shots` from `probs` using sequential
/// conditional binomials.
pub fn multinomial<R: Rng + ?Sized>(rng: &mut R, probs: &[f64], shots: u64) -> Vec<u64> {
    let mut remaining = shots;
    let mut mass = 1.0;
    let mut out = vec![0u64; probs.len()];
    for (k, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if k + 1 == probs.len() {
            out[k] = remaining;
            break;
        }
        let q = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let draw = Binomial::new(remaining, q).expect("probability in [0, 1]").sample(rng);
        out[k] = draw;
        remaining -= draw;
        mass -= p;
    }
    out
}

/// Outcome probabilities of a computational-basis measurement, optionally
/// pushed through a readout confusion matrix.
pub fn outcome_probabilities(rho: &DensityMatrix, readout: Option<&ConfusionMatrix>) -> Result<Vec<f64>> {
    let pops: Vec<f64> = rho.populations().iter().map(|&p| p.max(0.0)).collect();
    let total: f64 = pops.iter().sum();
    let pops: Vec<f64> = pops.iter().map(|p| p / total).collect();
    match readout {
        Some(a) => {
            if a.dim() != rho.dim() {
                return Err(Error::DimensionMismatch { expected: rho.dim(), got: a.dim() });
            }
            a.apply(&pops)
        }
        None => Ok(pops),
    }
}

/// Samples `shots` computational-basis measurements of `rho`.
///
/// Identical inputs and seed give bit-identical counts.
pub fn sample_counts(
    rho: &DensityMatrix,
    shots: u64,
    seed: u64,
    readout: Option<&ConfusionMatrix>,
) -> Result<Counts> {
    rho.require_physical()?;
    if shots == 0 {
        return Err(Error::invalid("shots must be at least 1"));
    }
    let probs = outcome_probabilities(rho, readout)?;
    let mut rng = crate::rng::stream(seed, &[]);
    Ok(Counts(multinomial(&mut rng, &probs, shots)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_outcome() {
        let c = sample_counts(&DensityMatrix::basis(2, 0), 1000, 1, None).unwrap();
        assert_eq!(c.0, vec![1000, 0, 0, 0]);
    }

    #[test]
    fn same_seed_same_counts() {
        let bell = DensityMatrix::bell_phi_plus();
        let a = sample_counts(&bell, 5000, 42, None).unwrap();
        let b = sample_counts(&bell, 5000, 42, None).unwrap();
        let c = sample_counts(&bell, 5000, 43, None).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.shots(), 5000);
    }

    #[test]
    fn rejects_non_physical_and_zero_shots() {
        let mut m = DensityMatrix::basis(1, 0).into_matrix();
        m[(0, 0)] = num_complex::Complex64::new(1.2, 0.0);
        let bad = DensityMatrix::new(m).unwrap();
        assert!(matches!(sample_counts(&bad, 10, 0, None), Err(Error::NonPhysical(_))));
        assert!(sample_counts(&DensityMatrix::basis(1, 0), 0, 0, None).is_err());
    }
}
