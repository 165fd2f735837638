use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::linalg::CMatrix;
use crate::algebra::DensityMatrix;
use crate::noise::{load_fixture_text, FixtureSource};
use crate::{Error, Result};

const FIXTURE: &str = "bell_tomography_reference.toml";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReferenceFile {
    schema: String,
    matrix: Vec<MatrixEntry>,
    mle: Vec<MleEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixEntry {
    temperature: String,
    method: String,
    magnitude: Vec<Vec<f64>>,
    phase_pi: Vec<Vec<f64>>,
    fidelity: f64,
    concurrence: f64,
    frobenius_distance: f64,
    trace: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MleEntry {
    temperature: String,
    real: Vec<Vec<f64>>,
}

/// Summary metrics reported alongside a reference density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportedMetrics {
    pub fidelity: f64,
    pub concurrence: f64,
    pub frobenius_distance: f64,
    pub trace: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceMatrix {
    pub temperature: String,
    /// `"linear"`, `"spam-corrected"` or `"mle"`.
    pub method: String,
    pub rho: DensityMatrix,
    /// Absent for the maximum-likelihood matrices.
    pub reported: Option<ReportedMetrics>,
}

fn square4(rows: &[Vec<f64>], what: &str) -> Result<()> {
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(Error::Fixture(format!("{what} must be 4x4")));
    }
    Ok(())
}

/// Builds a Hermitian matrix from `r e^{i pi theta}` entries, keeping the
/// diagonal and upper triangle and mirroring it below.
pub fn hermitian_from_polar(magnitude: &[Vec<f64>], phase_pi: &[Vec<f64>]) -> Result<DensityMatrix> {
    square4(magnitude, "magnitude")?;
    square4(phase_pi, "phase")?;
    let mut m = CMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in i..4 {
            let z = Complex64::from_polar(magnitude[i][j], std::f64::consts::PI * phase_pi[i][j]);
            let z = if i == j { Complex64::new(z.re, 0.0) } else { z };
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    DensityMatrix::new(m)
}

/// Renders entries as `r·e^{iθπ}` strings with `θ` in units of `π`.
pub fn polar_rendering(rho: &DensityMatrix) -> Vec<Vec<String>> {
    let m = rho.matrix();
    (0..rho.dim())
        .map(|i| {
            (0..rho.dim())
                .map(|j| {
                    let z = m[(i, j)];
                    let theta = if z.norm() < 5e-4 { 0.0 } else { z.arg() / std::f64::consts::PI };
                    if theta.abs() < 5e-4 {
                        format!("{:.3}", z.norm())
                    } else {
                        format!("{:.3}·e^{{i{:.3}π}}", z.norm(), theta)
                    }
                })
                .collect()
        })
        .collect()
}

/// Reference Bell-state matrices shipped as a fixture.
pub fn reference_matrices() -> Result<(Vec<ReferenceMatrix>, FixtureSource)> {
    let (text, source) = load_fixture_text(FIXTURE)?;
    let file: ReferenceFile = toml::from_str(&text).map_err(|e| Error::Fixture(format!("{FIXTURE}: {e}")))?;
    if file.schema != "spinq-bell-reference/1" {
        return Err(Error::Fixture(format!("{FIXTURE}: unsupported schema `{}`", file.schema)));
    }
    let mut out = Vec::new();
    for m in file.matrix {
        out.push(ReferenceMatrix {
            temperature: m.temperature,
            method: m.method,
            rho: hermitian_from_polar(&m.magnitude, &m.phase_pi)?,
            reported: Some(ReportedMetrics {
                fidelity: m.fidelity,
                concurrence: m.concurrence,
                frobenius_distance: m.frobenius_distance,
                trace: m.trace,
            }),
        });
    }
    for m in file.mle {
        square4(&m.real, "mle matrix")?;
        let magnitude: Vec<Vec<f64>> = m.real.iter().map(|r| r.iter().map(|x| x.abs()).collect()).collect();
        let phase: Vec<Vec<f64>> = m.real.iter().map(|r| r.iter().map(|&x| if x < 0.0 { 1.0 } else { 0.0 }).collect()).collect();
        out.push(ReferenceMatrix {
            temperature: m.temperature,
            method: "mle".into(),
            rho: hermitian_from_polar(&magnitude, &phase)?,
            reported: None,
        });
    }
    Ok((out, source))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_parses_and_traces_match() {
        let (refs, _) = reference_matrices().unwrap();
        assert_eq!(refs.len(), 6);
        for r in refs.iter().filter(|r| r.reported.is_some()) {
            assert!((r.rho.trace() - r.reported.unwrap().trace).abs() <= 0.001 + 1e-9, "{} {}", r.temperature, r.method);
        }
    }

    #[test]
    fn polar_rendering_of_bell() {
        let r = polar_rendering(&DensityMatrix::bell_phi_plus());
        assert_eq!(r[0][3], "0.500");
        assert_eq!(r[1][1], "0.000");
    }
}
