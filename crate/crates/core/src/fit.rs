//! Bounded nonlinear least squares and small linear-regression helpers.
//!
//! The Levenberg–Marquardt loop uses Marquardt's diagonal scaling, a
//! forward-difference Jacobian and projection onto box bounds. Parameters
//! whose lower and upper bounds coincide are held fixed.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_iter: usize,
    /// Relative cost decrease below which the fit is considered converged.
    pub ftol: f64,
    /// Relative parameter step below which the fit is considered converged.
    pub xtol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { max_iter: 500, ftol: 1e-15, xtol: 1e-13 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOutcome {
    pub params: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub covariance: DMatrix<f64>,
    /// Weighted residual sum of squares.
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn clamp_to(p: &mut [f64], bounds: &[(f64, f64)]) {
    for (x, &(lo, hi)) in p.iter_mut().zip(bounds) {
        *x = x.clamp(lo, hi);
    }
}

/// Fits `model(x, params)` to `(xs, ys)` by minimizing
/// `sum_i w_i^2 (y_i - model(x_i))^2`.
pub fn levenberg_marquardt<F>(
    model: F,
    xs: &[f64],
    ys: &[f64],
    weights: Option<&[f64]>,
    p0: &[f64],
    bounds: &[(f64, f64)],
    opts: FitOptions,
) -> Result<FitOutcome>
where
    F: Fn(f64, &[f64]) -> f64,
{
    let n = xs.len();
    let k = p0.len();
    if ys.len() != n || weights.is_some_and(|w| w.len() != n) {
        return Err(Error::invalid("data, weights and abscissae must have equal length"));
    }
    if bounds.len() != k {
        return Err(Error::invalid("one bound pair per parameter required"));
    }
    if bounds.iter().any(|&(lo, hi)| !(lo <= hi)) {
        return Err(Error::invalid("lower bound above upper bound"));
    }
    let free: Vec<usize> = (0..k).filter(|&j| bounds[j].0 < bounds[j].1).collect();
    if n < free.len() {
        return Err(Error::invalid(format!("{n} points cannot determine {} parameters", free.len())));
    }
    let w = |i: usize| weights.map_or(1.0, |w| w[i]);
    let residuals = |p: &[f64]| -> DVector<f64> { DVector::from_fn(n, |i, _| w(i) * (ys[i] - model(xs[i], p))) };
    let jacobian = |p: &[f64], r: &DVector<f64>| -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(n, free.len());
        for (c, &j) in free.iter().enumerate() {
            let (lo, hi) = bounds[j];
            let mut h = 1e-7 * p[j].abs().max(1e-6);
            if p[j] + h > hi {
                h = -h;
            }
            let mut q = p.to_vec();
            q[j] = (p[j] + h).max(lo);
            let actual = q[j] - p[j];
            if actual == 0.0 {
                continue;
            }
            let rq = residuals(&q);
            // r = w (y - f), so dr/dp = -w df/dp; store df/dp weighted.
            for i in 0..n {
                jac[(i, c)] = (r[i] - rq[i]) / actual;
            }
        }
        jac
    };
    let mut p = p0.to_vec();
    clamp_to(&mut p, bounds);
    let mut r = residuals(&p);
    let mut cost = r.norm_squared();
    if !cost.is_finite() {
        return Err(Error::invalid("model is not finite at the starting point"));
    }
    let mut mu = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    let mut jac = jacobian(&p, &r);
    while iterations < opts.max_iter {
        iterations += 1;
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &r;
        let mut improved = false;
        while mu < 1e20 {
            let mut a = jtj.clone();
            for d in 0..free.len() {
                a[(d, d)] += mu * jtj[(d, d)].max(1e-12);
            }
            let Some(step) = a.cholesky().map(|c| c.solve(&jtr)) else {
                mu *= 4.0;
                continue;
            };
            let mut trial = p.clone();
            for (c, &j) in free.iter().enumerate() {
                trial[j] += step[c];
            }
            clamp_to(&mut trial, bounds);
            let r_trial = residuals(&trial);
            let cost_trial = r_trial.norm_squared();
            if cost_trial.is_finite() && cost_trial <= cost {
                let moved = free
                    .iter()
                    .map(|&j| (trial[j] - p[j]).abs() / (p[j].abs() + opts.xtol))
                    .fold(0.0, f64::max);
                let gain = cost - cost_trial;
                p = trial;
                r = r_trial;
                cost = cost_trial;
                mu = (mu / 3.0).max(1e-12);
                improved = true;
                if gain <= opts.ftol * cost.max(f64::MIN_POSITIVE) || moved <= opts.xtol || cost < 1e-28 {
                    converged = true;
                }
                break;
            }
            mu *= 2.0;
        }
        if !improved {
            // No downhill step exists at any damping: a stationary point.
            converged = true;
        }
        if converged {
            break;
        }
        jac = jacobian(&p, &r);
    }
    let jac = jacobian(&p, &r);
    let jtj = jac.transpose() * &jac;
    let dof = n.saturating_sub(free.len());
    let s2 = if dof > 0 { cost / dof as f64 } else { 0.0 };
    let inv = jtj.clone().pseudo_inverse(1e-300).unwrap_or_else(|_| DMatrix::zeros(free.len(), free.len()));
    let mut covariance = DMatrix::zeros(k, k);
    for (a, &i) in free.iter().enumerate() {
        for (b, &j) in free.iter().enumerate() {
            covariance[(i, j)] = s2 * inv[(a, b)];
        }
    }
    let std_errors = (0..k).map(|i| covariance[(i, i)].max(0.0).sqrt()).collect();
    Ok(FitOutcome { params: p, std_errors, covariance, cost, iterations, converged })
}

/// Ordinary least squares `y ≈ X beta`.
pub fn linear_least_squares(design: &DMatrix<f64>, y: &[f64]) -> Result<Vec<f64>> {
    if design.nrows() != y.len() {
        return Err(Error::DimensionMismatch { expected: design.nrows(), got: y.len() });
    }
    let svd = design.clone().svd(true, true);
    let beta = svd
        .solve(&DVector::from_column_slice(y), 1e-12)
        .map_err(|e| Error::invalid(format!("least squares failed: {e}")))?;
    Ok(beta.iter().copied().collect())
}

/// Straight-line fit `y ≈ slope x + intercept`, returned as `(slope, intercept)`.
pub fn line_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() < 2 {
        return Err(Error::invalid("line fit needs at least two points"));
    }
    let design = DMatrix::from_fn(xs.len(), 2, |i, j| if j == 0 { xs[i] } else { 1.0 });
    let beta = linear_least_squares(&design, ys)?;
    Ok((beta[0], beta[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exponential() {
        let xs: Vec<f64> = (1..=50).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 * 0.97f64.powf(*x) + 0.5).collect();
        let model = |x: f64, p: &[f64]| p[0] * p[1].powf(x) + p[2];
        let fit = levenberg_marquardt(model, &xs, &ys, None, &[0.3, 0.9, 0.4], &[(0.0, 1.0), (0.0, 1.0), (0.0, 1.0)], FitOptions::default())
            .unwrap();
        assert!(fit.converged);
        for (a, b) in fit.params.iter().zip([0.5, 0.97, 0.5]) {
            assert!((a - b).abs() < 1e-9, "{:?}", fit.params);
        }
    }

    #[test]
    fn fixed_parameter_stays() {
        let xs: Vec<f64> = (0..20).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let model = |x: f64, p: &[f64]| p[0] * x + p[1];
        let fit = levenberg_marquardt(model, &xs, &ys, None, &[1.0, 3.0], &[(-10.0, 10.0), (3.0, 3.0)], FitOptions::default())
            .unwrap();
        assert_eq!(fit.params[1], 3.0);
        assert_eq!(fit.std_errors[1], 0.0);
    }

    #[test]
    fn line() {
        let (m, c) = line_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((m - 2.0).abs() < 1e-12 && (c - 1.0).abs() < 1e-12);
    }
}
