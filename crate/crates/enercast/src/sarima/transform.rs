//! Bijection between unconstrained optimizer space and
//! stationary/invertible coefficient vectors.
//!
//! Each unconstrained value is squashed through `tanh` into a partial
//! autocorrelation in (-1, 1), then the Durbin-Levinson recursion turns the
//! partials into polynomial coefficients. Every image satisfies the root
//! condition, so the optimizer can roam all of R^n. Applied to MA
//! coefficients the same map enforces invertibility.

use crate::error::{Error, Result};

/// Durbin-Levinson: partial autocorrelations (all in (-1, 1)) to
/// coefficients.
fn pacs_to_coeffs(pacs: &[f64]) -> Vec<f64> {
    let n = pacs.len();
    let mut coeffs = vec![0.0; n];
    let mut prev = vec![0.0; n];
    for k in 0..n {
        prev[..k].copy_from_slice(&coeffs[..k]);
        coeffs[k] = pacs[k];
        for j in 0..k {
            coeffs[j] = prev[j] - pacs[k] * prev[k - 1 - j];
        }
    }
    coeffs
}

/// Inverse Durbin-Levinson: coefficients to partial autocorrelations.
/// Errors if any recovered partial falls outside (-1, 1), i.e. the input
/// polynomial has a root on or inside the unit circle.
fn coeffs_to_pacs(coeffs: &[f64]) -> Result<Vec<f64>> {
    let n = coeffs.len();
    let mut pacs = vec![0.0; n];
    let mut work = coeffs.to_vec();
    for k in (0..n).rev() {
        let r = work[k];
        if r.abs() >= 1.0 || r.is_nan() {
            return Err(Error::NonStationary(format!(
                "partial autocorrelation at lag {} is {r}, outside (-1, 1)",
                k + 1
            )));
        }
        pacs[k] = r;
        if k > 0 {
            let denom = 1.0 - r * r;
            let mut lower = vec![0.0; k];
            for j in 0..k {
                lower[j] = (work[j] + r * work[k - 1 - j]) / denom;
            }
            work[..k].copy_from_slice(&lower);
        }
    }
    Ok(pacs)
}

/// Maps an unconstrained vector to a stationary/invertible coefficient
/// vector. Total function: every input is valid.
pub fn unconstrained_to_coeffs(unconstrained: &[f64]) -> Vec<f64> {
    let pacs: Vec<f64> = unconstrained.iter().map(|u| u.tanh()).collect();
    pacs_to_coeffs(&pacs)
}

/// Inverse of [`unconstrained_to_coeffs`]. Errors on coefficient vectors
/// that violate the root condition.
pub fn coeffs_to_unconstrained(coeffs: &[f64]) -> Result<Vec<f64>> {
    Ok(coeffs_to_pacs(coeffs)?.iter().map(|r| r.atanh()).collect())
}

/// Whether a coefficient vector satisfies the stationarity (or, for MA
/// parameters, invertibility) root condition.
pub fn satisfies_root_condition(coeffs: &[f64]) -> bool {
    coeffs_to_pacs(coeffs).is_ok()
}
