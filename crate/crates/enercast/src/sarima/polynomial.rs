//! Lag-polynomial arithmetic: multiplicative seasonal expansion and the
//! psi-weight long division behind multi-step forecast variance.

use crate::error::{Error, Result};

use super::{SarimaOrder, SarimaParams};

/// Multiplies two lag polynomials given by their full coefficient vectors
/// (index = power of B, index 0 = constant term).
fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `(1 - sum coeffs_i B^(i*stride))` as a full coefficient vector.
fn ar_factor(coeffs: &[f64], stride: usize) -> Vec<f64> {
    let mut out = vec![0.0; coeffs.len() * stride + 1];
    out[0] = 1.0;
    for (i, &c) in coeffs.iter().enumerate() {
        out[(i + 1) * stride] = -c;
    }
    out
}

/// `(1 + sum coeffs_i B^(i*stride))` as a full coefficient vector.
fn ma_factor(coeffs: &[f64], stride: usize) -> Vec<f64> {
    let mut out = vec![0.0; coeffs.len() * stride + 1];
    out[0] = 1.0;
    for (i, &c) in coeffs.iter().enumerate() {
        out[(i + 1) * stride] = c;
    }
    out
}

/// Expands the multiplicative seasonal polynomials into flat per-lag
/// coefficient vectors usable by the residual and forecast recursions.
///
/// The AR side returns regression-form coefficients: entry `i` is the weight
/// on `w[t-1-i]` in `w[t] = constant + sum ar[i] w[t-1-i] + ...`, i.e. the
/// negated coefficients of `(1 - sum phi_i B^i)(1 - sum Phi_j B^(js))`. The
/// MA side returns the coefficients of `(1 + sum theta_i B^i)(1 + sum
/// Theta_j B^(js))` beyond the leading 1, so entry `j` weights `e[t-1-j]`.
pub fn expand_polynomials(
    order: &SarimaOrder,
    params: &SarimaParams,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_dims(order, params)?;
    let ar = poly_mul(
        &ar_factor(&params.phi, 1),
        &ar_factor(&params.seasonal_phi, order.s.max(1)),
    );
    let ma = poly_mul(
        &ma_factor(&params.theta, 1),
        &ma_factor(&params.seasonal_theta, order.s.max(1)),
    );
    let ar_full: Vec<f64> = ar[1..].iter().map(|c| -c).collect();
    let ma_full: Vec<f64> = ma[1..].to_vec();
    debug_assert_eq!(ar_full.len(), order.p + order.sp * order.s);
    debug_assert_eq!(ma_full.len(), order.q + order.sq * order.s);
    Ok((ar_full, ma_full))
}

fn check_dims(order: &SarimaOrder, params: &SarimaParams) -> Result<()> {
    let pairs = [
        ("AR", order.p, params.phi.len()),
        ("MA", order.q, params.theta.len()),
        ("seasonal AR", order.sp, params.seasonal_phi.len()),
        ("seasonal MA", order.sq, params.seasonal_theta.len()),
    ];
    for (what, expected, got) in pairs {
        if expected != got {
            return Err(Error::DimensionMismatch {
                what: what.into(),
                expected,
                got,
            });
        }
    }
    Ok(())
}

/// MA(infinity) weights `psi_0..psi_(horizon-1)` of the integrated process.
///
/// Divides the MA polynomial by the product of the AR polynomial and the
/// differencing factors `(1-B)^d (1-B^s)^D`: with `g` the regression-form
/// coefficients of that combined polynomial, `psi_0 = 1` and
/// `psi_j = m_j + sum_(i=1..j) g_i psi_(j-i)`.
pub fn psi_weights(
    ar_full: &[f64],
    ma_full: &[f64],
    d: usize,
    seasonal_d: usize,
    s: usize,
    horizon: usize,
) -> Vec<f64> {
    // Combined generalized-AR polynomial in product form, leading 1 kept.
    let mut combined = vec![0.0; ar_full.len() + 1];
    combined[0] = 1.0;
    for (i, &c) in ar_full.iter().enumerate() {
        combined[i + 1] = -c;
    }
    for _ in 0..d {
        combined = poly_mul(&combined, &[1.0, -1.0]);
    }
    for _ in 0..seasonal_d {
        let mut factor = vec![0.0; s + 1];
        factor[0] = 1.0;
        factor[s] = -1.0;
        combined = poly_mul(&combined, &factor);
    }
    let g: Vec<f64> = combined[1..].iter().map(|c| -c).collect();

    let mut psi = Vec::with_capacity(horizon);
    for j in 0..horizon {
        let mut value = if j == 0 {
            1.0
        } else {
            *ma_full.get(j - 1).unwrap_or(&0.0)
        };
        if j > 0 {
            for (i, &gi) in g.iter().enumerate().take(j) {
                value += gi * psi[j - 1 - i];
            }
        }
        psi.push(value);
    }
    psi
}
