//! Seeded synthetic-series generators for tests, examples, and the bundled
//! dataset.
//!
//! The SARIMA sampler builds the process directly from its defining lag
//! recursion (explicit non-seasonal and seasonal loops plus inverse
//! differencing), independently of the polynomial machinery the estimator
//! uses, so simulation-and-recovery checks exercise two separate code paths.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::sarima::{SarimaOrder, SarimaParams};
use crate::series::TimeSeries;

/// Reproducible generator for a given seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` independent N(0, sigma^2) draws.
pub fn white_noise(n: usize, sigma: f64, seed: u64) -> Vec<f64> {
    let mut rng = seeded_rng(seed);
    let normal = Normal::new(0.0, sigma).expect("sigma is finite and non-negative");
    (0..n).map(|_| normal.sample(&mut rng)).collect()
}

/// Draws a SARIMA sample path of length `n`.
///
/// The stationary ARMA core is generated with a 200-step burn-in, then the
/// seasonal and regular differencing are inverted to produce the integrated
/// path. `params.sigma2` sets the innovation variance; `params.constant`
/// enters the ARMA recursion directly.
pub fn simulate_sarima(
    order: &SarimaOrder,
    params: &SarimaParams,
    n: usize,
    seed: u64,
) -> Vec<f64> {
    let burn_in = 200;
    let total = n + burn_in;
    let noise = white_noise(total, params.sigma2.sqrt(), seed);

    let s = order.s.max(1);
    let mut core = vec![0.0; total];
    for t in 0..total {
        let mut value = params.constant + noise[t];
        for (i, &phi) in params.phi.iter().enumerate() {
            let lag = i + 1;
            if t >= lag {
                value += phi * core[t - lag];
            }
        }
        for (i, &sphi) in params.seasonal_phi.iter().enumerate() {
            let lag = (i + 1) * s;
            if t >= lag {
                value += sphi * core[t - lag];
            }
        }
        // Cross terms of the multiplicative seasonal AR factor.
        for (i, &phi) in params.phi.iter().enumerate() {
            for (j, &sphi) in params.seasonal_phi.iter().enumerate() {
                let lag = (i + 1) + (j + 1) * s;
                if t >= lag {
                    value -= phi * sphi * core[t - lag];
                }
            }
        }
        for (j, &theta) in params.theta.iter().enumerate() {
            let lag = j + 1;
            if t >= lag {
                value += theta * noise[t - lag];
            }
        }
        for (j, &stheta) in params.seasonal_theta.iter().enumerate() {
            let lag = (j + 1) * s;
            if t >= lag {
                value += stheta * noise[t - lag];
            }
        }
        // Cross terms of the multiplicative seasonal MA factor.
        for (i, &theta) in params.theta.iter().enumerate() {
            for (j, &stheta) in params.seasonal_theta.iter().enumerate() {
                let lag = (i + 1) + (j + 1) * s;
                if t >= lag {
                    value += theta * stheta * noise[t - lag];
                }
            }
        }
        core[t] = value;
    }

    // Integrate: invert seasonal differencing, then regular differencing.
    let mut path = core;
    for _ in 0..order.sd {
        let mut integrated = vec![0.0; path.len()];
        for t in 0..path.len() {
            integrated[t] = if t < s {
                path[t]
            } else {
                integrated[t - s] + path[t]
            };
        }
        path = integrated;
    }
    for _ in 0..order.d {
        let mut acc = 0.0;
        for v in path.iter_mut() {
            acc += *v;
            *v = acc;
        }
    }

    path.split_off(path.len() - n)
}

/// Logistic growth with additive Gaussian noise: an energy-share-shaped
/// curve rising from `floor` toward `ceiling` with midpoint at index
/// `midpoint` and steepness `rate`.
pub fn logistic_series(
    n: usize,
    floor: f64,
    ceiling: f64,
    midpoint: f64,
    rate: f64,
    noise_sigma: f64,
    seed: u64,
) -> Vec<f64> {
    let noise = white_noise(n, noise_sigma, seed);
    (0..n)
        .map(|t| {
            let growth = (ceiling - floor) / (1.0 + (-rate * (t as f64 - midpoint)).exp());
            floor + growth + noise[t]
        })
        .collect()
}

/// Wraps a generated path into an annual [`TimeSeries`].
pub fn annual_series(start_year: i64, values: Vec<f64>) -> TimeSeries {
    TimeSeries::annual(start_year, values).expect("generated values are finite and non-empty")
}
