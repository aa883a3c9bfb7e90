//! SARIMA(p,d,q)(P,D,Q)_s estimation, model selection, and forecasting.
//!
//! Coefficients are estimated by minimizing the conditional sum of squares
//! under a Gaussian likelihood, with the simplex optimizer searching a
//! transformed space that keeps AR polynomials stationary and MA polynomials
//! invertible. Orders are compared by AIC/BIC (or a holdout MSE) over a
//! configurable grid, and forecasts carry symmetric confidence bands from
//! the psi-weights of the integrated process.

pub mod normal;
pub mod optim;
pub mod polynomial;
pub mod transform;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{chronological_split, integrate, SplitSpec, TimeSeries};

pub use normal::normal_quantile;
pub use optim::{nelder_mead, NelderMeadOptions, NelderMeadResult};
pub use polynomial::{expand_polynomials, psi_weights};

const LN_2PI: f64 = 1.8378770664093453;

/// Variance floor below which a fit is flagged as degenerate (constant
/// columns fail soft instead of erroring).
pub const DEGENERATE_SIGMA2: f64 = 1e-12;

/// Default cap on forecast horizons.
pub const DEFAULT_MAX_HORIZON: usize = 100;

/// Model order: lowercase terms act at lag 1, uppercase at lag `s`.
/// `s = 0` denotes plain ARIMA with no seasonal terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SarimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    #[serde(rename = "P")]
    pub sp: usize,
    #[serde(rename = "D")]
    pub sd: usize,
    #[serde(rename = "Q")]
    pub sq: usize,
    pub s: usize,
}

impl SarimaOrder {
    /// Plain ARIMA(p,d,q): no seasonal component.
    pub fn arima(p: usize, d: usize, q: usize) -> Self {
        Self {
            p,
            d,
            q,
            sp: 0,
            sd: 0,
            sq: 0,
            s: 0,
        }
    }

    pub fn seasonal(
        p: usize,
        d: usize,
        q: usize,
        sp: usize,
        sd: usize,
        sq: usize,
        s: usize,
    ) -> Self {
        Self {
            p,
            d,
            q,
            sp,
            sd,
            sq,
            s,
        }
    }

    /// Parameter count entering AIC/BIC: coefficients plus the constant and
    /// the innovation variance.
    pub fn k(&self) -> usize {
        self.p + self.q + self.sp + self.sq + 2
    }

    /// Degree of the expanded AR polynomial.
    pub fn ar_degree(&self) -> usize {
        self.p + self.sp * self.s
    }

    /// Degree of the expanded MA polynomial.
    pub fn ma_degree(&self) -> usize {
        self.q + self.sq * self.s
    }

    /// Observations consumed by differencing.
    pub fn differencing_loss(&self) -> usize {
        self.d + self.sd * self.s
    }

    /// Checks internal consistency and the coefficient-count cap.
    pub fn validate(&self, max_coefficients: usize) -> Result<()> {
        if self.s == 0 && (self.sp > 0 || self.sd > 0 || self.sq > 0) {
            return Err(Error::InvalidParameter(format!(
                "seasonal orders require s >= 1, got {self}"
            )));
        }
        let coeffs = self.p + self.q + self.sp + self.sq;
        if coeffs > max_coefficients {
            return Err(Error::InvalidParameter(format!(
                "{self} has {coeffs} coefficients, maximum is {max_coefficients}"
            )));
        }
        Ok(())
    }

    fn tuple(&self) -> (usize, usize, usize, usize, usize, usize, usize) {
        (self.p, self.d, self.q, self.sp, self.sd, self.sq, self.s)
    }
}

impl fmt::Display for SarimaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s == 0 {
            write!(f, "({},{},{})", self.p, self.d, self.q)
        } else {
            write!(
                f,
                "({},{},{})({},{},{})s={}",
                self.p, self.d, self.q, self.sp, self.sd, self.sq, self.s
            )
        }
    }
}

impl FromStr for SarimaOrder {
    type Err = Error;

    /// Parses `p,d,q` or `p,d,q,P,D,Q,s`.
    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<usize> = text
            .split(',')
            .map(|t| {
                t.trim().parse::<usize>().map_err(|_| {
                    Error::InvalidParameter(format!(
                        "order component {t:?} is not a non-negative integer"
                    ))
                })
            })
            .collect::<Result<_>>()?;
        match parts.as_slice() {
            [p, d, q] => Ok(SarimaOrder::arima(*p, *d, *q)),
            [p, d, q, sp, sd, sq, s] => Ok(SarimaOrder::seasonal(*p, *d, *q, *sp, *sd, *sq, *s)),
            _ => Err(Error::InvalidParameter(format!(
                "order must be p,d,q or p,d,q,P,D,Q,s, got {text:?}"
            ))),
        }
    }
}

/// Coefficients of a SARIMA model in the positive-MA sign convention:
/// `w[t] = constant + sum phi_i w[t-i] + e[t] + sum theta_j e[t-j]`, with the
/// seasonal factors multiplying in at lag `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SarimaParams {
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    #[serde(rename = "Phi")]
    pub seasonal_phi: Vec<f64>,
    #[serde(rename = "Theta")]
    pub seasonal_theta: Vec<f64>,
    pub constant: f64,
    pub sigma2: f64,
}

impl SarimaParams {
    /// Zero-coefficient parameters matching `order`.
    pub fn zeros(order: &SarimaOrder) -> Self {
        Self {
            phi: vec![0.0; order.p],
            theta: vec![0.0; order.q],
            seasonal_phi: vec![0.0; order.sp],
            seasonal_theta: vec![0.0; order.sq],
            constant: 0.0,
            sigma2: 1.0,
        }
    }

    /// Checks dimensions against `order`, positivity of `sigma2`, and the
    /// stationarity/invertibility root conditions.
    pub fn validate(&self, order: &SarimaOrder) -> Result<()> {
        polynomial::expand_polynomials(order, self)?;
        if self.sigma2 <= 0.0 || self.sigma2.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "sigma2 must be positive, got {}",
                self.sigma2
            )));
        }
        let negated = |v: &[f64]| v.iter().map(|c| -c).collect::<Vec<_>>();
        if !transform::satisfies_root_condition(&self.phi) {
            return Err(Error::NonStationary("AR coefficients".into()));
        }
        if !transform::satisfies_root_condition(&self.seasonal_phi) {
            return Err(Error::NonStationary("seasonal AR coefficients".into()));
        }
        if !transform::satisfies_root_condition(&negated(&self.theta)) {
            return Err(Error::NonStationary(
                "MA coefficients are not invertible".into(),
            ));
        }
        if !transform::satisfies_root_condition(&negated(&self.seasonal_theta)) {
            return Err(Error::NonStationary(
                "seasonal MA coefficients are not invertible".into(),
            ));
        }
        Ok(())
    }
}

/// A fitted model with its diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FittedSarima {
    pub order: SarimaOrder,
    pub params: SarimaParams,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub n_effective: usize,
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub degenerate: bool,
}

/// Point forecasts with a symmetric confidence band.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForecastResult {
    pub horizon: usize,
    pub point: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub level: f64,
}

/// Knobs for a single fit.
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    /// Include a constant term (the series here are trending shares, so the
    /// default is on).
    pub with_constant: bool,
    /// Cap on p+q+P+Q.
    pub max_coefficients: usize,
    /// Extra optimizer starts from seeded perturbations of the default
    /// start. Zero keeps the single deterministic start.
    pub restarts: usize,
    /// Seed for restart perturbations; recorded by callers in their output.
    pub seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            with_constant: true,
            max_coefficients: 8,
            restarts: 0,
            seed: 0,
        }
    }
}

/// Ranking rule for grid search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Aic,
    Bic,
    /// Nested 80/20 chronological holdout scored by MSE of the multi-step
    /// forecast; the winning order is refitted on the full series.
    HoldoutMse,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::Aic => write!(f, "aic"),
            Criterion::Bic => write!(f, "bic"),
            Criterion::HoldoutMse => write!(f, "holdout-mse"),
        }
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text.to_ascii_lowercase().as_str() {
            "aic" => Ok(Criterion::Aic),
            "bic" => Ok(Criterion::Bic),
            "holdout-mse" | "holdout_mse" => Ok(Criterion::HoldoutMse),
            other => Err(Error::InvalidParameter(format!(
                "unknown criterion {other:?}; expected aic, bic, or holdout-mse"
            ))),
        }
    }
}

/// Order ranges for grid search. `season = 0` searches plain ARIMA only;
/// seasonal terms need an explicit period.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderGrid {
    pub p_max: usize,
    pub d_max: usize,
    pub q_max: usize,
    #[serde(rename = "P_max")]
    pub sp_max: usize,
    #[serde(rename = "D_max")]
    pub sd_max: usize,
    #[serde(rename = "Q_max")]
    pub sq_max: usize,
    pub season: usize,
}

impl Default for OrderGrid {
    fn default() -> Self {
        Self {
            p_max: 3,
            d_max: 2,
            q_max: 3,
            sp_max: 2,
            sd_max: 1,
            sq_max: 2,
            season: 0,
        }
    }
}

impl OrderGrid {
    /// Enumerates the grid in lexicographic (p, d, q, P, D, Q) order.
    pub fn orders(&self) -> Vec<SarimaOrder> {
        let (sp_max, sd_max, sq_max) = if self.season == 0 {
            (0, 0, 0)
        } else {
            (self.sp_max, self.sd_max, self.sq_max)
        };
        let mut out = Vec::new();
        for p in 0..=self.p_max {
            for d in 0..=self.d_max {
                for q in 0..=self.q_max {
                    for sp in 0..=sp_max {
                        for sd in 0..=sd_max {
                            for sq in 0..=sq_max {
                                out.push(SarimaOrder::seasonal(p, d, q, sp, sd, sq, self.season));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// One row of the grid-search leaderboard.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeaderboardEntry {
    pub order: SarimaOrder,
    pub k: usize,
    #[serde(flatten)]
    pub status: EntryStatus,
}

/// Outcome of one grid cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EntryStatus {
    Fitted {
        criterion_value: f64,
        loglik: f64,
        aic: f64,
        bic: f64,
        converged: bool,
    },
    Skipped {
        reason: String,
    },
    Failed {
        reason: String,
    },
}

/// Grid search outcome: the winning fit plus the full ranked leaderboard
/// (fitted entries best-first, then skipped/failed with reasons).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub criterion: Criterion,
    pub best: FittedSarima,
    pub leaderboard: Vec<LeaderboardEntry>,
}

/// How presample terms are handled in the residual recursion.
#[derive(Clone, Copy, PartialEq)]
enum Presample {
    /// Residuals before `deg(ar)` are pinned to zero and excluded from the
    /// objective — the CSS conditioning convention.
    Trim,
    /// Every point gets a residual; observation lags reaching before the
    /// sample substitute this level (the sample mean), residual lags
    /// substitute zero. Used for reporting, so models of different orders
    /// are scored over the same observations without the first residuals
    /// blowing up on high-level series.
    Mean(f64),
}

/// Runs the residual recursion
/// `e[t] = w[t] - c - sum ar_i w[t-i] - sum ma_j e[t-j]`
/// over the full series, returning residuals aligned with `w`.
fn residual_recursion(
    w: &[f64],
    ar: &[f64],
    ma: &[f64],
    constant: f64,
    presample: Presample,
) -> Vec<f64> {
    let n = w.len();
    let deg_ar = ar.len();
    let mut e = vec![0.0; n];
    for t in 0..n {
        if presample == Presample::Trim && t < deg_ar {
            continue;
        }
        let mut acc = w[t] - constant;
        for (i, &coef) in ar.iter().enumerate() {
            if t > i {
                acc -= coef * w[t - 1 - i];
            } else if let Presample::Mean(level) = presample {
                acc -= coef * level;
            }
        }
        for (j, &coef) in ma.iter().enumerate() {
            if t > j {
                acc -= coef * e[t - 1 - j];
            }
        }
        e[t] = acc;
    }
    e
}

fn sample_mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sum_of_squares(e: &[f64], from: usize) -> f64 {
    e[from..].iter().map(|v| v * v).sum()
}

/// Differences a series by the order's `(d, D, s)`.
fn difference_for(series: &TimeSeries, order: &SarimaOrder) -> Result<TimeSeries> {
    let seasonal = if order.sd > 0 {
        series.seasonal_difference(order.sd, order.s)?
    } else {
        series.clone()
    };
    seasonal.difference(order.d)
}

/// Conditional-sum-of-squares Gaussian log-likelihood of `params` on an
/// already-differenced series.
///
/// Presample residuals are zeroed and the first `deg(ar)` points are trimmed
/// from the sum, so the value covers `n' = n - deg(ar)` points. Explosive
/// trial parameters that overflow the recursion yield negative infinity
/// instead of an error, keeping the objective total for the optimizer.
pub fn css_loglik(
    series_differenced: &TimeSeries,
    order: &SarimaOrder,
    params: &SarimaParams,
) -> Result<f64> {
    let (ar, ma) = polynomial::expand_polynomials(order, params)?;
    let n = series_differenced.len();
    if n <= ar.len() {
        return Err(Error::InsufficientData {
            needed: ar.len() + 1,
            got: n,
            context: format!("css log-likelihood for {order}"),
        });
    }
    if params.sigma2 <= 0.0 || params.sigma2.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "sigma2 must be positive, got {}",
            params.sigma2
        )));
    }
    let e = residual_recursion(
        series_differenced.values(),
        &ar,
        &ma,
        params.constant,
        Presample::Trim,
    );
    let css = sum_of_squares(&e, ar.len());
    if !css.is_finite() {
        return Ok(f64::NEG_INFINITY);
    }
    let n_prime = (n - ar.len()) as f64;
    Ok(-0.5 * n_prime * (LN_2PI + params.sigma2.ln()) - css / (2.0 * params.sigma2))
}

/// Layout of the optimizer vector: optional constant first, then the
/// transformed AR, MA, seasonal AR, seasonal MA blocks.
struct ParamCodec {
    order: SarimaOrder,
    with_constant: bool,
}

impl ParamCodec {
    fn dim(&self) -> usize {
        usize::from(self.with_constant)
            + self.order.p
            + self.order.q
            + self.order.sp
            + self.order.sq
    }

    fn decode(&self, x: &[f64]) -> SarimaParams {
        let mut cursor = 0;
        let constant = if self.with_constant {
            cursor += 1;
            x[0]
        } else {
            0.0
        };
        let mut take = |len: usize| {
            let block = &x[cursor..cursor + len];
            cursor += len;
            transform::unconstrained_to_coeffs(block)
        };
        let phi = take(self.order.p);
        let theta: Vec<f64> = take(self.order.q).iter().map(|c| -c).collect();
        let seasonal_phi = take(self.order.sp);
        let seasonal_theta: Vec<f64> = take(self.order.sq).iter().map(|c| -c).collect();
        SarimaParams {
            phi,
            theta,
            seasonal_phi,
            seasonal_theta,
            constant,
            sigma2: 1.0,
        }
    }

    fn starting_point(&self, mean: f64) -> Vec<f64> {
        let mut x = vec![0.0; self.dim()];
        if self.with_constant {
            x[0] = mean;
        }
        x
    }
}

/// Fits `order` to `series` with default options.
pub fn fit(series: &TimeSeries, order: &SarimaOrder) -> Result<FittedSarima> {
    fit_with_options(series, order, &FitOptions::default())
}

/// Fits `order` to `series`.
///
/// The optimizer minimizes the concentrated CSS objective (variance solved
/// analytically as CSS/n') in the stationarity-transformed space, starting
/// from zero coefficients and the differenced-sample mean for the constant.
/// Non-convergence is reported through the `converged` flag rather than an
/// error. The reported log-likelihood, AIC, and BIC score the residual
/// recursion over all `n_effective` post-differencing observations so that
/// values are comparable across orders in a grid.
pub fn fit_with_options(
    series: &TimeSeries,
    order: &SarimaOrder,
    options: &FitOptions,
) -> Result<FittedSarima> {
    order.validate(options.max_coefficients)?;
    let w = difference_for(series, order)?;
    let n_diff = w.len();
    let k = order.k();
    let deg_ar = order.ar_degree();
    let needed = (k + 5).max(deg_ar + 2);
    if n_diff < needed {
        return Err(Error::InsufficientData {
            needed,
            got: n_diff,
            context: format!("fitting {order}"),
        });
    }

    let mean = sample_mean(w.values());
    let codec = ParamCodec {
        order: *order,
        with_constant: options.with_constant,
    };
    let n_prime = (n_diff - deg_ar) as f64;

    let objective = |x: &[f64]| -> f64 {
        let params = codec.decode(x);
        let (ar, ma) =
            polynomial::expand_polynomials(order, &params).expect("codec dims match order");
        let e = residual_recursion(w.values(), &ar, &ma, params.constant, Presample::Trim);
        let css = sum_of_squares(&e, deg_ar);
        if !css.is_finite() {
            return f64::INFINITY;
        }
        let sigma2 = (css / n_prime).max(1e-300);
        0.5 * n_prime * (LN_2PI + sigma2.ln() + 1.0)
    };

    let start = codec.starting_point(mean);
    let mut best = nelder_mead(objective, &start, NelderMeadOptions::default());
    if options.restarts > 0 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(options.seed);
        let noise = rand_distr::Normal::new(0.0, 0.5).expect("valid normal");
        for _ in 0..options.restarts {
            let jittered: Vec<f64> = start.iter().map(|v| v + noise.sample(&mut rng)).collect();
            let candidate = nelder_mead(objective, &jittered, NelderMeadOptions::default());
            if candidate.f < best.f {
                best = candidate;
            }
        }
    }

    let mut params = codec.decode(&best.x);
    let (ar, ma) = polynomial::expand_polynomials(order, &params)?;

    let trimmed = residual_recursion(w.values(), &ar, &ma, params.constant, Presample::Trim);
    let css_trimmed = sum_of_squares(&trimmed, deg_ar);
    params.sigma2 = (css_trimmed / n_prime).max(1e-300);
    let degenerate = params.sigma2 < DEGENERATE_SIGMA2;

    // Reported likelihood covers every post-differencing observation, with
    // presample lags held at the sample mean, so AIC/BIC stay comparable
    // across orders that trim different presample lengths.
    let residuals =
        residual_recursion(w.values(), &ar, &ma, params.constant, Presample::Mean(mean));
    let css_full = sum_of_squares(&residuals, 0);
    let n_effective = n_diff;
    let sigma2_report = (css_full / n_effective as f64).max(1e-300);
    let loglik = -0.5 * n_effective as f64 * (LN_2PI + sigma2_report.ln() + 1.0);
    let aic = -2.0 * loglik + 2.0 * k as f64;
    let bic = -2.0 * loglik + k as f64 * (n_effective as f64).ln();

    Ok(FittedSarima {
        order: *order,
        params,
        loglik,
        aic,
        bic,
        n_effective,
        residuals,
        converged: best.converged,
        degenerate,
    })
}

/// Multi-step forecast from a fitted model over the series it was fitted on.
///
/// Point forecasts iterate the SARIMA recursion on the differenced scale
/// with future innovations at zero, then re-integrate to the original scale.
/// The band half-width at step `h` is `z(level) * sigma * sqrt(sum_(j<h)
/// psi_j^2)` with psi the MA(infinity) weights of the integrated process.
pub fn forecast(
    model: &FittedSarima,
    history: &TimeSeries,
    horizon: usize,
    level: f64,
) -> Result<ForecastResult> {
    forecast_with_limit(model, history, horizon, level, DEFAULT_MAX_HORIZON)
}

/// [`forecast`] with an explicit horizon cap.
pub fn forecast_with_limit(
    model: &FittedSarima,
    history: &TimeSeries,
    horizon: usize,
    level: f64,
    max_horizon: usize,
) -> Result<ForecastResult> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    if horizon > max_horizon {
        return Err(Error::HorizonTooLarge {
            horizon,
            max: max_horizon,
        });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence level must lie in (0, 1), got {level}"
        )));
    }

    let order = &model.order;
    let params = &model.params;
    let (ar, ma) = polynomial::expand_polynomials(order, params)?;
    let w = difference_for(history, order)?;
    let n = w.len();
    let mean = sample_mean(w.values());
    let residuals =
        residual_recursion(w.values(), &ar, &ma, params.constant, Presample::Mean(mean));

    // Extend the differenced series step by step; future residuals are zero.
    let mut extended: Vec<f64> = w.values().to_vec();
    let mut future = Vec::with_capacity(horizon);
    for h in 0..horizon {
        let t = n + h;
        let mut value = params.constant;
        for (i, &coef) in ar.iter().enumerate() {
            if t > i {
                value += coef * extended[t - 1 - i];
            }
        }
        for (j, &coef) in ma.iter().enumerate() {
            if t > j {
                let idx = t - 1 - j;
                if idx < n {
                    value += coef * residuals[idx];
                }
            }
        }
        extended.push(value);
        future.push(value);
    }

    let point = integrate(&future, history, order.d, order.sd, order.s.max(1))?;

    let psi = polynomial::psi_weights(&ar, &ma, order.d, order.sd, order.s.max(1), horizon);
    let z = normal_quantile(0.5 + level / 2.0);
    let sigma = params.sigma2.sqrt();
    let mut cumulative = 0.0;
    let mut lower = Vec::with_capacity(horizon);
    let mut upper = Vec::with_capacity(horizon);
    for (h, &weight) in psi.iter().enumerate() {
        cumulative += weight * weight;
        let half_width = z * sigma * cumulative.sqrt();
        lower.push(point[h] - half_width);
        upper.push(point[h] + half_width);
    }

    Ok(ForecastResult {
        horizon,
        point,
        lower,
        upper,
        level,
    })
}

/// Exhaustive order search over `grid`, ranked by `criterion`.
pub fn grid_search(
    series: &TimeSeries,
    grid: &OrderGrid,
    criterion: Criterion,
) -> Result<GridSearchResult> {
    grid_search_with_options(series, grid, criterion, &FitOptions::default())
}

/// Exhaustive order search with explicit fit options.
///
/// Every combination is fitted; those failing preconditions are recorded as
/// skipped, those erroring as failed. Fitted entries are ranked by criterion
/// value with ties broken by fewer parameters, then the lexicographic order
/// tuple, so the result does not depend on evaluation order.
pub fn grid_search_with_options(
    series: &TimeSeries,
    grid: &OrderGrid,
    criterion: Criterion,
    options: &FitOptions,
) -> Result<GridSearchResult> {
    grid_search_orders(series, &grid.orders(), criterion, options)
}

/// Grid search over an explicit list of candidate orders.
pub fn grid_search_orders(
    series: &TimeSeries,
    orders: &[SarimaOrder],
    criterion: Criterion,
    options: &FitOptions,
) -> Result<GridSearchResult> {
    if orders.is_empty() {
        return Err(Error::InvalidParameter("order grid is empty".into()));
    }

    // Holdout scoring fits candidates on a nested 80% prefix and ranks by
    // forecast MSE over the remaining 20%.
    let holdout = match criterion {
        Criterion::HoldoutMse => Some(chronological_split(series, SplitSpec::default())?),
        _ => None,
    };

    let mut entries: Vec<(LeaderboardEntry, Option<FittedSarima>)> =
        Vec::with_capacity(orders.len());
    for order in orders {
        let fit_series = holdout.as_ref().map(|(train, _)| train).unwrap_or(series);
        let outcome = fit_with_options(fit_series, order, options);
        let entry = match outcome {
            Ok(fitted) => {
                let criterion_value = match criterion {
                    Criterion::Aic => Ok(fitted.aic),
                    Criterion::Bic => Ok(fitted.bic),
                    Criterion::HoldoutMse => {
                        let (_, test) = holdout.as_ref().expect("holdout split exists");
                        forecast_with_limit(&fitted, fit_series, test.len(), 0.95, usize::MAX)
                            .and_then(|f| crate::metrics::mse(test.values(), &f.point))
                    }
                };
                match criterion_value {
                    Ok(value) if value.is_finite() => (
                        LeaderboardEntry {
                            order: *order,
                            k: order.k(),
                            status: EntryStatus::Fitted {
                                criterion_value: value,
                                loglik: fitted.loglik,
                                aic: fitted.aic,
                                bic: fitted.bic,
                                converged: fitted.converged,
                            },
                        },
                        Some(fitted),
                    ),
                    Ok(value) => (
                        LeaderboardEntry {
                            order: *order,
                            k: order.k(),
                            status: EntryStatus::Failed {
                                reason: format!("non-finite criterion value {value}"),
                            },
                        },
                        None,
                    ),
                    Err(err) => (
                        LeaderboardEntry {
                            order: *order,
                            k: order.k(),
                            status: EntryStatus::Failed {
                                reason: err.to_string(),
                            },
                        },
                        None,
                    ),
                }
            }
            Err(err @ (Error::InsufficientData { .. } | Error::InvalidParameter(_))) => (
                LeaderboardEntry {
                    order: *order,
                    k: order.k(),
                    status: EntryStatus::Skipped {
                        reason: err.to_string(),
                    },
                },
                None,
            ),
            Err(err) => (
                LeaderboardEntry {
                    order: *order,
                    k: order.k(),
                    status: EntryStatus::Failed {
                        reason: err.to_string(),
                    },
                },
                None,
            ),
        };
        entries.push(entry);
    }

    let mut fitted: Vec<(LeaderboardEntry, FittedSarima)> = Vec::new();
    let mut rest: Vec<LeaderboardEntry> = Vec::new();
    for (entry, model) in entries {
        match model {
            Some(m) => fitted.push((entry, m)),
            None => rest.push(entry),
        }
    }
    if fitted.is_empty() {
        let reasons = rest
            .iter()
            .map(|e| match &e.status {
                EntryStatus::Skipped { reason } | EntryStatus::Failed { reason } => {
                    format!("{}: {reason}", e.order)
                }
                EntryStatus::Fitted { .. } => unreachable!("fitted entries handled above"),
            })
            .collect();
        return Err(Error::AllCandidatesFailed { reasons });
    }

    fitted.sort_by(|(a, _), (b, _)| {
        let va = match a.status {
            EntryStatus::Fitted {
                criterion_value, ..
            } => criterion_value,
            _ => f64::INFINITY,
        };
        let vb = match b.status {
            EntryStatus::Fitted {
                criterion_value, ..
            } => criterion_value,
            _ => f64::INFINITY,
        };
        va.total_cmp(&vb)
            .then_with(|| a.k.cmp(&b.k))
            .then_with(|| a.order.tuple().cmp(&b.order.tuple()))
    });

    let best_order = fitted[0].0.order;
    let best = match criterion {
        // Holdout candidates were fitted on the nested prefix; the winner is
        // refitted on the full series.
        Criterion::HoldoutMse => fit_with_options(series, &best_order, options)?,
        _ => fitted[0].1.clone(),
    };

    let mut leaderboard: Vec<LeaderboardEntry> = fitted.into_iter().map(|(e, _)| e).collect();
    leaderboard.extend(rest);

    Ok(GridSearchResult {
        criterion,
        best,
        leaderboard,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim;
    use approx::assert_abs_diff_eq;

    fn white_noise_series(n: usize, seed: u64) -> TimeSeries {
        TimeSeries::annual(1, sim::white_noise(n, 1.0, seed)).unwrap()
    }

    #[test]
    fn order_parsing_and_display() {
        let plain: SarimaOrder = "0,1,2".parse().unwrap();
        assert_eq!(plain, SarimaOrder::arima(0, 1, 2));
        assert_eq!(plain.to_string(), "(0,1,2)");
        let seasonal: SarimaOrder = "1,0,0,1,1,0,4".parse().unwrap();
        assert_eq!(seasonal, SarimaOrder::seasonal(1, 0, 0, 1, 1, 0, 4));
        assert_eq!(seasonal.to_string(), "(1,0,0)(1,1,0)s=4");
        assert!("1,2".parse::<SarimaOrder>().is_err());
        assert!("1,2,x".parse::<SarimaOrder>().is_err());
    }

    #[test]
    fn order_validation() {
        assert!(SarimaOrder::seasonal(0, 0, 0, 1, 0, 0, 0)
            .validate(8)
            .is_err());
        assert!(SarimaOrder::arima(5, 0, 5).validate(8).is_err());
        assert!(SarimaOrder::arima(3, 2, 3).validate(8).is_ok());
    }

    #[test]
    fn params_validation_enforces_roots_and_variance() {
        let order = SarimaOrder::arima(1, 0, 1);
        let good = SarimaParams {
            phi: vec![0.6],
            theta: vec![0.4],
            sigma2: 1.0,
            ..SarimaParams::zeros(&order)
        };
        assert!(good.validate(&order).is_ok());

        let explosive_ar = SarimaParams {
            phi: vec![1.2],
            ..good.clone()
        };
        assert!(matches!(
            explosive_ar.validate(&order),
            Err(Error::NonStationary(_))
        ));

        let noninvertible_ma = SarimaParams {
            theta: vec![-1.5],
            ..good.clone()
        };
        assert!(matches!(
            noninvertible_ma.validate(&order),
            Err(Error::NonStationary(_))
        ));

        let bad_variance = SarimaParams {
            sigma2: 0.0,
            ..good.clone()
        };
        assert!(bad_variance.validate(&order).is_err());

        let wrong_dims = SarimaParams {
            phi: vec![0.2, 0.1],
            ..good
        };
        assert!(matches!(
            wrong_dims.validate(&order),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn css_loglik_matches_iid_gaussian_closed_form() {
        let series = white_noise_series(300, 7);
        let n = series.len() as f64;
        let mean = series.values().iter().sum::<f64>() / n;
        let var = series
            .values()
            .iter()
            .map(|v| (v - mean).powi(2))
            .sum::<f64>()
            / n;

        let order = SarimaOrder::arima(0, 0, 0);
        let params = SarimaParams {
            constant: mean,
            sigma2: var,
            ..SarimaParams::zeros(&order)
        };
        let got = css_loglik(&series, &order, &params).unwrap();
        // Closed form: -(n/2)(ln 2pi + ln var) - sum (x - mean)^2 / (2 var).
        let css: f64 = series.values().iter().map(|v| (v - mean).powi(2)).sum();
        let want = -0.5 * n * (LN_2PI + var.ln()) - css / (2.0 * var);
        assert_abs_diff_eq!(got, want, epsilon = 1e-9);
    }

    #[test]
    fn zero_ar_coefficient_is_inert_on_common_sample() {
        let series = white_noise_series(200, 9);
        let sub = TimeSeries::annual(2, series.values()[1..].to_vec()).unwrap();

        let ar1 = SarimaOrder::arima(1, 0, 0);
        let null = SarimaOrder::arima(0, 0, 0);
        let params_ar1 = SarimaParams {
            constant: 0.3,
            sigma2: 1.1,
            ..SarimaParams::zeros(&ar1)
        };
        let params_null = SarimaParams {
            constant: 0.3,
            sigma2: 1.1,
            ..SarimaParams::zeros(&null)
        };
        // AR(1) with phi = 0 trims one point; evaluating the null model on
        // the same trimmed sample must give the identical value.
        let a = css_loglik(&series, &ar1, &params_ar1).unwrap();
        let b = css_loglik(&sub, &null, &params_null).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-9);
    }

    #[test]
    fn css_loglik_prefers_true_ar_coefficient() {
        let values = sim::simulate_sarima(
            &SarimaOrder::arima(1, 0, 0),
            &SarimaParams {
                phi: vec![0.7],
                sigma2: 1.0,
                ..SarimaParams::zeros(&SarimaOrder::arima(1, 0, 0))
            },
            500,
            21,
        );
        let series = TimeSeries::annual(1, values).unwrap();
        let order = SarimaOrder::arima(1, 0, 0);
        let good = SarimaParams {
            phi: vec![0.7],
            sigma2: 1.0,
            ..SarimaParams::zeros(&order)
        };
        let bad = SarimaParams {
            phi: vec![0.0],
            sigma2: 1.0,
            ..SarimaParams::zeros(&order)
        };
        assert!(
            css_loglik(&series, &order, &good).unwrap()
                > css_loglik(&series, &order, &bad).unwrap()
        );
    }

    #[test]
    fn explosive_parameters_yield_negative_infinity() {
        // An MA coefficient this large makes the residual recursion overflow
        // within a hundred steps; the objective must absorb that as -inf.
        let series = white_noise_series(100, 3);
        let order = SarimaOrder::arima(0, 0, 1);
        let params = SarimaParams {
            theta: vec![1e6],
            sigma2: 1.0,
            ..SarimaParams::zeros(&order)
        };
        assert_eq!(
            css_loglik(&series, &order, &params).unwrap(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn fit_constant_series_is_degenerate_not_an_error() {
        let series = TimeSeries::annual(2000, vec![4.2; 20]).unwrap();
        let fitted = fit(&series, &SarimaOrder::arima(0, 0, 0)).unwrap();
        assert!(fitted.degenerate);
        assert!((fitted.params.constant - 4.2).abs() < 1e-6);
        assert!(fitted.params.sigma2 < DEGENERATE_SIGMA2);
        assert!(fitted.params.sigma2 > 0.0);
    }

    #[test]
    fn fit_recovers_ar1_coefficient() {
        let order = SarimaOrder::arima(1, 0, 0);
        let truth = SarimaParams {
            phi: vec![0.7],
            sigma2: 1.0,
            ..SarimaParams::zeros(&order)
        };
        let values = sim::simulate_sarima(&order, &truth, 500, 42);
        let series = TimeSeries::annual(1, values).unwrap();
        let fitted = fit(&series, &order).unwrap();
        assert!(
            (fitted.params.phi[0] - 0.7).abs() < 0.1,
            "phi = {}",
            fitted.params.phi[0]
        );
        assert!(fitted.converged);
    }

    #[test]
    fn sigma2_concentration_is_optimal() {
        let series = white_noise_series(150, 5);
        let order = SarimaOrder::arima(1, 0, 0);
        let fitted = fit(&series, &order).unwrap();
        let at = |scale: f64| {
            let params = SarimaParams {
                sigma2: fitted.params.sigma2 * scale,
                ..fitted.params.clone()
            };
            css_loglik(&series, &order, &params).unwrap()
        };
        let center = at(1.0);
        assert!(center > at(1.1), "sigma2 +10% should lower the loglik");
        assert!(center > at(0.9), "sigma2 -10% should lower the loglik");
    }

    #[test]
    fn aic_bic_identities() {
        let series = white_noise_series(120, 17);
        for order in [
            SarimaOrder::arima(0, 0, 0),
            SarimaOrder::arima(1, 0, 1),
            SarimaOrder::arima(2, 1, 0),
        ] {
            let fitted = fit(&series, &order).unwrap();
            let k = order.k() as f64;
            assert_abs_diff_eq!(fitted.aic, -2.0 * fitted.loglik + 2.0 * k, epsilon = 1e-12);
            assert_abs_diff_eq!(
                fitted.bic,
                -2.0 * fitted.loglik + k * (fitted.n_effective as f64).ln(),
                epsilon = 1e-12
            );
            assert_eq!(fitted.residuals.len(), fitted.n_effective);
        }
    }

    #[test]
    fn fit_is_deterministic() {
        let series = white_noise_series(200, 31);
        let order = SarimaOrder::arima(2, 0, 1);
        let a = fit(&series, &order).unwrap();
        let b = fit(&series, &order).unwrap();
        assert_eq!(a.params.phi, b.params.phi);
        assert_eq!(a.params.theta, b.params.theta);
        assert_eq!(a.loglik.to_bits(), b.loglik.to_bits());
    }

    #[test]
    fn fit_rejects_short_series() {
        let series = TimeSeries::annual(2000, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(matches!(
            fit(&series, &SarimaOrder::arima(1, 0, 1)),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn random_walk_forecast_is_flat_with_sqrt_h_band() {
        let values = sim::simulate_sarima(
            &SarimaOrder::arima(0, 1, 0),
            &SarimaParams {
                sigma2: 1.0,
                ..SarimaParams::zeros(&SarimaOrder::arima(0, 1, 0))
            },
            80,
            11,
        );
        let series = TimeSeries::annual(1940, values).unwrap();
        let options = FitOptions {
            with_constant: false,
            ..FitOptions::default()
        };
        let fitted = fit_with_options(&series, &SarimaOrder::arima(0, 1, 0), &options).unwrap();
        let fc = forecast(&fitted, &series, 8, 0.95).unwrap();
        let last = series.last_value();
        for p in &fc.point {
            assert_abs_diff_eq!(*p, last, epsilon = 1e-9);
        }
        let base = fc.upper[0] - fc.point[0];
        for (h, (&up, &pt)) in fc.upper.iter().zip(&fc.point).enumerate() {
            let expected = base * ((h + 1) as f64).sqrt();
            assert_abs_diff_eq!(up - pt, expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn mean_model_forecast_is_constant_with_flat_band() {
        let series = white_noise_series(100, 2);
        let fitted = fit(&series, &SarimaOrder::arima(0, 0, 0)).unwrap();
        let fc = forecast(&fitted, &series, 5, 0.95).unwrap();
        let c = fitted.params.constant;
        for p in &fc.point {
            assert_abs_diff_eq!(*p, c, epsilon = 1e-9);
        }
        let w0 = fc.upper[0] - fc.lower[0];
        for (u, l) in fc.upper.iter().zip(&fc.lower) {
            assert_abs_diff_eq!(u - l, w0, epsilon = 1e-9);
        }
    }

    #[test]
    fn ar1_forecast_decays_geometrically() {
        // Hand-iterated recursion: with phi = 0.5, constant 0, last
        // differenced value 8, forecasts are 4, 2, 1, ...
        let mut values = sim::white_noise(60, 1.0, 13);
        values[59] = 8.0;
        let series = TimeSeries::annual(1960, values).unwrap();
        let order = SarimaOrder::arima(1, 0, 0);
        let model = FittedSarima {
            order,
            params: SarimaParams {
                phi: vec![0.5],
                sigma2: 1.0,
                ..SarimaParams::zeros(&order)
            },
            loglik: 0.0,
            aic: 0.0,
            bic: 0.0,
            n_effective: 60,
            residuals: vec![0.0; 60],
            converged: true,
            degenerate: false,
        };
        let fc = forecast(&model, &series, 3, 0.95).unwrap();
        assert_abs_diff_eq!(fc.point[0], 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fc.point[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fc.point[2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn forecast_validates_inputs() {
        let series = white_noise_series(50, 1);
        let fitted = fit(&series, &SarimaOrder::arima(0, 0, 0)).unwrap();
        assert!(forecast(&fitted, &series, 0, 0.95).is_err());
        assert!(matches!(
            forecast(&fitted, &series, 101, 0.95),
            Err(Error::HorizonTooLarge { .. })
        ));
        assert!(forecast(&fitted, &series, 5, 1.5).is_err());
    }

    #[test]
    fn band_ordering_holds() {
        let series = white_noise_series(80, 23);
        let fitted = fit(&series, &SarimaOrder::arima(1, 1, 1)).unwrap();
        let fc = forecast(&fitted, &series, 10, 0.9).unwrap();
        for h in 0..10 {
            assert!(fc.lower[h] <= fc.point[h] && fc.point[h] <= fc.upper[h]);
        }
    }

    #[test]
    fn singleton_grid_returns_that_order() {
        let series = white_noise_series(100, 19);
        let orders = [SarimaOrder::arima(1, 0, 1)];
        let result =
            grid_search_orders(&series, &orders, Criterion::Aic, &FitOptions::default()).unwrap();
        assert_eq!(result.best.order, SarimaOrder::arima(1, 0, 1));
        assert_eq!(result.leaderboard.len(), 1);
    }

    #[test]
    fn grid_search_is_invariant_to_enumeration_order() {
        let series = white_noise_series(150, 29);
        let grid = OrderGrid {
            p_max: 1,
            d_max: 1,
            q_max: 1,
            season: 0,
            ..OrderGrid::default()
        };
        let mut orders = grid.orders();
        let forward =
            grid_search_orders(&series, &orders, Criterion::Aic, &FitOptions::default()).unwrap();
        orders.reverse();
        let backward =
            grid_search_orders(&series, &orders, Criterion::Aic, &FitOptions::default()).unwrap();
        assert_eq!(forward.best.order, backward.best.order);
        let tops = |r: &GridSearchResult| r.leaderboard.iter().map(|e| e.order).collect::<Vec<_>>();
        assert_eq!(tops(&forward), tops(&backward));
    }

    #[test]
    fn grid_search_detects_seasonal_structure() {
        let order = SarimaOrder::seasonal(1, 0, 0, 1, 0, 0, 4);
        let truth = SarimaParams {
            phi: vec![0.8],
            seasonal_phi: vec![0.6],
            sigma2: 1.0,
            ..SarimaParams::zeros(&order)
        };
        let values = sim::simulate_sarima(&order, &truth, 400, 33);
        let series = TimeSeries::annual(1, values).unwrap();
        let grid = OrderGrid {
            p_max: 1,
            d_max: 0,
            q_max: 1,
            sp_max: 1,
            sd_max: 0,
            sq_max: 1,
            season: 4,
        };
        let result = grid_search(&series, &grid, Criterion::Aic).unwrap();
        assert!(result.best.order.p >= 1, "selected {}", result.best.order);
        assert!(result.best.order.sp >= 1, "selected {}", result.best.order);
    }

    #[test]
    fn grid_search_reports_all_failures() {
        let series = TimeSeries::annual(2000, vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let grid = OrderGrid {
            p_max: 3,
            d_max: 0,
            q_max: 3,
            season: 0,
            ..OrderGrid::default()
        };
        // Five points cannot support any of these fits (k + 5 > 5): every
        // combination is skipped, which must surface as an aggregate error.
        let err = grid_search(&series, &grid, Criterion::Aic).unwrap_err();
        assert!(matches!(err, Error::AllCandidatesFailed { .. }));
    }

    #[test]
    fn fitted_model_serializes_with_contract_field_names() {
        let series = white_noise_series(80, 61);
        let fitted = fit(&series, &SarimaOrder::seasonal(1, 0, 1, 1, 0, 1, 4)).unwrap();
        let json = serde_json::to_value(&fitted).unwrap();
        for key in [
            "order",
            "params",
            "loglik",
            "aic",
            "bic",
            "n_effective",
            "residuals",
        ] {
            assert!(json.get(key).is_some(), "missing key {key}");
        }
        for key in ["p", "d", "q", "P", "D", "Q", "s"] {
            assert!(json["order"].get(key).is_some(), "missing order key {key}");
        }
        for key in ["phi", "theta", "Phi", "Theta", "constant", "sigma2"] {
            assert!(
                json["params"].get(key).is_some(),
                "missing params key {key}"
            );
        }
        assert_eq!(json["params"]["phi"].as_array().unwrap().len(), 1);
        assert_eq!(json["params"]["Phi"].as_array().unwrap().len(), 1);

        let fc = forecast(&fitted, &series, 3, 0.95).unwrap();
        let json = serde_json::to_value(&fc).unwrap();
        for key in ["horizon", "point", "lower", "upper", "level"] {
            assert!(json.get(key).is_some(), "missing forecast key {key}");
        }
    }

    #[test]
    fn leaderboard_serializes_statuses_with_reasons() {
        // 14 points fit the null but are too few for (3,2,3): k + 5 = 13
        // exceeds the 12 observations left after differencing.
        let series = white_noise_series(14, 67);
        let orders = [SarimaOrder::arima(0, 0, 0), SarimaOrder::arima(3, 2, 3)];
        let result =
            grid_search_orders(&series, &orders, Criterion::Aic, &FitOptions::default()).unwrap();
        let json = serde_json::to_value(&result.leaderboard).unwrap();
        let rows = json.as_array().unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0]["status"], "fitted");
        assert!(rows[0]["criterion_value"].is_number());
        assert_eq!(rows[1]["status"], "skipped");
        assert!(rows[1]["reason"].is_string());
    }

    #[test]
    fn holdout_criterion_selects_and_refits() {
        let order = SarimaOrder::arima(1, 0, 0);
        let truth = SarimaParams {
            phi: vec![0.7],
            constant: 1.0,
            sigma2: 1.0,
            ..SarimaParams::zeros(&order)
        };
        let values = sim::simulate_sarima(&order, &truth, 200, 51);
        let series = TimeSeries::annual(1, values).unwrap();
        let grid = OrderGrid {
            p_max: 1,
            d_max: 0,
            q_max: 1,
            season: 0,
            ..OrderGrid::default()
        };
        let result = grid_search(&series, &grid, Criterion::HoldoutMse).unwrap();
        // Refit on the full series: the effective sample must cover it all.
        assert_eq!(result.best.n_effective, 200);
    }
}
