//! Lag-embedding k-nearest-neighbors regression with recursive multi-step
//! forecasting and rolling-origin cross-validated configuration.
//!
//! A series becomes supervised pairs (window of past values -> next value);
//! prediction averages the targets of the k stored windows closest to the
//! query. Multi-step forecasts feed each prediction back into the query
//! window while neighbors keep coming from observed data only, which is why
//! long-horizon KNN forecasts plateau inside the range of seen targets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{round_half_up, TimeSeries};

/// Distance between lag vectors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distance {
    #[default]
    Euclidean,
    Manhattan,
}

impl Distance {
    fn between(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Distance::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Distance::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        }
    }
}

/// How neighbor targets are combined.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    #[default]
    Uniform,
    InverseDistance,
}

/// Neighbor count and lag-window length for the regressor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnnConfig {
    pub k: usize,
    pub window: usize,
    #[serde(default)]
    pub distance: Distance,
    #[serde(default)]
    pub weighting: Weighting,
}

impl KnnConfig {
    pub fn new(k: usize, window: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if window == 0 {
            return Err(Error::InvalidParameter("window must be at least 1".into()));
        }
        Ok(Self {
            k,
            window,
            distance: Distance::default(),
            weighting: Weighting::default(),
        })
    }
}

/// Supervised pairs derived from consecutive observations: pair `i` maps
/// `values[i..i+w]` to `values[i+w]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagEmbedding {
    window: usize,
    pairs: Vec<(Vec<f64>, f64)>,
}

impl LagEmbedding {
    pub fn window(&self) -> usize {
        self.window
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(Vec<f64>, f64)] {
        &self.pairs
    }
}

/// Builds the lag embedding of a series; needs strictly more observations
/// than the window length.
pub fn embed(series: &TimeSeries, window: usize) -> Result<LagEmbedding> {
    if window == 0 {
        return Err(Error::InvalidParameter("window must be at least 1".into()));
    }
    let values = series.values();
    if values.len() <= window {
        return Err(Error::InsufficientData {
            needed: window + 1,
            got: values.len(),
            context: format!("lag embedding with window {window}"),
        });
    }
    let pairs = (0..values.len() - window)
        .map(|i| (values[i..i + window].to_vec(), values[i + window]))
        .collect();
    Ok(LagEmbedding { window, pairs })
}

/// Predicts the next value for `query` by averaging the targets of its k
/// nearest stored lag vectors. Distance ties break toward the earlier index.
pub fn predict_one(embedding: &LagEmbedding, query: &[f64], config: &KnnConfig) -> Result<f64> {
    if query.len() != embedding.window {
        return Err(Error::LengthMismatch {
            left: query.len(),
            right: embedding.window,
        });
    }
    if config.k == 0 || config.k > embedding.len() {
        return Err(Error::InvalidParameter(format!(
            "k = {} but the embedding has {} pairs",
            config.k,
            embedding.len()
        )));
    }

    let mut ranked: Vec<(f64, usize)> = embedding
        .pairs
        .iter()
        .enumerate()
        .map(|(i, (lags, _))| (config.distance.between(query, lags), i))
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let nearest = &ranked[..config.k];

    match config.weighting {
        Weighting::Uniform => {
            let sum: f64 = nearest.iter().map(|&(_, i)| embedding.pairs[i].1).sum();
            Ok(sum / config.k as f64)
        }
        Weighting::InverseDistance => {
            // Exact matches dominate: average the zero-distance targets.
            let exact: Vec<f64> = nearest
                .iter()
                .filter(|(d, _)| *d == 0.0)
                .map(|&(_, i)| embedding.pairs[i].1)
                .collect();
            if !exact.is_empty() {
                return Ok(exact.iter().sum::<f64>() / exact.len() as f64);
            }
            let total: f64 = nearest.iter().map(|(d, _)| 1.0 / d).sum();
            let weighted: f64 = nearest.iter().map(|&(d, i)| embedding.pairs[i].1 / d).sum();
            Ok(weighted / total)
        }
    }
}

/// Recursive multi-step forecast: step one queries with the last `window`
/// observed values, later steps append their own predictions to the query.
/// The embedding is never re-extended with predictions.
pub fn forecast_recursive(
    series: &TimeSeries,
    config: &KnnConfig,
    horizon: usize,
) -> Result<Vec<f64>> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    let embedding = embed(series, config.window)?;
    let values = series.values();
    let mut query: Vec<f64> = values[values.len() - config.window..].to_vec();
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let prediction = predict_one(&embedding, &query, config)?;
        out.push(prediction);
        query.remove(0);
        query.push(prediction);
    }
    Ok(out)
}

/// One scored candidate from cross-validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvCandidate {
    pub k: usize,
    pub window: usize,
    /// Mean one-step-ahead squared error, absent when the candidate was
    /// infeasible on the shortest training prefix.
    pub mean_squared_error: Option<f64>,
    pub folds: usize,
    pub skipped_reason: Option<String>,
}

/// Cross-validation outcome: the winning configuration plus the scored
/// leaderboard sorted best-first.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvSelection {
    pub config: KnnConfig,
    pub leaderboard: Vec<CvCandidate>,
}

/// Selects `(k, window)` by rolling-origin cross-validation.
///
/// For every candidate pair the series prefix grows one step at a time from
/// 70% of the data, each step scoring the squared error of the one-step
/// prediction of the next observation. The candidate with the smallest mean
/// error wins; ties break toward smaller `k`, then smaller `window`.
pub fn select_config(
    series: &TimeSeries,
    k_grid: &[usize],
    w_grid: &[usize],
) -> Result<CvSelection> {
    if k_grid.is_empty() || w_grid.is_empty() {
        return Err(Error::InvalidParameter(
            "k and window grids must be non-empty".into(),
        ));
    }
    let n = series.len();
    let first_origin = round_half_up(0.7 * n as f64).max(1);
    if first_origin >= n {
        return Err(Error::InsufficientData {
            needed: first_origin + 1,
            got: n,
            context: "rolling-origin cross-validation".into(),
        });
    }
    let folds = n - first_origin;

    let mut ks: Vec<usize> = k_grid.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let mut ws: Vec<usize> = w_grid.to_vec();
    ws.sort_unstable();
    ws.dedup();

    let mut candidates = Vec::with_capacity(ks.len() * ws.len());
    for &k in &ks {
        for &w in &ws {
            if k == 0 || w == 0 {
                candidates.push(CvCandidate {
                    k,
                    window: w,
                    mean_squared_error: None,
                    folds: 0,
                    skipped_reason: Some("k and window must be at least 1".into()),
                });
                continue;
            }
            // Feasible iff the shortest prefix already supports the
            // candidate: more points than the window and at least k pairs.
            if first_origin <= w || first_origin - w < k {
                candidates.push(CvCandidate {
                    k,
                    window: w,
                    mean_squared_error: None,
                    folds: 0,
                    skipped_reason: Some(format!(
                        "infeasible on the first origin of {first_origin} observations"
                    )),
                });
                continue;
            }
            let config = KnnConfig {
                k,
                window: w,
                distance: Distance::default(),
                weighting: Weighting::default(),
            };
            let mut total = 0.0;
            for m in first_origin..n {
                let prefix = TimeSeries::new(
                    series.start_period(),
                    series.cadence(),
                    series.values()[..m].to_vec(),
                )?;
                let embedding = embed(&prefix, w)?;
                let query = &prefix.values()[m - w..];
                let prediction = predict_one(&embedding, query, &config)?;
                let err = prediction - series.values()[m];
                total += err * err;
            }
            candidates.push(CvCandidate {
                k,
                window: w,
                mean_squared_error: Some(total / folds as f64),
                folds,
                skipped_reason: None,
            });
        }
    }

    let mut scored: Vec<&CvCandidate> = candidates
        .iter()
        .filter(|c| c.mean_squared_error.is_some())
        .collect();
    if scored.is_empty() {
        return Err(Error::AllCandidatesFailed {
            reasons: candidates
                .iter()
                .map(|c| {
                    format!(
                        "k={}, w={}: {}",
                        c.k,
                        c.window,
                        c.skipped_reason.as_deref().unwrap_or("unknown")
                    )
                })
                .collect(),
        });
    }
    scored.sort_by(|a, b| {
        let ea = a.mean_squared_error.expect("scored candidate");
        let eb = b.mean_squared_error.expect("scored candidate");
        ea.total_cmp(&eb)
            .then_with(|| a.k.cmp(&b.k))
            .then_with(|| a.window.cmp(&b.window))
    });
    let winner = scored[0];
    let config = KnnConfig {
        k: winner.k,
        window: winner.window,
        distance: Distance::default(),
        weighting: Weighting::default(),
    };

    let mut leaderboard: Vec<CvCandidate> = scored.into_iter().cloned().collect();
    leaderboard.extend(
        candidates
            .into_iter()
            .filter(|c| c.mean_squared_error.is_none()),
    );

    Ok(CvSelection {
        config,
        leaderboard,
    })
}
