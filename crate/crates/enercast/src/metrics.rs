//! Forecast error metrics and the chronological backtest harness.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knn::{self, KnnConfig};
use crate::sarima::{self, Criterion, FitOptions, OrderGrid, SarimaOrder};
use crate::series::{chronological_split, SplitSpec, TimeSeries};

fn check_lengths(actual: &[f64], predicted: &[f64]) -> Result<()> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            left: actual.len(),
            right: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::InsufficientData {
            needed: 1,
            got: 0,
            context: "error metrics".into(),
        });
    }
    Ok(())
}

/// Mean absolute error.
pub fn mae(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check_lengths(actual, predicted)?;
    Ok(actual
        .iter()
        .zip(predicted)
        .map(|(a, p)| (a - p).abs())
        .sum::<f64>()
        / actual.len() as f64)
}

/// Mean squared error.
pub fn mse(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check_lengths(actual, predicted)?;
    Ok(actual
        .iter()
        .zip(predicted)
        .map(|(a, p)| (a - p) * (a - p))
        .sum::<f64>()
        / actual.len() as f64)
}

/// Root mean squared error.
pub fn rmse(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    Ok(mse(actual, predicted)?.sqrt())
}

/// Mean absolute percentage error, in percent. Errors if any actual value
/// is zero, naming the offending index.
pub fn mape(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check_lengths(actual, predicted)?;
    if let Some(index) = actual.iter().position(|a| *a == 0.0) {
        return Err(Error::ZeroActual { index });
    }
    Ok(100.0
        * actual
            .iter()
            .zip(predicted)
            .map(|(a, p)| ((a - p) / a).abs())
            .sum::<f64>()
        / actual.len() as f64)
}

/// MAE/MSE/RMSE/MAPE of one model on one held-out segment.
///
/// `mape` is absent when an actual value of zero makes it undefined; the
/// table renderer shows such cells as `--`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorReport {
    pub mae: f64,
    pub mse: f64,
    pub rmse: f64,
    pub mape: Option<f64>,
    pub n: usize,
    pub model_tag: String,
    pub parameter_tag: String,
}

impl ErrorReport {
    /// Scores a forecast against observed values.
    pub fn score(
        actual: &[f64],
        predicted: &[f64],
        model_tag: &str,
        parameter_tag: &str,
    ) -> Result<Self> {
        let mape_value = match mape(actual, predicted) {
            Ok(v) => Some(v),
            Err(Error::ZeroActual { .. }) => None,
            Err(other) => return Err(other),
        };
        Ok(Self {
            mae: mae(actual, predicted)?,
            mse: mse(actual, predicted)?,
            rmse: rmse(actual, predicted)?,
            mape: mape_value,
            n: actual.len(),
            model_tag: model_tag.into(),
            parameter_tag: parameter_tag.into(),
        })
    }
}

/// What to fit during a backtest.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpec {
    /// SARIMA with a fixed order.
    Sarima { order: SarimaOrder },
    /// SARIMA with the order chosen by grid search on the training side.
    SarimaGrid {
        grid: OrderGrid,
        criterion: Criterion,
    },
    /// KNN with a fixed configuration.
    Knn { config: KnnConfig },
    /// KNN with `(k, window)` chosen by rolling-origin cross-validation on
    /// the training side.
    KnnCv {
        k_grid: Vec<usize>,
        w_grid: Vec<usize>,
    },
}

impl ModelSpec {
    fn tag_for(&self, fitted_order: Option<&SarimaOrder>, config: Option<&KnnConfig>) -> String {
        match (fitted_order, config) {
            (Some(order), _) => format!("sarima{order}"),
            (_, Some(c)) => format!("knn(k={},w={})", c.k, c.window),
            _ => "model".into(),
        }
    }
}

/// Splits chronologically, fits (and, when grids are given, selects) on the
/// training side only, forecasts the full test length in one multi-step run,
/// and scores against the held-out values.
pub fn backtest(series: &TimeSeries, model: &ModelSpec, split: SplitSpec) -> Result<ErrorReport> {
    backtest_with_options(series, model, split, &FitOptions::default())
}

/// [`backtest`] with explicit SARIMA fit options.
pub fn backtest_with_options(
    series: &TimeSeries,
    model: &ModelSpec,
    split: SplitSpec,
    options: &FitOptions,
) -> Result<ErrorReport> {
    let (train, test) = chronological_split(series, split)?;
    let horizon = test.len();

    let (predicted, tag) = match model {
        ModelSpec::Sarima { order } => {
            let fitted = sarima::fit_with_options(&train, order, options)?;
            let fc = sarima::forecast_with_limit(&fitted, &train, horizon, 0.95, usize::MAX)?;
            (fc.point, model.tag_for(Some(order), None))
        }
        ModelSpec::SarimaGrid { grid, criterion } => {
            let result = sarima::grid_search_with_options(&train, grid, *criterion, options)?;
            let fc = sarima::forecast_with_limit(&result.best, &train, horizon, 0.95, usize::MAX)?;
            let order = result.best.order;
            (fc.point, model.tag_for(Some(&order), None))
        }
        ModelSpec::Knn { config } => {
            let out = knn::forecast_recursive(&train, config, horizon)?;
            (out, model.tag_for(None, Some(config)))
        }
        ModelSpec::KnnCv { k_grid, w_grid } => {
            let selection = knn::select_config(&train, k_grid, w_grid)?;
            let out = knn::forecast_recursive(&train, &selection.config, horizon)?;
            (out, model.tag_for(None, Some(&selection.config)))
        }
    };

    ErrorReport::score(test.values(), &predicted, &tag, "series")
}

/// Renders reports as an aligned text table: one parameter row per report,
/// metric columns, absent cells shown as `--`.
pub fn render_table(reports: &[ErrorReport]) -> String {
    let headers = ["Parameter", "Model", "MAE", "MSE", "RMSE", "MAPE (%)"];
    let mut rows: Vec<[String; 6]> = Vec::with_capacity(reports.len());
    for r in reports {
        rows.push([
            r.parameter_tag.clone(),
            r.model_tag.clone(),
            format!("{:.3}", r.mae),
            format!("{:.3}", r.mse),
            format!("{:.3}", r.rmse),
            r.mape.map_or_else(|| "--".into(), |v| format!("{v:.2}")),
        ]);
    }
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut push_row = |cells: &[String]| {
        let line: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    push_row(&headers.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    push_row(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>());
    for row in rows {
        push_row(&row);
    }
    out
}
