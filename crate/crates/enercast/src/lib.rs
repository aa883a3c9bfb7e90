//! Long-horizon forecasting for annual energy series.
//!
//! `enercast` pairs two complementary forecasters over the same clean
//! time-series core: a SARIMA(p,d,q)(P,D,Q)_s model estimated by
//! conditional-sum-of-squares Gaussian likelihood with AIC/BIC grid search,
//! and a lag-embedding k-nearest-neighbors regressor with rolling-origin
//! cross-validated `k` and window. Around them sit CSV ingestion with
//! missing-value cleaning, chronological backtesting, multi-step forecasting
//! with confidence bands, and MAE/MSE/RMSE/MAPE reporting.
//!
//! The crate is a library first; `examples/` holds one runnable program per
//! capability, and the thin `enercast` binary exposes the same pipeline as
//! `ingest`, `backtest`, `gridsearch`, `forecast`, and `report` subcommands.
//!
//! ```
//! use enercast::{SarimaOrder, TimeSeries};
//!
//! let series = TimeSeries::annual(2000, vec![5.0, 5.6, 6.1, 6.9, 7.4, 8.2, 8.9, 9.5, 10.3, 11.0])?;
//! let fit = enercast::sarima::fit(&series, &SarimaOrder::arima(0, 1, 0))?;
//! let forecast = enercast::sarima::forecast(&fit, &series, 5, 0.95)?;
//! assert_eq!(forecast.point.len(), 5);
//! # Ok::<(), enercast::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod ingest;
pub mod knn;
pub mod metrics;
pub mod sarima;
pub mod series;
pub mod sim;

pub use error::{Error, Result};
pub use ingest::{clean, CleanOptions, CleanReport, ParseOptions, RawTable};
pub use knn::{KnnConfig, LagEmbedding};
pub use metrics::{backtest, ErrorReport, ModelSpec};
pub use sarima::{Criterion, FittedSarima, ForecastResult, OrderGrid, SarimaOrder, SarimaParams};
pub use series::{chronological_split, integrate, SplitSpec, TimeSeries};
