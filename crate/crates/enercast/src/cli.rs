//! Command-line front end: `ingest`, `backtest`, `gridsearch`, `forecast`,
//! and `report` subcommands wiring the library into one pipeline.
//!
//! Every command is deterministic for fixed inputs, flags, and seed, and the
//! seed is recorded in each JSON artifact. Exit codes: 0 success, 1
//! computation failure, 2 I/O or invalid invocation, 3 empty result.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::{clean, parse_csv_path, CleanOptions, CleanReport, ParseOptions};
use crate::knn::{self, KnnConfig};
use crate::metrics::{render_table, ErrorReport, ModelSpec};
use crate::sarima::{self, Criterion, FitOptions, OrderGrid, SarimaOrder};
use crate::series::{SplitSpec, TimeSeries};

#[derive(Debug, Parser)]
#[command(
    name = "enercast",
    version,
    about = "Forecast long-horizon annual energy series with SARIMA and lag-embedding KNN"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a CSV table, drop unusable columns, and report what survived.
    Ingest(IngestArgs),
    /// Chronological train/test backtest with MAE/MSE/RMSE/MAPE per model.
    Backtest(BacktestArgs),
    /// Rank model configurations on the full series.
    Gridsearch(GridsearchArgs),
    /// Fit on the full series and project future periods.
    Forecast(ForecastArgs),
    /// Backtest both models across columns and print the metrics table.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelChoice {
    Sarima,
    Knn,
    Both,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Input CSV: period column first, one numeric column per parameter.
    #[arg(long)]
    input: PathBuf,
    /// Columns to use (comma separated); default is every kept column.
    #[arg(long, value_delimiter = ',')]
    columns: Vec<String>,
    /// Minimum observations for a column to survive cleaning.
    #[arg(long = "min-obs", default_value_t = 10)]
    min_obs: usize,
    /// Extra missing-value sentinel, repeatable. Defaults cover "", NA,
    /// N/A, "..", and "-".
    #[arg(long = "missing-token")]
    missing_tokens: Vec<String>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write the primary output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for optional randomized restarts; recorded in every JSON
    /// artifact.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct SarimaArgs {
    /// Fixed order p,d,q or p,d,q,P,D,Q,s; skips the grid search.
    #[arg(long)]
    order: Option<String>,
    #[arg(long = "p-max", default_value_t = 3)]
    p_max: usize,
    #[arg(long = "d-max", default_value_t = 2)]
    d_max: usize,
    #[arg(long = "q-max", default_value_t = 3)]
    q_max: usize,
    #[arg(long = "P-max", default_value_t = 2)]
    sp_max: usize,
    #[arg(long = "D-max", default_value_t = 1)]
    sd_max: usize,
    #[arg(long = "Q-max", default_value_t = 2)]
    sq_max: usize,
    /// Seasonal period for the grid; 0 searches plain ARIMA only.
    #[arg(long, default_value_t = 0)]
    season: usize,
    #[arg(long, value_parser = parse_criterion, default_value = "aic")]
    criterion: Criterion,
    /// Fit without a constant term.
    #[arg(long = "no-constant")]
    no_constant: bool,
    /// Extra seeded optimizer restarts per fit.
    #[arg(long, default_value_t = 0)]
    restarts: usize,
}

fn parse_criterion(text: &str) -> std::result::Result<Criterion, String> {
    text.parse().map_err(|e: Error| e.to_string())
}

impl SarimaArgs {
    fn grid(&self) -> OrderGrid {
        OrderGrid {
            p_max: self.p_max,
            d_max: self.d_max,
            q_max: self.q_max,
            sp_max: self.sp_max,
            sd_max: self.sd_max,
            sq_max: self.sq_max,
            season: self.season,
        }
    }

    fn fixed_order(&self) -> Result<Option<SarimaOrder>> {
        self.order.as_deref().map(str::parse).transpose()
    }

    fn fit_options(&self, seed: u64) -> FitOptions {
        FitOptions {
            with_constant: !self.no_constant,
            restarts: self.restarts,
            seed,
            ..FitOptions::default()
        }
    }
}

#[derive(Debug, Args)]
struct KnnArgs {
    /// Fixed neighbor count; skips cross-validation when --window is also
    /// given.
    #[arg(long)]
    k: Option<usize>,
    /// Fixed lag-window length.
    #[arg(long)]
    window: Option<usize>,
    /// Candidate neighbor counts for cross-validation.
    #[arg(long = "k-grid", value_delimiter = ',', default_values_t = vec![1, 2, 3, 5, 7, 10])]
    k_grid: Vec<usize>,
    /// Candidate window lengths for cross-validation.
    #[arg(long = "w-grid", value_delimiter = ',', default_values_t = vec![1, 2, 3, 5])]
    w_grid: Vec<usize>,
}

impl KnnArgs {
    fn spec(&self) -> Result<ModelSpec> {
        match (self.k, self.window) {
            (Some(k), Some(window)) => Ok(ModelSpec::Knn {
                config: KnnConfig::new(k, window)?,
            }),
            (None, None) => Ok(ModelSpec::KnnCv {
                k_grid: self.k_grid.clone(),
                w_grid: self.w_grid.clone(),
            }),
            _ => Err(Error::InvalidParameter(
                "--k and --window must be given together".into(),
            )),
        }
    }
}

#[derive(Debug, Args)]
struct IngestArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct BacktestArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum, default_value_t = ModelChoice::Both)]
    model: ModelChoice,
    #[arg(long = "train-ratio", default_value_t = 0.8)]
    train_ratio: f64,
    #[command(flatten)]
    sarima: SarimaArgs,
    #[command(flatten)]
    knn: KnnArgs,
}

#[derive(Debug, Args)]
struct GridsearchArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum, default_value_t = ModelChoice::Sarima)]
    model: ModelChoice,
    #[command(flatten)]
    sarima: SarimaArgs,
    #[command(flatten)]
    knn: KnnArgs,
}

#[derive(Debug, Args)]
struct ForecastArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum, default_value_t = ModelChoice::Sarima)]
    model: ModelChoice,
    /// Periods to project beyond the last observation.
    #[arg(long, default_value_t = 10)]
    horizon: usize,
    /// Confidence level for SARIMA bands.
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Also write plot data (period, actual, point, lower, upper) to this
    /// CSV; requires a single selected column.
    #[arg(long = "plot-out")]
    plot_out: Option<PathBuf>,
    #[command(flatten)]
    sarima: SarimaArgs,
    #[command(flatten)]
    knn: KnnArgs,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Write the primary output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModelChoice::Both)]
    model: ModelChoice,
    #[arg(long = "train-ratio", default_value_t = 0.8)]
    train_ratio: f64,
    #[command(flatten)]
    sarima: SarimaArgs,
    #[command(flatten)]
    knn: KnnArgs,
}

#[derive(Serialize)]
struct IngestOutput {
    seed: u64,
    source: String,
    report: CleanReport,
}

#[derive(Serialize)]
struct SeriesFailure {
    series: String,
    model: String,
    error: String,
}

#[derive(Serialize)]
struct BacktestOutput {
    seed: u64,
    train_ratio: f64,
    reports: Vec<ErrorReport>,
    failures: Vec<SeriesFailure>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum SearchResult {
    Sarima(Box<sarima::GridSearchResult>),
    Knn(knn::CvSelection),
}

#[derive(Serialize)]
struct SearchOutput {
    seed: u64,
    results: Vec<NamedSearch>,
}

#[derive(Serialize)]
struct NamedSearch {
    series: String,
    #[serde(flatten)]
    result: SearchResult,
}

#[derive(Clone, Serialize)]
struct ForecastBlock {
    series: String,
    model_tag: String,
    periods: Vec<i64>,
    point: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    upper: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    level: Option<f64>,
}

#[derive(Serialize)]
struct ForecastOutput {
    seed: u64,
    horizon: usize,
    blocks: Vec<ForecastBlock>,
}

/// Entry point for the binary: parses `std::env::args` and returns the
/// process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Testable entry point over explicit arguments.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successes; everything else is an
            // invocation error.
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::File { .. } => 2,
        Error::EmptyDataset(_) => 3,
        _ => 1,
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Ingest(args) => cmd_ingest(args),
        Command::Backtest(args) => cmd_backtest(args),
        Command::Gridsearch(args) => cmd_gridsearch(args),
        Command::Forecast(args) => cmd_forecast(args),
        Command::Report(args) => cmd_report(args),
    }
}

fn load_columns(input: &InputArgs) -> Result<(Vec<(String, TimeSeries)>, CleanReport)> {
    let mut parse_options = ParseOptions::default();
    parse_options
        .missing_tokens
        .extend(input.missing_tokens.iter().cloned());
    let table = parse_csv_path(&input.input, &parse_options)?;
    let clean_options = CleanOptions {
        min_observations: input.min_obs,
    };
    clean(&table, &clean_options)
}

/// Restricts kept columns to the requested names, preserving request order.
fn select_columns(
    kept: Vec<(String, TimeSeries)>,
    requested: &[String],
) -> Result<Vec<(String, TimeSeries)>> {
    if requested.is_empty() {
        return Ok(kept);
    }
    let mut out = Vec::with_capacity(requested.len());
    for name in requested {
        match kept.iter().find(|(n, _)| n == name) {
            Some(found) => out.push(found.clone()),
            None => {
                return Err(Error::InvalidParameter(format!(
                    "column {name:?} is not among the kept columns"
                )))
            }
        }
    }
    Ok(out)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::File {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            handle
                .write_all(text.as_bytes())
                .map_err(|source| Error::File {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output types serialize");
    text.push('\n');
    text
}

fn cmd_ingest(args: IngestArgs) -> Result<i32> {
    let (kept, report) = load_columns(&args.input)?;
    let _ = kept;
    let text = match args.output.format {
        Format::Json => to_json(&IngestOutput {
            seed: args.output.seed,
            source: args.input.input.display().to_string(),
            report,
        }),
        Format::Table | Format::Csv => {
            let mut text = String::from("column,status,reason\n");
            for name in &report.kept_columns {
                text.push_str(&format!("{name},kept,\n"));
            }
            for dropped in &report.dropped_columns {
                text.push_str(&format!("{},dropped,{}\n", dropped.name, dropped.reason));
            }
            text
        }
    };
    write_output(args.output.out.as_deref(), &text)?;
    Ok(0)
}

fn model_specs(
    choice: ModelChoice,
    sarima_args: &SarimaArgs,
    knn_args: &KnnArgs,
) -> Result<Vec<ModelSpec>> {
    let sarima_spec = || -> Result<ModelSpec> {
        Ok(match sarima_args.fixed_order()? {
            Some(order) => ModelSpec::Sarima { order },
            None => ModelSpec::SarimaGrid {
                grid: sarima_args.grid(),
                criterion: sarima_args.criterion,
            },
        })
    };
    Ok(match choice {
        ModelChoice::Sarima => vec![sarima_spec()?],
        ModelChoice::Knn => vec![knn_args.spec()?],
        ModelChoice::Both => vec![sarima_spec()?, knn_args.spec()?],
    })
}

fn run_backtests(
    columns: &[(String, TimeSeries)],
    specs: &[ModelSpec],
    split: SplitSpec,
    options: &FitOptions,
) -> (Vec<ErrorReport>, Vec<SeriesFailure>) {
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (name, series) in columns {
        for spec in specs {
            match crate::metrics::backtest_with_options(series, spec, split, options) {
                Ok(mut report) => {
                    report.parameter_tag = name.clone();
                    reports.push(report);
                }
                Err(err) => failures.push(SeriesFailure {
                    series: name.clone(),
                    model: match spec {
                        ModelSpec::Sarima { .. } | ModelSpec::SarimaGrid { .. } => "sarima".into(),
                        _ => "knn".into(),
                    },
                    error: err.to_string(),
                }),
            }
        }
    }
    (reports, failures)
}

fn backtest_text(format: Format, output: &BacktestOutput) -> String {
    match format {
        Format::Json => to_json(output),
        Format::Table => {
            let mut text = render_table(&output.reports);
            for failure in &output.failures {
                text.push_str(&format!(
                    "{} / {}: {}\n",
                    failure.series, failure.model, failure.error
                ));
            }
            text.push_str(&format!("seed: {}\n", output.seed));
            text
        }
        Format::Csv => {
            let mut text = String::from("parameter,model,mae,mse,rmse,mape,n\n");
            for r in &output.reports {
                text.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.parameter_tag,
                    r.model_tag,
                    r.mae,
                    r.mse,
                    r.rmse,
                    r.mape.map_or(String::new(), |v| v.to_string()),
                    r.n
                ));
            }
            text
        }
    }
}

fn cmd_backtest(args: BacktestArgs) -> Result<i32> {
    let (kept, _) = load_columns(&args.input)?;
    let columns = select_columns(kept, &args.input.columns)?;
    let specs = model_specs(args.model, &args.sarima, &args.knn)?;
    let split = SplitSpec::new(args.train_ratio)?;
    let options = args.sarima.fit_options(args.output.seed);

    let (reports, failures) = run_backtests(&columns, &specs, split, &options);
    let all_failed = reports.is_empty() && !failures.is_empty();
    let output = BacktestOutput {
        seed: args.output.seed,
        train_ratio: args.train_ratio,
        reports,
        failures,
    };
    write_output(
        args.output.out.as_deref(),
        &backtest_text(args.output.format, &output),
    )?;
    Ok(if all_failed { 1 } else { 0 })
}

fn cmd_report(args: ReportArgs) -> Result<i32> {
    let backtest_args = BacktestArgs {
        input: args.input,
        output: OutputArgs {
            out: args.out,
            format: args.format,
            seed: args.seed,
        },
        model: args.model,
        train_ratio: args.train_ratio,
        sarima: args.sarima,
        knn: args.knn,
    };
    cmd_backtest(backtest_args)
}

fn cmd_gridsearch(args: GridsearchArgs) -> Result<i32> {
    let (kept, _) = load_columns(&args.input)?;
    let columns = select_columns(kept, &args.input.columns)?;
    let options = args.sarima.fit_options(args.output.seed);

    let mut results = Vec::with_capacity(columns.len());
    for (name, series) in &columns {
        let result = match args.model {
            ModelChoice::Sarima => {
                SearchResult::Sarima(Box::new(match args.sarima.fixed_order()? {
                    Some(order) => sarima::grid_search_orders(
                        series,
                        &[order],
                        args.sarima.criterion,
                        &options,
                    )?,
                    None => sarima::grid_search_with_options(
                        series,
                        &args.sarima.grid(),
                        args.sarima.criterion,
                        &options,
                    )?,
                }))
            }
            ModelChoice::Knn => SearchResult::Knn(knn::select_config(
                series,
                &args.knn.k_grid,
                &args.knn.w_grid,
            )?),
            ModelChoice::Both => {
                return Err(Error::InvalidParameter(
                    "gridsearch ranks one model at a time; pass --model sarima or --model knn"
                        .into(),
                ))
            }
        };
        results.push(NamedSearch {
            series: name.clone(),
            result,
        });
    }

    let text = match args.output.format {
        Format::Json => to_json(&SearchOutput {
            seed: args.output.seed,
            results,
        }),
        Format::Table | Format::Csv => {
            let mut text = String::new();
            for named in &results {
                match &named.result {
                    SearchResult::Sarima(result) => {
                        text.push_str(&format!(
                            "{}: best {} by {}\n",
                            named.series, result.best.order, result.criterion
                        ));
                        text.push_str("order,k,status,criterion_value,aic,bic\n");
                        for entry in &result.leaderboard {
                            match &entry.status {
                                sarima::EntryStatus::Fitted {
                                    criterion_value,
                                    aic,
                                    bic,
                                    ..
                                } => text.push_str(&format!(
                                    "{},{},fitted,{criterion_value:.4},{aic:.4},{bic:.4}\n",
                                    entry.order, entry.k
                                )),
                                sarima::EntryStatus::Skipped { reason } => text.push_str(&format!(
                                    "{},{},skipped,{reason},,\n",
                                    entry.order, entry.k
                                )),
                                sarima::EntryStatus::Failed { reason } => text.push_str(&format!(
                                    "{},{},failed,{reason},,\n",
                                    entry.order, entry.k
                                )),
                            }
                        }
                    }
                    SearchResult::Knn(selection) => {
                        text.push_str(&format!(
                            "{}: best k={} window={}\n",
                            named.series, selection.config.k, selection.config.window
                        ));
                        text.push_str("k,window,mean_squared_error,folds\n");
                        for c in &selection.leaderboard {
                            text.push_str(&format!(
                                "{},{},{},{}\n",
                                c.k,
                                c.window,
                                c.mean_squared_error
                                    .map_or_else(|| "skipped".into(), |v| format!("{v:.6}")),
                                c.folds
                            ));
                        }
                    }
                }
            }
            text.push_str(&format!("seed: {}\n", args.output.seed));
            text
        }
    };
    write_output(args.output.out.as_deref(), &text)?;
    Ok(0)
}

/// Formats an optional value for a plot-data cell; absent values stay blank.
fn cell(value: Option<f64>) -> String {
    value.map_or(String::new(), |v| v.to_string())
}

/// Plot data for one series: history rows carry only the actual value,
/// forecast rows only the projection. With several blocks (one per model)
/// the forecast rows repeat per model; SARIMA rows fill the bounds, KNN
/// rows leave them blank.
fn plot_csv(series: &TimeSeries, blocks: &[ForecastBlock]) -> String {
    let mut text = String::from("period,actual,point,lower,upper\n");
    for (i, value) in series.values().iter().enumerate() {
        text.push_str(&format!("{},{},,,\n", series.period(i), value));
    }
    for block in blocks {
        for (i, period) in block.periods.iter().enumerate() {
            text.push_str(&format!(
                "{},,{},{},{}\n",
                period,
                block.point[i],
                cell(block.lower.as_ref().map(|v| v[i])),
                cell(block.upper.as_ref().map(|v| v[i])),
            ));
        }
    }
    text
}

fn sarima_forecast_block(
    name: &str,
    series: &TimeSeries,
    args: &ForecastArgs,
    options: &sarima::FitOptions,
    periods: Vec<i64>,
) -> Result<ForecastBlock> {
    let fitted = match args.sarima.fixed_order()? {
        Some(order) => sarima::fit_with_options(series, &order, options)?,
        None => {
            sarima::grid_search_with_options(
                series,
                &args.sarima.grid(),
                args.sarima.criterion,
                options,
            )?
            .best
        }
    };
    let fc = sarima::forecast(&fitted, series, args.horizon, args.level)?;
    Ok(ForecastBlock {
        series: name.to_string(),
        model_tag: format!("sarima{}", fitted.order),
        periods,
        point: fc.point,
        lower: Some(fc.lower),
        upper: Some(fc.upper),
        level: Some(fc.level),
    })
}

fn knn_forecast_block(
    name: &str,
    series: &TimeSeries,
    args: &ForecastArgs,
    periods: Vec<i64>,
) -> Result<ForecastBlock> {
    let config = match args.knn.spec()? {
        ModelSpec::Knn { config } => config,
        ModelSpec::KnnCv { k_grid, w_grid } => knn::select_config(series, &k_grid, &w_grid)?.config,
        _ => unreachable!("knn spec yields knn variants"),
    };
    let point = knn::forecast_recursive(series, &config, args.horizon)?;
    Ok(ForecastBlock {
        series: name.to_string(),
        model_tag: format!("knn(k={},w={})", config.k, config.window),
        periods,
        point,
        lower: None,
        upper: None,
        level: None,
    })
}

fn cmd_forecast(args: ForecastArgs) -> Result<i32> {
    if args.horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    let (kept, _) = load_columns(&args.input)?;
    let columns = select_columns(kept, &args.input.columns)?;
    if args.plot_out.is_some() && columns.len() != 1 {
        return Err(Error::InvalidParameter(format!(
            "--plot-out needs exactly one selected column, got {}",
            columns.len()
        )));
    }
    let options = args.sarima.fit_options(args.output.seed);

    // One block per (column, model), grouped by column for plot emission.
    let mut column_blocks: Vec<Vec<ForecastBlock>> = Vec::with_capacity(columns.len());
    for (name, series) in &columns {
        let periods: Vec<i64> = (1..=args.horizon)
            .map(|h| series.last_period() + h as i64 * series.cadence())
            .collect();
        let blocks = match args.model {
            ModelChoice::Sarima => {
                vec![sarima_forecast_block(name, series, &args, &options, periods)?]
            }
            ModelChoice::Knn => vec![knn_forecast_block(name, series, &args, periods)?],
            ModelChoice::Both => vec![
                sarima_forecast_block(name, series, &args, &options, periods.clone())?,
                knn_forecast_block(name, series, &args, periods)?,
            ],
        };
        column_blocks.push(blocks);
    }

    if let Some(plot_path) = &args.plot_out {
        let (_, series) = &columns[0];
        write_output(Some(plot_path), &plot_csv(series, &column_blocks[0]))?;
    }

    let blocks: Vec<ForecastBlock> = column_blocks.iter().flatten().cloned().collect();
    let text = match args.output.format {
        Format::Json => to_json(&ForecastOutput {
            seed: args.output.seed,
            horizon: args.horizon,
            blocks,
        }),
        Format::Csv => {
            // Same layout as the plot file, concatenated per series.
            let mut text = String::new();
            for ((_, series), blocks) in columns.iter().zip(&column_blocks) {
                text.push_str(&plot_csv(series, blocks));
            }
            text
        }
        Format::Table => {
            let mut text = String::new();
            for block in &blocks {
                text.push_str(&format!("{} — {}\n", block.series, block.model_tag));
                text.push_str("period  point  lower  upper\n");
                for (i, period) in block.periods.iter().enumerate() {
                    text.push_str(&format!(
                        "{period}  {:.4}  {}  {}\n",
                        block.point[i],
                        block
                            .lower
                            .as_ref()
                            .map_or_else(|| "--".into(), |v| format!("{:.4}", v[i])),
                        block
                            .upper
                            .as_ref()
                            .map_or_else(|| "--".into(), |v| format!("{:.4}", v[i])),
                    ));
                }
            }
            text.push_str(&format!("seed: {}\n", args.output.seed));
            text
        }
    };
    write_output(args.output.out.as_deref(), &text)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criterion_parses() {
        assert_eq!(parse_criterion("aic").unwrap(), Criterion::Aic);
        assert_eq!(parse_criterion("BIC").unwrap(), Criterion::Bic);
        assert_eq!(
            parse_criterion("holdout-mse").unwrap(),
            Criterion::HoldoutMse
        );
        assert!(parse_criterion("mdl").is_err());
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_from(["enercast", "--help"]), 0);
        assert_eq!(run_from(["enercast", "forecast", "--help"]), 0);
    }

    #[test]
    fn unknown_flag_exits_two() {
        assert_eq!(run_from(["enercast", "ingest", "--nope"]), 2);
    }
}
