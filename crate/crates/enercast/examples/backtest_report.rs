//! Backtest both models on every kept column with an 80/20 chronological
//! split and print the error-metrics table.
//!
//! ```bash
//! cargo run --example backtest_report
//! ```

use std::path::Path;

use enercast::ingest::{clean, parse_csv_path, CleanOptions, ParseOptions};
use enercast::metrics::{backtest, render_table, ModelSpec};
use enercast::sarima::{Criterion, OrderGrid};
use enercast::series::SplitSpec;

fn main() -> Result<(), enercast::Error> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/synthetic_shares.csv"
    );
    let table = parse_csv_path(Path::new(path), &ParseOptions::default())?;
    let (kept, _) = clean(&table, &CleanOptions::default())?;

    let split = SplitSpec::default();
    let sarima_spec = ModelSpec::SarimaGrid {
        grid: OrderGrid {
            p_max: 2,
            d_max: 2,
            q_max: 2,
            season: 0,
            ..OrderGrid::default()
        },
        criterion: Criterion::Aic,
    };
    let knn_spec = ModelSpec::KnnCv {
        k_grid: vec![1, 2, 3, 5, 7],
        w_grid: vec![1, 2, 3],
    };

    let mut reports = Vec::new();
    for (name, series) in &kept {
        for spec in [&sarima_spec, &knn_spec] {
            match backtest(series, spec, split) {
                Ok(mut report) => {
                    report.parameter_tag = name.clone();
                    reports.push(report);
                }
                Err(err) => eprintln!("{name}: {err}"),
            }
        }
    }

    println!(
        "backtest on the last {:.0}% of each series (training through the split year)\n",
        (1.0 - split.train_ratio) * 100.0
    );
    print!("{}", render_table(&reports));
    Ok(())
}
