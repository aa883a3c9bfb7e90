//! Cross-validate the KNN neighbor count and window, then forecast
//! recursively. The projection plateaus inside the range of observed
//! targets, which is the expected long-horizon behavior of neighbor
//! averaging.
//!
//! ```bash
//! cargo run --example knn_forecast
//! ```

use std::path::Path;

use enercast::ingest::{clean, parse_csv_path, CleanOptions, ParseOptions};
use enercast::knn::{forecast_recursive, select_config};

fn main() -> Result<(), enercast::Error> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/synthetic_shares.csv"
    );
    let table = parse_csv_path(Path::new(path), &ParseOptions::default())?;
    let (kept, _) = clean(&table, &CleanOptions::default())?;

    for target in ["solar_electricity", "wind_electricity"] {
        let (name, series) = kept
            .iter()
            .find(|(n, _)| n == target)
            .expect("bundled column");
        let selection = select_config(series, &[1, 2, 3, 5, 7], &[1, 2, 3, 5])?;
        println!(
            "{name}: cross-validation picked k={}, window={}",
            selection.config.k, selection.config.window
        );
        println!("  top candidates (mean one-step-ahead squared error):");
        for candidate in selection.leaderboard.iter().take(4) {
            if let Some(err) = candidate.mean_squared_error {
                println!(
                    "    k={:<2} w={:<2} cv-mse {err:.5} over {} folds",
                    candidate.k, candidate.window, candidate.folds
                );
            }
        }

        let horizon = 8;
        let projection = forecast_recursive(series, &selection.config, horizon)?;
        print!(
            "  {}..{} projection:",
            series.last_period() + 1,
            series.last_period() + horizon as i64
        );
        for value in &projection {
            print!(" {value:.3}");
        }
        println!("\n");
    }
    Ok(())
}
