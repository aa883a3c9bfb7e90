//! Compare AIC and BIC order rankings on the same series and show the full
//! leaderboard, including combinations that were skipped.
//!
//! ```bash
//! cargo run --example model_selection
//! ```

use std::path::Path;

use enercast::ingest::{clean, parse_csv_path, CleanOptions, ParseOptions};
use enercast::sarima::{grid_search, Criterion, EntryStatus, GridSearchResult, OrderGrid};

fn show(result: &GridSearchResult) {
    println!(
        "criterion {} -> best {}",
        result.criterion, result.best.order
    );
    println!(
        "{:<22} {:>2}  {:>10}  {:>10}  {:>10}",
        "order", "k", "value", "aic", "bic"
    );
    for entry in &result.leaderboard {
        match &entry.status {
            EntryStatus::Fitted {
                criterion_value,
                aic,
                bic,
                ..
            } => println!(
                "{:<22} {:>2}  {criterion_value:>10.3}  {aic:>10.3}  {bic:>10.3}",
                entry.order.to_string(),
                entry.k
            ),
            EntryStatus::Skipped { reason } => {
                println!(
                    "{:<22} {:>2}  skipped: {reason}",
                    entry.order.to_string(),
                    entry.k
                )
            }
            EntryStatus::Failed { reason } => {
                println!(
                    "{:<22} {:>2}  failed: {reason}",
                    entry.order.to_string(),
                    entry.k
                )
            }
        }
    }
    println!();
}

fn main() -> Result<(), enercast::Error> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/synthetic_shares.csv"
    );
    let table = parse_csv_path(Path::new(path), &ParseOptions::default())?;
    let (kept, _) = clean(&table, &CleanOptions::default())?;
    let (name, series) = kept
        .into_iter()
        .find(|(n, _)| n == "hydro_electricity")
        .expect("bundled column");

    println!(
        "order selection on {name} ({} observations)\n",
        series.len()
    );
    let grid = OrderGrid {
        p_max: 1,
        d_max: 1,
        q_max: 1,
        season: 0,
        ..OrderGrid::default()
    };
    show(&grid_search(&series, &grid, Criterion::Aic)?);
    show(&grid_search(&series, &grid, Criterion::Bic)?);
    show(&grid_search(&series, &grid, Criterion::HoldoutMse)?);
    Ok(())
}
