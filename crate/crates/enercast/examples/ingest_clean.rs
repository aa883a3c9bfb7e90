//! Parse the bundled CSV and show what cleaning kept and dropped.
//!
//! ```bash
//! cargo run --example ingest_clean
//! ```

use std::path::Path;

use enercast::ingest::{clean, parse_csv_path, CleanOptions, ParseOptions};

fn main() -> Result<(), enercast::Error> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/synthetic_shares.csv"
    );
    let table = parse_csv_path(Path::new(path), &ParseOptions::default())?;
    println!(
        "parsed {} rows x {} columns from {}",
        table.years().len(),
        table.columns().len(),
        table.source()
    );

    let (kept, report) = clean(&table, &CleanOptions::default())?;
    println!(
        "year range: {}..={}",
        report.year_range.0, report.year_range.1
    );
    println!("\nkept columns:");
    for (name, series) in &kept {
        let values = series.values();
        println!(
            "  {name:<26} {} obs, first {:.2}, last {:.2}",
            series.len(),
            values[0],
            series.last_value()
        );
    }
    println!("\ndropped columns:");
    for dropped in &report.dropped_columns {
        println!("  {:<26} {}", dropped.name, dropped.reason);
    }

    println!(
        "\nreport as JSON:\n{}",
        serde_json::to_string_pretty(&report).unwrap()
    );
    Ok(())
}
