//! Select a SARIMA order by AIC and project the renewables share ten years
//! ahead with 95% confidence bands.
//!
//! ```bash
//! cargo run --example sarima_forecast
//! ```

use std::path::Path;

use enercast::ingest::{clean, parse_csv_path, CleanOptions, ParseOptions};
use enercast::sarima::{forecast, grid_search, Criterion, OrderGrid};

fn main() -> Result<(), enercast::Error> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/synthetic_shares.csv"
    );
    let table = parse_csv_path(Path::new(path), &ParseOptions::default())?;
    let (kept, _) = clean(&table, &CleanOptions::default())?;
    let (name, series) = kept
        .into_iter()
        .find(|(n, _)| n == "renewables_equiv_primary")
        .expect("bundled column");

    println!(
        "{name}: {} annual observations, {}..={}",
        series.len(),
        series.start_period(),
        series.last_period()
    );

    let grid = OrderGrid {
        p_max: 2,
        d_max: 2,
        q_max: 2,
        season: 0,
        ..OrderGrid::default()
    };
    let result = grid_search(&series, &grid, Criterion::Aic)?;
    let best = &result.best;
    println!(
        "selected {} by AIC: aic {:.2}, bic {:.2}, sigma2 {:.4}, converged {}",
        best.order, best.aic, best.bic, best.params.sigma2, best.converged
    );
    if !best.params.phi.is_empty() {
        println!("  phi   {:?}", best.params.phi);
    }
    if !best.params.theta.is_empty() {
        println!("  theta {:?}", best.params.theta);
    }

    let fc = forecast(best, &series, 10, 0.95)?;
    println!("\nten-year projection ({}% band):", fc.level * 100.0);
    println!(
        "{:>6}  {:>8}  {:>8}  {:>8}",
        "year", "point", "lower", "upper"
    );
    for (h, point) in fc.point.iter().enumerate() {
        let year = series.last_period() + (h as i64 + 1) * series.cadence();
        println!(
            "{year:>6}  {point:>8.3}  {:>8.3}  {:>8.3}",
            fc.lower[h], fc.upper[h]
        );
    }
    Ok(())
}
