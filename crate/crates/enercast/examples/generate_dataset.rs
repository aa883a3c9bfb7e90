//! Regenerates the bundled synthetic dataset at `data/synthetic_shares.csv`.
//!
//! Seven energy-share columns over 1968-2023, built from seeded generators
//! so the file is bit-reproducible: logistic adoption curves for renewables,
//! wind, and solar, a stable autoregressive hydro share, plus two
//! deliberately unusable columns (scattered gaps, too few observations) that
//! exercise the cleaning stage.
//!
//! ```bash
//! cargo run --example generate_dataset
//! ```

use std::fmt::Write as _;

use enercast::sarima::{SarimaOrder, SarimaParams};
use enercast::sim;

const START_YEAR: i64 = 1968;
const YEARS: usize = 56;

fn main() {
    let renewables_primary = positive(sim::logistic_series(
        YEARS, 1.8, 23.0, 30.0, 0.22, 0.25, 101,
    ));
    let renewables_electricity = positive(sim::logistic_series(
        YEARS, 8.0, 31.0, 33.0, 0.19, 0.35, 102,
    ));

    // Hydro hovers around 17.5% with slow mean-reverting wander.
    let hydro_order = SarimaOrder::arima(1, 0, 0);
    let hydro_params = SarimaParams {
        phi: vec![0.8],
        constant: 17.5 * (1.0 - 0.8),
        sigma2: 0.09,
        ..SarimaParams::zeros(&hydro_order)
    };
    let hydro_electricity = positive(sim::simulate_sarima(
        &hydro_order,
        &hydro_params,
        YEARS,
        103,
    ));

    let wind_electricity = positive(sim::logistic_series(
        YEARS, 0.05, 9.5, 40.0, 0.28, 0.12, 104,
    ));
    let solar_electricity = positive(sim::logistic_series(
        YEARS, 0.02, 7.5, 46.0, 0.30, 0.08, 105,
    ));

    // Tidal has scattered gaps; geothermal was only measured six times.
    let tidal_electricity = positive(sim::logistic_series(YEARS, 0.01, 0.9, 44.0, 0.2, 0.01, 106));
    let tidal_gaps = [3usize, 17, 18, 29, 41, 50];
    let geothermal_years = [1995usize, 1996, 1997, 1998, 1999, 2000];

    let mut csv = String::from(
        "year,renewables_equiv_primary,renewables_electricity,hydro_electricity,wind_electricity,solar_electricity,tidal_electricity,geothermal_electricity\n",
    );
    for i in 0..YEARS {
        let year = START_YEAR + i as i64;
        let tidal = if tidal_gaps.contains(&i) {
            "..".to_string()
        } else {
            format!("{:.4}", tidal_electricity[i])
        };
        let geothermal = if geothermal_years.contains(&(year as usize)) {
            format!("{:.4}", 0.15 + 0.01 * (year - 1995) as f64)
        } else {
            "..".to_string()
        };
        writeln!(
            csv,
            "{year},{:.4},{:.4},{:.4},{:.4},{:.4},{tidal},{geothermal}",
            renewables_primary[i],
            renewables_electricity[i],
            hydro_electricity[i],
            wind_electricity[i],
            solar_electricity[i],
        )
        .expect("writing to a string cannot fail");
    }

    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/synthetic_shares.csv"
    );
    std::fs::write(path, &csv).expect("dataset file is writable");
    println!("wrote {YEARS} years x 7 columns to {path}");
}

/// Shares cannot dip below a trace amount.
fn positive(values: Vec<f64>) -> Vec<f64> {
    values.into_iter().map(|v| v.max(0.01)).collect()
}
