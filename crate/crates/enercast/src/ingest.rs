//! CSV ingestion: parse World-Bank/IEA-style year-by-parameter tables, drop
//! unusable columns, and hand clean [`TimeSeries`] to the models.
//!
//! Cleaning drops rather than imputes: a column survives only if it has no
//! missing cell across the table's span and at least a minimum number of
//! observations.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Sentinels treated as missing cells, compared case-insensitively after
/// trimming.
pub const DEFAULT_MISSING_TOKENS: [&str; 5] = ["", "NA", "N/A", "..", "-"];

/// Parsing knobs.
#[derive(Debug, Clone)]
pub struct ParseOptions {
    pub missing_tokens: Vec<String>,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self {
            missing_tokens: DEFAULT_MISSING_TOKENS
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

/// A parsed table: strictly increasing years down the rows, one data column
/// per parameter, cells either a value or missing.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    period_label: String,
    columns: Vec<String>,
    years: Vec<i64>,
    /// Row-major cells, `rows[r][c]` for year `years[r]` and column
    /// `columns[c]`.
    rows: Vec<Vec<Option<f64>>>,
    source: String,
}

impl RawTable {
    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn years(&self) -> &[i64] {
        &self.years
    }

    pub fn rows(&self) -> &[Vec<Option<f64>>] {
        &self.rows
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Rebuilds a table from named columns over a shared year axis. Used by
    /// tests and by dataset generators.
    pub fn from_columns(
        period_label: &str,
        years: Vec<i64>,
        columns: Vec<(String, Vec<Option<f64>>)>,
        source: &str,
    ) -> Result<Self> {
        for (name, cells) in &columns {
            if cells.len() != years.len() {
                return Err(Error::InvalidParameter(format!(
                    "column {name} has {} cells for {} years",
                    cells.len(),
                    years.len()
                )));
            }
        }
        if years.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "years must be strictly increasing".into(),
            ));
        }
        let names: Vec<String> = columns.iter().map(|(n, _)| n.clone()).collect();
        let rows = (0..years.len())
            .map(|r| columns.iter().map(|(_, cells)| cells[r]).collect())
            .collect();
        Ok(Self {
            period_label: period_label.to_string(),
            columns: names,
            years,
            rows,
            source: source.to_string(),
        })
    }
}

/// Parses a CSV file from disk.
pub fn parse_csv_path(path: &Path, options: &ParseOptions) -> Result<RawTable> {
    let file = std::fs::File::open(path).map_err(|source| Error::File {
        path: path.display().to_string(),
        source,
    })?;
    parse_csv(file, &path.display().to_string(), options)
}

/// Parses a CSV table from any reader.
///
/// The first column holds the period (an integer year, strictly increasing),
/// remaining columns are numeric or a missing-value sentinel. Fields may be
/// quoted. Structural problems report their 1-based row (header = row 1) and
/// column name.
pub fn parse_csv<R: Read>(reader: R, source: &str, options: &ParseOptions) -> Result<RawTable> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(reader);

    let headers = csv_reader
        .headers()
        .map_err(|e| Error::Parse {
            row: 1,
            column: "<header>".into(),
            message: e.to_string(),
        })?
        .clone();
    if headers.len() < 2 {
        return Err(Error::Parse {
            row: 1,
            column: "<header>".into(),
            message: "need a period column plus at least one data column".into(),
        });
    }
    let period_label = headers[0].to_string();
    let columns: Vec<String> = headers.iter().skip(1).map(|h| h.to_string()).collect();

    let is_missing = |cell: &str| -> bool {
        options
            .missing_tokens
            .iter()
            .any(|token| token.eq_ignore_ascii_case(cell))
    };

    let mut years: Vec<i64> = Vec::new();
    let mut rows: Vec<Vec<Option<f64>>> = Vec::new();
    for (i, record) in csv_reader.records().enumerate() {
        let row_number = i + 2;
        let record = record.map_err(|e| Error::Parse {
            row: row_number,
            column: "<row>".into(),
            message: e.to_string(),
        })?;
        let year_cell = record.get(0).unwrap_or("");
        let year: i64 = year_cell.parse().map_err(|_| Error::Parse {
            row: row_number,
            column: period_label.clone(),
            message: format!("period {year_cell:?} is not an integer"),
        })?;
        if let Some(&last) = years.last() {
            if year == last {
                return Err(Error::Parse {
                    row: row_number,
                    column: period_label.clone(),
                    message: format!("duplicate period {year}"),
                });
            }
            if year < last {
                return Err(Error::Parse {
                    row: row_number,
                    column: period_label.clone(),
                    message: format!("period {year} is out of order after {last}"),
                });
            }
        }
        years.push(year);

        let mut cells = Vec::with_capacity(columns.len());
        for (c, name) in columns.iter().enumerate() {
            let cell = record.get(c + 1).unwrap_or("");
            if is_missing(cell) {
                cells.push(None);
            } else {
                let value: f64 = cell.parse().map_err(|_| Error::Parse {
                    row: row_number,
                    column: name.clone(),
                    message: format!("cell {cell:?} is not numeric"),
                })?;
                if !value.is_finite() {
                    return Err(Error::Parse {
                        row: row_number,
                        column: name.clone(),
                        message: format!("cell {cell:?} is not finite"),
                    });
                }
                cells.push(Some(value));
            }
        }
        rows.push(cells);
    }

    if years.is_empty() {
        return Err(Error::Parse {
            row: 2,
            column: period_label,
            message: "table has no data rows".into(),
        });
    }

    Ok(RawTable {
        period_label,
        columns,
        years,
        rows,
        source: source.to_string(),
    })
}

/// Cleaning knobs.
#[derive(Debug, Clone)]
pub struct CleanOptions {
    /// Columns with fewer observations than this are dropped.
    pub min_observations: usize,
}

impl Default for CleanOptions {
    fn default() -> Self {
        Self {
            min_observations: 10,
        }
    }
}

/// A dropped column and why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DroppedColumn {
    pub name: String,
    pub reason: String,
}

/// What cleaning kept and dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleanReport {
    pub kept_columns: Vec<String>,
    pub dropped_columns: Vec<DroppedColumn>,
    pub year_range: (i64, i64),
}

/// Drops every column with a missing cell inside the table's year span or
/// with fewer than `min_observations` rows, and converts the survivors into
/// [`TimeSeries`] over the full span.
///
/// The year axis must advance by a uniform stride, which becomes the series
/// cadence. Errors if no column survives.
pub fn clean(
    table: &RawTable,
    options: &CleanOptions,
) -> Result<(Vec<(String, TimeSeries)>, CleanReport)> {
    let years = &table.years;
    let stride = if years.len() > 1 {
        years[1] - years[0]
    } else {
        1
    };
    for (i, w) in years.windows(2).enumerate() {
        if w[1] - w[0] != stride {
            return Err(Error::Parse {
                row: i + 3,
                column: table.period_label.clone(),
                message: format!(
                    "period gap: {} follows {} but the table advances by {stride}",
                    w[1], w[0]
                ),
            });
        }
    }

    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (c, name) in table.columns.iter().enumerate() {
        let cells: Vec<Option<f64>> = table.rows.iter().map(|row| row[c]).collect();
        let observed = cells.iter().filter(|v| v.is_some()).count();
        // A sparse column is "too short" before it is "missing values", so
        // the report distinguishes never-really-measured parameters from
        // ones with the odd gap.
        if observed < options.min_observations {
            dropped.push(DroppedColumn {
                name: name.clone(),
                reason: format!(
                    "too short: {observed} observations, minimum {}",
                    options.min_observations
                ),
            });
            continue;
        }
        if observed < cells.len() {
            dropped.push(DroppedColumn {
                name: name.clone(),
                reason: "missing values".into(),
            });
            continue;
        }
        let values: Vec<f64> = cells
            .into_iter()
            .map(|v| v.expect("checked above"))
            .collect();
        let series = TimeSeries::new(years[0], stride, values)?;
        kept.push((name.clone(), series));
    }

    if kept.is_empty() {
        return Err(Error::EmptyDataset(table.columns.len()));
    }

    let report = CleanReport {
        kept_columns: kept.iter().map(|(n, _)| n.clone()).collect(),
        dropped_columns: dropped,
        year_range: (years[0], *years.last().expect("non-empty years")),
    };
    Ok((kept, report))
}
