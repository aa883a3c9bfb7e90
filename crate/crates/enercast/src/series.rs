//! Canonical time-series representation plus differencing, integration, and
//! chronological splitting.
//!
//! Both forecasters operate on [`TimeSeries`]: an ordered run of finite
//! values at a fixed period cadence (annual by default). Gaps are a
//! construction error; all missing-value handling lives in [`crate::ingest`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered sequence of finite observations at a fixed cadence.
///
/// Observation `i` belongs to period `start_period + i * cadence`. Periods
/// are integer labels, typically calendar years.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    start_period: i64,
    cadence: i64,
    values: Vec<f64>,
}

impl TimeSeries {
    /// Builds a series, validating that it is non-empty, fully finite, and
    /// has a positive cadence.
    pub fn new(start_period: i64, cadence: i64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSeries("series must not be empty".into()));
        }
        if cadence < 1 {
            return Err(Error::InvalidSeries(format!(
                "cadence must be positive, got {cadence}"
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "non-finite value at index {i}: {}",
                values[i]
            )));
        }
        Ok(Self {
            start_period,
            cadence,
            values,
        })
    }

    /// Annual series starting at `start_year` (cadence 1).
    pub fn annual(start_year: i64, values: Vec<f64>) -> Result<Self> {
        Self::new(start_year, 1, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// A valid series is never empty; this exists for clippy symmetry.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn start_period(&self) -> i64 {
        self.start_period
    }

    pub fn cadence(&self) -> i64 {
        self.cadence
    }

    /// Period label of observation `i`.
    pub fn period(&self, i: usize) -> i64 {
        self.start_period + i as i64 * self.cadence
    }

    pub fn periods(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.values.len()).map(|i| self.period(i))
    }

    pub fn last_period(&self) -> i64 {
        self.period(self.values.len() - 1)
    }

    pub fn last_value(&self) -> f64 {
        *self.values.last().expect("series is non-empty")
    }

    /// Applies first differencing `d` times: each pass replaces `v[t]` with
    /// `v[t] - v[t-1]`. The result is `d` observations shorter and starts
    /// `d` periods later. `d = 0` returns the series unchanged.
    pub fn difference(&self, d: usize) -> Result<TimeSeries> {
        if self.values.len() <= d {
            return Err(Error::InsufficientData {
                needed: d + 1,
                got: self.values.len(),
                context: format!("differencing with d={d}"),
            });
        }
        let mut values = self.values.clone();
        for _ in 0..d {
            values = values.windows(2).map(|w| w[1] - w[0]).collect();
        }
        Ok(TimeSeries {
            start_period: self.start_period + d as i64 * self.cadence,
            cadence: self.cadence,
            values,
        })
    }

    /// Applies lag-`s` differencing `order` times: each pass replaces `v[t]`
    /// with `v[t] - v[t-s]`. The result is `order * s` observations shorter.
    pub fn seasonal_difference(&self, order: usize, s: usize) -> Result<TimeSeries> {
        if s == 0 {
            return Err(Error::InvalidParameter(
                "seasonal period s must be at least 1".into(),
            ));
        }
        if self.values.len() <= order * s {
            return Err(Error::InsufficientData {
                needed: order * s + 1,
                got: self.values.len(),
                context: format!("seasonal differencing with D={order}, s={s}"),
            });
        }
        let mut values = self.values.clone();
        for _ in 0..order {
            values = values
                .iter()
                .skip(s)
                .zip(values.iter())
                .map(|(a, b)| a - b)
                .collect();
        }
        Ok(TimeSeries {
            start_period: self.start_period + (order * s) as i64 * self.cadence,
            cadence: self.cadence,
            values,
        })
    }
}

/// Chronological train/test split ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_ratio: f64,
}

impl SplitSpec {
    pub fn new(train_ratio: f64) -> Result<Self> {
        if !(train_ratio > 0.0 && train_ratio < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "train ratio must lie in (0, 1), got {train_ratio}"
            )));
        }
        Ok(Self { train_ratio })
    }
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self { train_ratio: 0.8 }
    }
}

/// Round-half-up, the split rounding rule: 44.8 -> 45, 2.5 -> 3.
pub(crate) fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// Splits a series into a training prefix and test suffix without shuffling.
///
/// The train side takes `round_half_up(train_ratio * n)` observations; both
/// sides must end up non-empty.
pub fn chronological_split(
    series: &TimeSeries,
    spec: SplitSpec,
) -> Result<(TimeSeries, TimeSeries)> {
    SplitSpec::new(spec.train_ratio)?;
    let n = series.len();
    let n_train = round_half_up(spec.train_ratio * n as f64);
    if n_train == 0 || n_train >= n {
        return Err(Error::InvalidParameter(format!(
            "train ratio {} on {n} observations leaves an empty side ({n_train} train)",
            spec.train_ratio
        )));
    }
    let train = TimeSeries {
        start_period: series.start_period,
        cadence: series.cadence,
        values: series.values[..n_train].to_vec(),
    };
    let test = TimeSeries {
        start_period: series.period(n_train),
        cadence: series.cadence,
        values: series.values[n_train..].to_vec(),
    };
    Ok((train, test))
}

/// Reconstructs original-scale values from forecasts made on the
/// `(d, D, s)`-differenced scale, continuing directly after `history`.
///
/// Exact right-inverse of `seasonal_difference(D, s)` followed by
/// `difference(d)`: integrating the differenced tail of a series against its
/// head reproduces the tail up to floating round-off.
pub fn integrate(
    differenced_forecasts: &[f64],
    history: &TimeSeries,
    d: usize,
    seasonal_d: usize,
    s: usize,
) -> Result<Vec<f64>> {
    if seasonal_d > 0 && s == 0 {
        return Err(Error::InvalidParameter(
            "seasonal period s must be at least 1 when D > 0".into(),
        ));
    }
    let seed = d + seasonal_d * s;
    if history.len() < seed.max(1) {
        return Err(Error::InsufficientData {
            needed: seed.max(1),
            got: history.len(),
            context: format!("integration seed for d={d}, D={seasonal_d}, s={s}"),
        });
    }

    // Rebuild the differencing ladder so each inverse step can read the
    // final values of the stage above it. Forward order is seasonal passes
    // first, then regular; inversion walks back in reverse. Only stages that
    // seed an inverse pass are needed: the fully differenced stage is not.
    let mut stages: Vec<Vec<f64>> = vec![history.values().to_vec()];
    for _ in 0..seasonal_d {
        let prev = stages.last().expect("stage exists");
        stages.push(
            prev.iter()
                .skip(s)
                .zip(prev.iter())
                .map(|(a, b)| a - b)
                .collect(),
        );
    }
    for _ in 1..d {
        let prev = stages.last().expect("stage exists");
        stages.push(prev.windows(2).map(|w| w[1] - w[0]).collect());
    }

    let mut current = differenced_forecasts.to_vec();
    // Undo regular differencing: cumulative sums seeded by the last value of
    // the stage one level up.
    for level in (seasonal_d..seasonal_d + d).rev() {
        let seed_value = *stages[level].last().expect("stage has the seed value");
        let mut acc = seed_value;
        for v in current.iter_mut() {
            acc += *v;
            *v = acc;
        }
    }
    // Undo seasonal differencing: v[t] += reconstructed value s steps back,
    // reading from the parent stage until the forecasts can feed themselves.
    for level in (0..seasonal_d).rev() {
        let parent = &stages[level];
        let mut out = current.clone();
        for i in 0..out.len() {
            out[i] += if i < s {
                parent[parent.len() - s + i]
            } else {
                out[i - s]
            };
        }
        current = out;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn ts(values: &[f64]) -> TimeSeries {
        TimeSeries::annual(2000, values.to_vec()).unwrap()
    }

    #[test]
    fn first_difference() {
        let d = ts(&[1.0, 2.0, 4.0, 7.0]).difference(1).unwrap();
        assert_eq!(d.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(d.start_period(), 2001);
    }

    #[test]
    fn constant_series_differences_to_zero() {
        let d = ts(&[5.0, 5.0, 5.0, 5.0]).difference(1).unwrap();
        assert_eq!(d.values(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn second_difference_matches_two_single_passes() {
        let x = ts(&[1.0, 2.0, 4.0, 7.0, 11.0]);
        // Hand oracle: apply single differencing twice.
        let once = x.difference(1).unwrap();
        let twice = once.difference(1).unwrap();
        assert_eq!(twice.values(), &[1.0, 1.0, 1.0]);
        assert_eq!(x.difference(2).unwrap(), twice);
    }

    #[test]
    fn difference_zero_is_identity() {
        let x = ts(&[3.0, 1.0, 4.0]);
        assert_eq!(x.difference(0).unwrap(), x);
    }

    #[test]
    fn difference_needs_enough_points() {
        let err = ts(&[1.0, 2.0]).difference(2).unwrap_err();
        assert!(matches!(err, Error::InsufficientData { .. }));
    }

    #[test]
    fn seasonal_difference_of_ramp() {
        let d = ts(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
            .seasonal_difference(1, 2)
            .unwrap();
        assert_eq!(d.values(), &[2.0, 2.0, 2.0, 2.0]);
        assert_eq!(d.start_period(), 2002);
    }

    #[test]
    fn seasonal_difference_identity_when_zero_order() {
        let x = ts(&[1.0, 5.0, 2.0, 8.0]);
        assert_eq!(x.seasonal_difference(0, 4).unwrap(), x);
    }

    #[test]
    fn exact_periodic_signal_vanishes() {
        let d = ts(&[1.0, 0.0, 1.0, 0.0, 1.0, 0.0])
            .seasonal_difference(1, 2)
            .unwrap();
        assert_eq!(d.values(), &[0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn repeated_seasonal_passes_shrink_by_order_times_s() {
        let x = ts(&(0..10).map(|i| (i * i) as f64).collect::<Vec<_>>());
        assert_eq!(x.seasonal_difference(2, 2).unwrap().len(), 6);
        assert_eq!(x.seasonal_difference(3, 3).unwrap().len(), 1);
    }

    #[test]
    fn series_is_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<TimeSeries>();
        assert_send_sync::<SplitSpec>();
    }

    #[test]
    fn seasonal_difference_needs_enough_points() {
        let err = ts(&[1.0, 2.0, 3.0, 4.0])
            .seasonal_difference(1, 4)
            .unwrap_err();
        assert!(matches!(err, Error::InsufficientData { .. }));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(TimeSeries::annual(2000, vec![]).is_err());
        assert!(TimeSeries::annual(2000, vec![1.0, f64::NAN]).is_err());
        assert!(TimeSeries::annual(2000, vec![f64::INFINITY]).is_err());
        assert!(TimeSeries::new(2000, 0, vec![1.0]).is_err());
    }

    #[test]
    fn integrate_zero_differences_continues_constant() {
        let history = ts(&[4.0, 4.0, 4.0, 4.0]);
        let out = integrate(&[0.0, 0.0, 0.0], &history, 1, 0, 1).unwrap();
        assert_eq!(out, vec![4.0, 4.0, 4.0]);
    }

    #[test]
    fn integrate_inverts_difference() {
        let x = ts(&[1.0, 2.0, 4.0, 7.0]);
        let head = ts(&x.values()[..1]);
        let diffed = x.difference(1).unwrap();
        let out = integrate(diffed.values(), &head, 1, 0, 1).unwrap();
        assert_eq!(out, &x.values()[1..]);
    }

    #[test]
    fn integrate_round_trips_seasonal_and_regular() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let values: Vec<f64> = (0..12).map(|_| rng.random_range(-5.0..5.0)).collect();
        let x = ts(&values);
        let diffed = x.seasonal_difference(1, 2).unwrap().difference(1).unwrap();
        // Keep the first 5 observations as history; the differenced tail has
        // the remaining 7 values (12 - d - D*s = 9 total, last 7 align with
        // x[5..]).
        let head = ts(&values[..5]);
        let tail_diffs = &diffed.values()[diffed.len() - 7..];
        let out = integrate(tail_diffs, &head, 1, 1, 2).unwrap();
        for (got, want) in out.iter().zip(&values[5..]) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn integrate_requires_history() {
        let history = ts(&[1.0]);
        assert!(integrate(&[0.0], &history, 1, 1, 4).is_err());
    }

    #[test]
    fn split_matches_annual_example() {
        let values: Vec<f64> = (0..56).map(|i| i as f64).collect();
        let series = TimeSeries::annual(1968, values).unwrap();
        let (train, test) = chronological_split(&series, SplitSpec { train_ratio: 0.8 }).unwrap();
        assert_eq!(train.len(), 45);
        assert_eq!(test.len(), 11);
        assert_eq!(train.last_period(), 2012);
        assert_eq!(test.start_period(), 2013);
        assert_eq!(test.last_period(), 2023);
    }

    #[test]
    fn split_exact_ratio() {
        let series = ts(&(0..10).map(|i| i as f64).collect::<Vec<_>>());
        let (train, test) = chronological_split(&series, SplitSpec { train_ratio: 0.8 }).unwrap();
        assert_eq!((train.len(), test.len()), (8, 2));
    }

    #[test]
    fn split_rounds_half_up() {
        let series = ts(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        let (train, test) = chronological_split(&series, SplitSpec { train_ratio: 0.5 }).unwrap();
        assert_eq!((train.len(), test.len()), (3, 2));
        let mut rejoined = train.values().to_vec();
        rejoined.extend_from_slice(test.values());
        assert_eq!(rejoined, series.values());
    }

    #[test]
    fn split_rejects_empty_side() {
        let series = ts(&[1.0, 2.0]);
        assert!(chronological_split(&series, SplitSpec { train_ratio: 0.1 }).is_err());
        let ten = ts(&(0..10).map(|i| i as f64).collect::<Vec<_>>());
        assert!(chronological_split(&ten, SplitSpec { train_ratio: 0.99 }).is_err());
        assert!(chronological_split(&ten, SplitSpec { train_ratio: 1.2 }).is_err());
    }

    proptest! {
        #[test]
        fn difference_length_identity(values in proptest::collection::vec(-100.0..100.0f64, 4..40), d in 0usize..3) {
            prop_assume!(values.len() > d);
            let x = ts(&values);
            let out = x.difference(d).unwrap();
            prop_assert_eq!(out.len(), values.len() - d);
        }

        #[test]
        fn seasonal_length_identity(values in proptest::collection::vec(-100.0..100.0f64, 13..40), s in 1usize..13) {
            let x = ts(&values);
            let out = x.seasonal_difference(1, s).unwrap();
            prop_assert_eq!(out.len(), values.len() - s);
        }

        #[test]
        fn first_difference_is_level_invariant(values in proptest::collection::vec(-100.0..100.0f64, 2..30), c in -1000.0..1000.0f64) {
            let shifted: Vec<f64> = values.iter().map(|v| v + c).collect();
            let a = ts(&values).difference(1).unwrap();
            let b = ts(&shifted).difference(1).unwrap();
            for (x, y) in a.values().iter().zip(b.values()) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }

        #[test]
        fn split_partitions_exactly(values in proptest::collection::vec(-10.0..10.0f64, 3..50), ratio in 0.2..0.8f64) {
            let series = ts(&values);
            if let Ok((train, test)) = chronological_split(&series, SplitSpec { train_ratio: ratio }) {
                let mut rejoined = train.values().to_vec();
                rejoined.extend_from_slice(test.values());
                prop_assert_eq!(rejoined, values);
                prop_assert_eq!(test.start_period(), train.last_period() + 1);
            }
        }

        #[test]
        fn round_trip_reconstructs_suffix(
            seed in 0u64..500,
            d in 0usize..3,
            big_d in 0usize..2,
            s_idx in 0usize..4,
        ) {
            let s = [1usize, 2, 4, 12][s_idx];
            let n = 3 * (d + big_d * s) + 6;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let values: Vec<f64> = (0..n).map(|_| rng.random_range(-50.0..50.0)).collect();
            let x = ts(&values);
            let diffed = x.seasonal_difference(big_d, s).unwrap().difference(d).unwrap();
            let keep = d + big_d * s + 2;
            let head = ts(&values[..keep]);
            let tail = values.len() - keep;
            let tail_diffs = &diffed.values()[diffed.len() - tail..];
            let out = integrate(tail_diffs, &head, d, big_d, s).unwrap();
            for (got, want) in out.iter().zip(&values[keep..]) {
                prop_assert!((got - want).abs() < 1e-9, "{} vs {}", got, want);
            }
        }
    }
}
