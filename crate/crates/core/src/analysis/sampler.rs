//! Seeded Monte Carlo detection events.
//!
//! Each event consumes two uniforms from a [`SplitMix64`] stream seeded with
//! the plan's seed. In `marker_first` order the first uniform picks the
//! marker outcome from its marginal and the second picks the system outcome
//! from the conditional given that marker outcome; `system_first` reverses
//! the roles. Outcomes are drawn by inverse CDF: the smallest index `i` with
//! `u < F(i)`, where `F` is the cumulative sum of the normalized weights.

use std::io::{self, Write};
use std::sync::Arc;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::analysis::{joint_distribution, JointTable, MeasurementOrder};
use crate::error::{EraserError, Result};
use crate::marker::MarkerBasis;
use crate::rng::SplitMix64;
use crate::state::PureState;

pub const EVENT_LOG_HEADER: &str = "scenario_id,event_index,system_outcome,marker_outcome,order,seed";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingPlan {
    pub scenario_id: String,
    pub order: MeasurementOrder,
    pub count: usize,
    pub seed: u64,
    /// Added to the 0-based system index when recording, e.g. 1 for
    /// detectors numbered from 1.
    pub system_base: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventRecord {
    pub scenario_id: Arc<str>,
    pub event_index: usize,
    pub system_outcome: usize,
    /// Index into the marker basis (0 = first element).
    pub marker_outcome: usize,
    pub order: MeasurementOrder,
    pub seed: u64,
}

impl EventRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.scenario_id, self.event_index, self.system_outcome, self.marker_outcome, self.order, self.seed
        )
    }
}

/// Cumulative distribution of a discrete weight vector.
#[derive(Debug, Clone)]
struct Cdf {
    cumulative: Vec<f64>,
    last_positive: usize,
}

impl Cdf {
    fn new(weights: &[f64]) -> Option<Self> {
        let total: f64 = weights.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return None;
        }
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        let last_positive = weights.iter().rposition(|w| *w > 0.0)?;
        Some(Self {
            cumulative,
            last_positive,
        })
    }

    fn draw(&self, u: f64) -> usize {
        let i = self.cumulative.partition_point(|&c| c <= u);
        i.min(self.last_positive)
    }
}

/// Iterator over sampled events.
#[derive(Debug, Clone)]
pub struct EventStream {
    scenario_id: Arc<str>,
    order: MeasurementOrder,
    seed: u64,
    system_base: usize,
    rng: SplitMix64,
    first: Cdf,
    second: Vec<Option<Cdf>>,
    next_index: usize,
    count: usize,
}

impl Iterator for EventStream {
    type Item = EventRecord;

    fn next(&mut self) -> Option<EventRecord> {
        if self.next_index >= self.count {
            return None;
        }
        let u1 = self.rng.next_f64();
        let u2 = self.rng.next_f64();
        let a = self.first.draw(u1);
        let b = self.second[a]
            .as_ref()
            .expect("first draw only lands on outcomes with positive weight")
            .draw(u2);
        let (system, marker) = match self.order {
            MeasurementOrder::MarkerFirst => (b, a),
            MeasurementOrder::SystemFirst => (a, b),
        };
        let record = EventRecord {
            scenario_id: Arc::clone(&self.scenario_id),
            event_index: self.next_index,
            system_outcome: system + self.system_base,
            marker_outcome: marker,
            order: self.order,
            seed: self.seed,
        };
        self.next_index += 1;
        Some(record)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.count - self.next_index;
        (left, Some(left))
    }
}

impl ExactSizeIterator for EventStream {}

/// Draws `plan.count` i.i.d. detection events from the joint distribution of
/// `state` in `basis`.
pub fn sample_events(state: &PureState, basis: &MarkerBasis, plan: &SamplingPlan) -> Result<EventStream> {
    if plan.count == 0 {
        return Err(EraserError::InvalidCount(0));
    }
    let table = joint_distribution(state, basis, plan.order)?;
    let (first, second) = match plan.order {
        MeasurementOrder::MarkerFirst => {
            let first = Cdf::new(&table.col_marginals());
            let second = (0..table.cols())
                .map(|c| {
                    let column: Vec<f64> = (0..table.rows()).map(|r| table.get(r, c)).collect();
                    Cdf::new(&column)
                })
                .collect();
            (first, second)
        }
        MeasurementOrder::SystemFirst => {
            let first = Cdf::new(&table.row_marginals());
            let second = (0..table.rows()).map(|r| Cdf::new(table.row(r))).collect();
            (first, second)
        }
    };
    let first = first.ok_or(EraserError::ZeroNorm)?;
    Ok(EventStream {
        scenario_id: Arc::from(plan.scenario_id.as_str()),
        order: plan.order,
        seed: plan.seed,
        system_base: plan.system_base,
        rng: SplitMix64::new(plan.seed),
        first,
        second,
        next_index: 0,
        count: plan.count,
    })
}

/// Writes the CSV event log, header first.
pub fn write_event_log<W: Write, I: IntoIterator<Item = EventRecord>>(mut out: W, records: I) -> io::Result<()> {
    writeln!(out, "{EVENT_LOG_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_line())?;
    }
    Ok(())
}

/// Counts per table cell (row-major), with `system_base` removed.
pub fn empirical_counts<'a, I>(records: I, rows: usize, cols: usize, system_base: usize) -> Vec<u64>
where
    I: IntoIterator<Item = &'a EventRecord>,
{
    let mut counts = vec![0u64; rows * cols];
    for r in records {
        counts[(r.system_outcome - system_base) * cols + r.marker_outcome] += 1;
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
}

impl ChiSquare {
    /// Whether the statistic is below the `level` quantile.
    pub fn passes(&self, level: f64) -> bool {
        if self.dof == 0 {
            return self.statistic == 0.0;
        }
        let dist = ChiSquared::new(self.dof as f64).expect("positive degrees of freedom");
        self.statistic < dist.inverse_cdf(level)
    }
}

/// Cells whose expected count falls below this are pooled into one cell.
pub const MIN_EXPECTED_COUNT: f64 = 5.0;

/// Pearson statistic of `counts` against `exact`.
///
/// Cells with zero expected probability are excluded from the degrees of
/// freedom; any count in one makes the statistic infinite. Cells expecting
/// fewer than [`MIN_EXPECTED_COUNT`] events are merged into a single pooled
/// cell.
pub fn chi_square(exact: &JointTable, counts: &[u64]) -> Result<ChiSquare> {
    if counts.len() != exact.cells().len() {
        return Err(EraserError::DimensionMismatch(format!(
            "{} counts for {} cells",
            counts.len(),
            exact.cells().len()
        )));
    }
    let total = counts.iter().sum::<u64>() as f64;
    let mut statistic = 0.0;
    let mut cells = 0usize;
    let (mut pooled_expected, mut pooled_observed) = (0.0, 0.0);
    for (p, &k) in exact.cells().iter().zip(counts) {
        if *p < 1e-15 {
            if k > 0 {
                statistic = f64::INFINITY;
            }
            continue;
        }
        let expected = p * total;
        if expected < MIN_EXPECTED_COUNT {
            pooled_expected += expected;
            pooled_observed += k as f64;
            continue;
        }
        cells += 1;
        statistic += (k as f64 - expected).powi(2) / expected;
    }
    if pooled_expected > 0.0 {
        cells += 1;
        statistic += (pooled_observed - pooled_expected).powi(2) / pooled_expected;
    }
    Ok(ChiSquare {
        statistic,
        dof: cells.saturating_sub(1),
    })
}
