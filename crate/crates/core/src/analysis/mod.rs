//! Joint detection tables and the measurement-ordering check.
//!
//! A joint table `P(s, b)` gives the probability of system outcome `s`
//! together with marker outcome `b` in some marker basis. It can be built
//! in either order: project the marker first and then read the system, or
//! read the system first and then project the conditional marker state. For
//! a pure joint state both routes yield the same table.

pub mod epr;
pub mod sampler;

use std::fmt;

use crate::error::{EraserError, Result};
use crate::marker::MarkerBasis;
use crate::state::{project_marker, project_system, PureState};

pub use epr::{epr_correlation_table, epr_state, epr_state_in, SpinAxis};
pub use sampler::{chi_square, sample_events, write_event_log, EventRecord, EventStream, SamplingPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasurementOrder {
    MarkerFirst,
    SystemFirst,
}

impl MeasurementOrder {
    pub fn tag(self) -> &'static str {
        match self {
            MeasurementOrder::MarkerFirst => "marker_first",
            MeasurementOrder::SystemFirst => "system_first",
        }
    }
}

impl fmt::Display for MeasurementOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for MeasurementOrder {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "marker_first" | "marker-first" => Ok(MeasurementOrder::MarkerFirst),
            "system_first" | "system-first" => Ok(MeasurementOrder::SystemFirst),
            other => Err(format!("unknown measurement order `{other}`")),
        }
    }
}

/// Row-major table of joint probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    probabilities: Vec<f64>,
}

impl JointTable {
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != row_labels.len() * col_labels.len() {
            return Err(EraserError::DimensionMismatch(format!(
                "{} cells for a {}x{} table",
                probabilities.len(),
                row_labels.len(),
                col_labels.len()
            )));
        }
        Ok(Self {
            row_labels,
            col_labels,
            probabilities,
        })
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.probabilities[row * self.cols() + col]
    }

    pub fn cells(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let c = self.cols();
        &self.probabilities[row * c..(row + 1) * c]
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn row_marginals(&self) -> Vec<f64> {
        (0..self.rows()).map(|r| self.row(r).iter().sum()).collect()
    }

    pub fn col_marginals(&self) -> Vec<f64> {
        (0..self.cols())
            .map(|c| (0..self.rows()).map(|r| self.get(r, c)).sum())
            .collect()
    }

    pub fn with_row_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rows() {
            return Err(EraserError::DimensionMismatch(format!(
                "{} labels for {} rows",
                labels.len(),
                self.rows()
            )));
        }
        self.row_labels = labels;
        Ok(self)
    }

    /// Max entrywise `|a − b|`; tables of different shapes differ by infinity.
    pub fn max_abs_diff(&self, other: &JointTable) -> f64 {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return f64::INFINITY;
        }
        self.probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Mutual information between row and column outcomes, in bits, with
    /// `0·log 0 = 0`.
    pub fn mutual_information(&self) -> f64 {
        let rm = self.row_marginals();
        let cm = self.col_marginals();
        let mut mi = 0.0;
        for (r, pr) in rm.iter().enumerate() {
            for (c, pc) in cm.iter().enumerate() {
                let p = self.get(r, c);
                if p > 0.0 {
                    mi += p * (p / (pr * pc)).log2();
                }
            }
        }
        mi
    }
}

fn default_row_labels(n: usize) -> Vec<String> {
    (0..n).map(|s| s.to_string()).collect()
}

/// Joint table of system outcome × marker outcome in `basis`, computed in
/// the given order. Rows are labelled with 0-based system indices.
pub fn joint_distribution(state: &PureState, basis: &MarkerBasis, order: MeasurementOrder) -> Result<JointTable> {
    if !state.has_marker() {
        return Err(EraserError::NoMarker);
    }
    let rows = state.system_dim();
    let mut cells = vec![0.0; rows * 2];
    match order {
        MeasurementOrder::MarkerFirst => {
            for (b, marker) in basis.states().iter().enumerate() {
                let (residual, p) = match project_marker(state, &marker.vector()) {
                    Ok(v) => v,
                    Err(EraserError::ZeroProbability(_)) => continue,
                    Err(e) => return Err(e),
                };
                for (s, q) in residual.system_probabilities().into_iter().enumerate() {
                    cells[s * 2 + b] = p * q;
                }
            }
        }
        MeasurementOrder::SystemFirst => {
            for s in 0..rows {
                let (conditional, p) = match project_system(state, s) {
                    Ok(v) => v,
                    Err(EraserError::ZeroProbability(_)) => continue,
                    Err(e) => return Err(e),
                };
                for (b, marker) in basis.states().iter().enumerate() {
                    let v = marker.vector();
                    let overlap = v[0].conj() * conditional[0] + v[1].conj() * conditional[1];
                    cells[s * 2 + b] = p * overlap.norm_sqr();
                }
            }
        }
    }
    let cols = basis.labels().iter().map(|l| l.to_string()).collect();
    JointTable::new(default_row_labels(rows), cols, cells)
}

/// Max entrywise difference between the marker-first and system-first tables.
pub fn ordering_invariance_residual(state: &PureState, basis: &MarkerBasis) -> Result<f64> {
    let a = joint_distribution(state, basis, MeasurementOrder::MarkerFirst)?;
    let b = joint_distribution(state, basis, MeasurementOrder::SystemFirst)?;
    Ok(a.max_abs_diff(&b))
}
