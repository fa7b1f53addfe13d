//! Two-path, n-channel interferometer.
//!
//! Each path is split into the same `n` output channels; path A reaches
//! detector `D_j` with phase `θ_j`, path B with phase `φ_j`:
//!
//! ```text
//! U|A⟩ = Σ_j e^{iθ_j}|D_j⟩/√n        U|B⟩ = Σ_j e^{iφ_j}|D_j⟩/√n
//! ```
//!
//! `U` extends to a unitary only if the two images are orthogonal, i.e.
//! `Σ_j e^{i(φ_j − θ_j)} = 0`. Configurations violating this are rejected.
//!
//! Detectors are numbered `1..=n` in every public signature.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;

use crate::error::{EraserError, Result};
use crate::marker::{erasure_basis, MarkerState};
use crate::rng::SplitMix64;
use crate::state::{make_state, project_marker, project_system, DensityOperator, Dims, PureState};

/// Largest accepted `|Σ_j e^{i(φ_j − θ_j)}| / n`.
pub const UNITARITY_THRESHOLD: f64 = 1e-9;

/// Per-channel phases of the path splitter.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseConfig {
    thetas: Vec<f64>,
    phis: Vec<f64>,
}

impl PhaseConfig {
    pub fn new(thetas: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        let residual = validate_config(&thetas, &phis)?;
        if thetas.len() < 2 {
            return Err(EraserError::InvalidConfig(format!(
                "need at least 2 channels, got {}",
                thetas.len()
            )));
        }
        if residual >= UNITARITY_THRESHOLD {
            return Err(EraserError::InvalidConfig(format!(
                "path images are not orthogonal (residual {residual:e})"
            )));
        }
        Ok(Self { thetas, phis })
    }

    pub fn n(&self) -> usize {
        self.thetas.len()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn residual(&self) -> f64 {
        validate_config(&self.thetas, &self.phis).unwrap_or(f64::INFINITY)
    }
}

/// Unitarity residual `|Σ_j e^{i(φ_j − θ_j)}| / n`.
pub fn validate_config(thetas: &[f64], phis: &[f64]) -> Result<f64> {
    if thetas.len() != phis.len() {
        return Err(EraserError::LengthMismatch {
            thetas: thetas.len(),
            phis: phis.len(),
        });
    }
    if thetas.is_empty() {
        return Err(EraserError::InvalidConfig("no channels".into()));
    }
    if let Some(p) = thetas.iter().chain(phis).find(|p| !p.is_finite()) {
        return Err(EraserError::NonFinitePhase(*p));
    }
    let sum: C64 = thetas
        .iter()
        .zip(phis)
        .map(|(t, p)| C64::from_polar(1.0, p - t))
        .sum();
    Ok(sum.norm() / thetas.len() as f64)
}

/// `θ_j = 0`; `φ_j = 0` for odd `j`, `π` for even `j`.
pub fn default_config(n: usize) -> Result<PhaseConfig> {
    if n < 2 || n % 2 == 1 {
        return Err(EraserError::OddChannelCount(n));
    }
    let phis = (1..=n).map(|j| if j % 2 == 1 { 0.0 } else { PI }).collect();
    PhaseConfig::new(vec![0.0; n], phis)
}

/// `θ_j = 0`, `φ_j = 2πj/n`: path B phases are the n-th roots of unity.
pub fn dft_config(n: usize) -> Result<PhaseConfig> {
    let phis = (1..=n).map(|j| TAU * j as f64 / n as f64).collect();
    PhaseConfig::new(vec![0.0; n], phis)
}

/// Draws a random valid configuration.
///
/// All `θ_j` and the relative phases `δ_j = φ_j − θ_j` for `j ≥ 3` are
/// uniform on `[0, 2π)`. Channels 1 and 2 absorb the remainder
/// `S = Σ_{j≥3} e^{iδ_j}`: with `μ = arg(−S)` and `h = acos(|S|/2)` they get
/// `δ_1 = μ + h`, `δ_2 = μ − h`, so that `e^{iδ_1} + e^{iδ_2} = −S`. Draws with
/// `|S| > 2` cannot be repaired and are rejected.
pub fn random_config(n: usize, rng: &mut SplitMix64) -> Result<PhaseConfig> {
    if n < 2 {
        return Err(EraserError::InvalidConfig(format!(
            "need at least 2 channels, got {n}"
        )));
    }
    let thetas: Vec<f64> = (0..n).map(|_| TAU * rng.next_f64()).collect();
    let mut deltas = vec![0.0; n];
    loop {
        for d in deltas.iter_mut().skip(2) {
            *d = TAU * rng.next_f64();
        }
        let rest: C64 = deltas[2..].iter().map(|d| C64::from_polar(1.0, *d)).sum();
        let r = rest.norm();
        if r > 2.0 {
            continue;
        }
        let mean = if r < 1e-300 {
            TAU * rng.next_f64()
        } else {
            (-rest).arg()
        };
        let half = (0.5 * r).acos();
        deltas[0] = mean + half;
        deltas[1] = mean - half;
        break;
    }
    let phis = thetas
        .iter()
        .zip(&deltas)
        .map(|(t, d)| (t + d).rem_euclid(TAU))
        .collect();
    PhaseConfig::new(thetas, phis)
}

/// Marker-free final state: amplitude `(e^{iθ_j} + e^{iφ_j})/√(2n)` at `D_j`.
pub fn final_state_bare(config: &PhaseConfig) -> Result<PureState> {
    let scale = 1.0 / (2.0 * config.n() as f64).sqrt();
    let amplitudes = config
        .thetas
        .iter()
        .zip(&config.phis)
        .map(|(t, p)| (C64::from_polar(1.0, *t) + C64::from_polar(1.0, *p)) * scale)
        .collect();
    make_state(Dims::new(config.n(), 1), amplitudes)
}

/// Marked final state: `e^{iθ_j}/√(2n)` on `(D_j, d1)`, `e^{iφ_j}/√(2n)` on `(D_j, d2)`.
pub fn final_state_marked(config: &PhaseConfig) -> Result<PureState> {
    let scale = 1.0 / (2.0 * config.n() as f64).sqrt();
    let amplitudes = config
        .thetas
        .iter()
        .zip(&config.phis)
        .flat_map(|(t, p)| [C64::from_polar(scale, *t), C64::from_polar(scale, *p)])
        .collect();
    make_state(Dims::new(config.n(), 2), amplitudes)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Conditioning {
    Unconditioned,
    /// Distribution of detections coincident with `marker`, renormalized;
    /// `branch_probability` is the probability of that marker outcome.
    Marker {
        marker: MarkerState,
        branch_probability: f64,
    },
}

/// Probability per detector, index 0 holding detector 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorDistribution {
    pub probabilities: Vec<f64>,
    pub condition: Conditioning,
}

impl DetectorDistribution {
    pub fn n(&self) -> usize {
        self.probabilities.len()
    }

    /// Probability at detector `j` (1-based).
    pub fn detector(&self, j: usize) -> f64 {
        self.probabilities[j - 1]
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

pub fn detector_probabilities(state: &PureState) -> DetectorDistribution {
    DetectorDistribution {
        probabilities: state.system_probabilities(),
        condition: Conditioning::Unconditioned,
    }
}

/// Detector distribution of the quantons whose marker is found in `marker`.
pub fn conditioned_distribution(
    state: &PureState,
    marker: &MarkerState,
) -> Result<DetectorDistribution> {
    let (residual, branch_probability) = project_marker(state, &marker.vector())?;
    Ok(DetectorDistribution {
        probabilities: residual.system_probabilities(),
        condition: Conditioning::Marker {
            marker: *marker,
            branch_probability,
        },
    })
}

/// The marker state left behind by a click at one detector.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayedMarker {
    pub detector: usize,
    pub probability: f64,
    pub marker: MarkerState,
    pub purity: f64,
    pub fidelity_plus: f64,
    pub fidelity_minus: f64,
}

/// Conditions the marked state on a click at detector `j` (1-based) and
/// reports the resulting marker state against `|d_+⟩` and `|d_-⟩`.
pub fn delayed_marker_state(state: &PureState, detector_j: usize) -> Result<DelayedMarker> {
    if detector_j == 0 || detector_j > state.system_dim() {
        return Err(EraserError::IndexOutOfRange {
            index: detector_j,
            dim: state.system_dim(),
        });
    }
    let (vector, probability) = project_system(state, detector_j - 1)?;
    let rho = DensityOperator::from_pure(&vector)?;
    let basis = erasure_basis(0.0)?;
    Ok(DelayedMarker {
        detector: detector_j,
        probability,
        marker: MarkerState::from_vector(vector)?,
        purity: rho.purity(),
        fidelity_plus: rho.fidelity_pure(&basis.plus().vector())?,
        fidelity_minus: rho.fidelity_pure(&basis.minus().vector())?,
    })
}
