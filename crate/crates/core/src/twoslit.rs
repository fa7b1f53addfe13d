//! Two-slit eraser on a discretized screen.
//!
//! Path A reaches screen position `x` with phase `θ_x = πxd/(λL)` and path B
//! with `−θ_x`; both share one envelope `ψ(x)`. The screen is cut into
//! `bins` equal cells and each cell is represented by its midpoint
//! `x_k = x_min + (k + 1/2)Δx`, carrying amplitude `ψ(x_k)√Δx`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;

use crate::error::{EraserError, Result};
use crate::marker::{erasure_basis, MarkerState, Sign};
use crate::state::{make_state, project_marker, project_system, DensityOperator, Dims, PureState};

/// Slit separation `d`, wavelength `λ`, slit-screen distance `L` (all in the
/// same length unit) and the screen window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreenGeometry {
    pub d: f64,
    pub lambda: f64,
    pub distance: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub bins: usize,
}

impl ScreenGeometry {
    pub fn new(d: f64, lambda: f64, distance: f64, x_min: f64, x_max: f64, bins: usize) -> Result<Self> {
        let g = Self {
            d,
            lambda,
            distance,
            x_min,
            x_max,
            bins,
        };
        g.validate()?;
        Ok(g)
    }

    /// A window of `fringes` fringe widths on either side of the axis whose
    /// bin centers fall on `x = −fringes·w + kΔx`, so that `x = 0` and the
    /// half-fringe points are sampled exactly when `bins` is a multiple of
    /// `4·fringes`.
    pub fn aligned(d: f64, lambda: f64, distance: f64, fringes: f64, bins: usize) -> Result<Self> {
        if !(fringes.is_finite() && fringes > 0.0) {
            return Err(EraserError::InvalidGeometry(format!(
                "half extent must be positive, got {fringes} fringes"
            )));
        }
        let w = lambda * distance / d;
        let half = fringes * w;
        let dx = 2.0 * half / bins.max(1) as f64;
        Self::new(d, lambda, distance, -half - 0.5 * dx, half - 0.5 * dx, bins)
    }

    /// `d = 2`, `λ = 1`, `L = 1000` (so `w = 500`), two fringes either side,
    /// 512 bins.
    pub fn default_preset() -> Self {
        Self::aligned(2.0, 1.0, 1000.0, 2.0, 512).expect("default geometry is valid")
    }

    fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.d) || !positive(self.lambda) || !positive(self.distance) {
            return Err(EraserError::InvalidGeometry(format!(
                "d, lambda and L must be positive and finite (d={}, lambda={}, L={})",
                self.d, self.lambda, self.distance
            )));
        }
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return Err(EraserError::InvalidGeometry(format!(
                "screen window [{}, {}] is empty",
                self.x_min, self.x_max
            )));
        }
        if self.bins < 2 {
            return Err(EraserError::InvalidGeometry(format!(
                "need at least 2 bins, got {}",
                self.bins
            )));
        }
        if !positive(self.fringe_width()) {
            return Err(EraserError::InvalidGeometry(format!(
                "fringe width {} is not usable",
                self.fringe_width()
            )));
        }
        Ok(())
    }

    /// `w = λL/d`.
    pub fn fringe_width(&self) -> f64 {
        self.lambda * self.distance / self.d
    }

    pub fn bin_width(&self) -> f64 {
        (self.x_max - self.x_min) / self.bins as f64
    }

    /// `θ_x = πxd/(λL)`.
    pub fn theta_at(&self, x: f64) -> f64 {
        PI * x * self.d / (self.lambda * self.distance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Envelope {
    Flat,
    /// `|ψ(x)|²` is a normal density with standard deviation `sigma`,
    /// centered on the axis.
    Gaussian { sigma: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScreenGrid {
    geometry: ScreenGeometry,
    envelope_kind: Envelope,
    centers: Vec<f64>,
    theta_x: Vec<f64>,
    envelope: Vec<f64>,
}

pub fn build_grid(geometry: ScreenGeometry, envelope_kind: Envelope) -> Result<ScreenGrid> {
    geometry.validate()?;
    let dx = geometry.bin_width();
    let centers: Vec<f64> = (0..geometry.bins)
        .map(|k| geometry.x_min + (k as f64 + 0.5) * dx)
        .collect();
    let theta_x = centers.iter().map(|&x| geometry.theta_at(x)).collect();
    let raw: Vec<f64> = match envelope_kind {
        Envelope::Flat => vec![1.0; geometry.bins],
        Envelope::Gaussian { sigma } => {
            if !(sigma.is_finite() && sigma > 0.0) {
                return Err(EraserError::InvalidGeometry(format!(
                    "gaussian sigma must be positive, got {sigma}"
                )));
            }
            centers
                .iter()
                .map(|x| (-x * x / (4.0 * sigma * sigma)).exp())
                .collect()
        }
    };
    let mass: f64 = raw.iter().map(|v| v * v * dx).sum();
    if !(mass.is_finite() && mass > 0.0) {
        return Err(EraserError::InvalidGeometry(
            "envelope vanishes on every bin".into(),
        ));
    }
    let scale = 1.0 / mass.sqrt();
    Ok(ScreenGrid {
        geometry,
        envelope_kind,
        centers,
        theta_x,
        envelope: raw.into_iter().map(|v| v * scale).collect(),
    })
}

impl ScreenGrid {
    pub fn geometry(&self) -> &ScreenGeometry {
        &self.geometry
    }

    pub fn envelope_kind(&self) -> Envelope {
        self.envelope_kind
    }

    pub fn bins(&self) -> usize {
        self.centers.len()
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn theta_x(&self) -> &[f64] {
        &self.theta_x
    }

    /// `ψ(x_k)`.
    pub fn envelope(&self) -> &[f64] {
        &self.envelope
    }

    /// `ψ(x_k)²Δx`, the probability mass of each bin without interference.
    pub fn weights(&self) -> Vec<f64> {
        let dx = self.geometry.bin_width();
        self.envelope.iter().map(|v| v * v * dx).collect()
    }

    /// Bin whose center is closest to `x`.
    pub fn bin_of(&self, x: f64) -> usize {
        let k = ((x - self.geometry.x_min) / self.geometry.bin_width() - 0.5).round();
        k.clamp(0.0, (self.bins() - 1) as f64) as usize
    }

    fn bin_amplitudes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let root_dx = self.geometry.bin_width().sqrt();
        self.envelope
            .iter()
            .zip(&self.theta_x)
            .map(move |(psi, t)| (psi * root_dx, *t))
    }
}

/// Screen state without a marker: `ψ(x)(e^{iθ_x} + e^{−iθ_x})/√2`, renormalized.
pub fn bare_state(grid: &ScreenGrid) -> Result<PureState> {
    let amplitudes = grid
        .bin_amplitudes()
        .map(|(a, t)| (C64::from_polar(a, t) + C64::from_polar(a, -t)) * FRAC_1_SQRT_2)
        .collect();
    make_state(Dims::new(grid.bins(), 1), amplitudes)
}

/// Screen state entangled with the marker: `ψ(x)(e^{iθ_x}|d1⟩ + e^{−iθ_x}|d2⟩)/√2`.
pub fn marked_state(grid: &ScreenGrid) -> Result<PureState> {
    let amplitudes = grid
        .bin_amplitudes()
        .flat_map(|(a, t)| {
            [
                C64::from_polar(a * FRAC_1_SQRT_2, t),
                C64::from_polar(a * FRAC_1_SQRT_2, -t),
            ]
        })
        .collect();
    make_state(Dims::new(grid.bins(), 2), amplitudes)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PatternCondition {
    NoMarker,
    Unconditioned,
    Conditioned {
        theta: f64,
        sign: Sign,
        branch_probability: f64,
    },
}

/// Probability per screen bin.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenPattern {
    pub probabilities: Vec<f64>,
    /// Envelope mass per bin, used to envelope-normalize for visibility.
    pub envelope_weights: Vec<f64>,
    pub condition: PatternCondition,
}

impl ScreenPattern {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

pub fn pattern_no_marker(grid: &ScreenGrid) -> Result<ScreenPattern> {
    let state = bare_state(grid)?;
    Ok(ScreenPattern {
        probabilities: state.system_probabilities(),
        envelope_weights: grid.weights(),
        condition: PatternCondition::NoMarker,
    })
}

pub fn pattern_marked_unconditioned(grid: &ScreenGrid) -> Result<ScreenPattern> {
    let state = marked_state(grid)?;
    Ok(ScreenPattern {
        probabilities: state.system_probabilities(),
        envelope_weights: grid.weights(),
        condition: PatternCondition::Unconditioned,
    })
}

/// Pattern of the detections coincident with `|d^θ_±⟩`, renormalized, and
/// the probability of that marker outcome.
pub fn pattern_conditioned(grid: &ScreenGrid, theta: f64, sign: Sign) -> Result<(ScreenPattern, f64)> {
    let basis = erasure_basis(theta)?;
    let state = marked_state(grid)?;
    let (residual, branch_probability) = project_marker(&state, &basis.state(sign).vector())?;
    let pattern = ScreenPattern {
        probabilities: residual.system_probabilities(),
        envelope_weights: grid.weights(),
        condition: PatternCondition::Conditioned {
            theta,
            sign,
            branch_probability,
        },
    };
    Ok((pattern, branch_probability))
}

/// The marker state left by a detection in one bin.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenDelayed {
    pub bin: usize,
    pub x: f64,
    pub theta_x: f64,
    pub probability: f64,
    pub marker: MarkerState,
    pub purity: f64,
    /// Fidelity to `|d^{θ_x}_+⟩`.
    pub fidelity: f64,
}

fn delayed_in_state(grid: &ScreenGrid, state: &PureState, bin_k: usize) -> Result<ScreenDelayed> {
    let (vector, probability) = project_system(state, bin_k)?;
    let theta_x = grid.theta_x[bin_k];
    let rho = DensityOperator::from_pure(&vector)?;
    let target = erasure_basis(theta_x)?;
    Ok(ScreenDelayed {
        bin: bin_k,
        x: grid.centers[bin_k],
        theta_x,
        probability,
        marker: MarkerState::from_vector(vector)?,
        purity: rho.purity(),
        fidelity: rho.fidelity_pure(&target.plus().vector())?,
    })
}

pub fn delayed_marker_state_at(grid: &ScreenGrid, bin_k: usize) -> Result<ScreenDelayed> {
    delayed_in_state(grid, &marked_state(grid)?, bin_k)
}

/// [`delayed_marker_state_at`] for every bin; bins with a vanishing envelope
/// yield `ZeroProbability`.
pub fn delayed_marker_scan(grid: &ScreenGrid) -> Result<Vec<Result<ScreenDelayed>>> {
    let state = marked_state(grid)?;
    Ok((0..grid.bins())
        .map(|k| delayed_in_state(grid, &state, k))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Contrast {
    /// Divide each bin by its envelope mass first.
    #[default]
    EnvelopeNormalized,
    Raw,
}

/// Bins with envelope mass below this fraction of the largest are ignored
/// when envelope-normalizing.
const ENVELOPE_FLOOR: f64 = 1e-12;

/// `(max − min)/(max + min)` over the bin values.
pub fn visibility(pattern: &ScreenPattern, contrast: Contrast) -> Result<f64> {
    if pattern.probabilities.len() < 2 {
        return Err(EraserError::DegeneratePattern(format!(
            "{} bins",
            pattern.probabilities.len()
        )));
    }
    let values: Vec<f64> = match contrast {
        Contrast::Raw => pattern.probabilities.clone(),
        Contrast::EnvelopeNormalized => {
            if pattern.envelope_weights.len() != pattern.probabilities.len() {
                return Err(EraserError::DimensionMismatch(
                    "envelope weights do not match the pattern".into(),
                ));
            }
            let top = pattern.envelope_weights.iter().cloned().fold(0.0, f64::max);
            pattern
                .probabilities
                .iter()
                .zip(&pattern.envelope_weights)
                .filter(|(_, w)| **w > ENVELOPE_FLOOR * top)
                .map(|(p, w)| p / w)
                .collect()
        }
    };
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    if values.len() < 2 || (max + min).is_nan() || max + min < 1e-15 {
        return Err(EraserError::DegeneratePattern(format!(
            "max + min = {}",
            max + min
        )));
    }
    Ok(((max - min) / (max + min)).clamp(0.0, 1.0))
}

/// Interior bins that are strict local maxima.
pub fn peak_bins(probabilities: &[f64]) -> Vec<usize> {
    probabilities
        .windows(3)
        .enumerate()
        .filter(|(_, w)| w[1] > w[0] && w[1] > w[2])
        .map(|(i, _)| i + 1)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn default_grid() -> ScreenGrid {
        build_grid(ScreenGeometry::default_preset(), Envelope::Flat).unwrap()
    }

    #[test]
    fn geometry_basics() {
        let g = ScreenGeometry::new(2.0, 1.0, 1000.0, -1000.0, 1000.0, 512).unwrap();
        assert_eq!(g.fringe_width(), 500.0);
        assert_abs_diff_eq!(g.theta_at(250.0), PI / 2.0, epsilon = 1e-15);
        assert!(ScreenGeometry::new(0.0, 1.0, 1.0, -1.0, 1.0, 4).is_err());
        assert!(ScreenGeometry::new(1.0, 1.0, 1.0, 1.0, -1.0, 4).is_err());
        assert!(ScreenGeometry::new(1.0, 1.0, 1.0, -1.0, 1.0, 1).is_err());
        assert!(ScreenGeometry::new(1.0, f64::NAN, 1.0, -1.0, 1.0, 4).is_err());
    }

    #[test]
    fn default_preset_samples_axis_and_half_fringe() {
        let grid = default_grid();
        let g = grid.geometry();
        assert_eq!(g.bin_width(), 2000.0 / 512.0);
        let k0 = grid.bin_of(0.0);
        assert_eq!(grid.centers()[k0], 0.0);
        let kh = grid.bin_of(250.0);
        assert_eq!(grid.centers()[kh], 250.0);
        assert_abs_diff_eq!(grid.theta_x()[kh], PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn flat_envelope_normalization() {
        let grid = default_grid();
        let g = grid.geometry();
        for v in grid.envelope() {
            assert_abs_diff_eq!(v * v, 1.0 / (g.x_max - g.x_min), epsilon = 1e-15);
        }
        assert_abs_diff_eq!(grid.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_envelope_normalization() {
        let grid = build_grid(ScreenGeometry::default_preset(), Envelope::Gaussian { sigma: 300.0 }).unwrap();
        assert_abs_diff_eq!(grid.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-10);
        assert!(build_grid(ScreenGeometry::default_preset(), Envelope::Gaussian { sigma: -1.0 }).is_err());
    }

    #[test]
    fn fringe_extremes() {
        let grid = default_grid();
        let p = pattern_no_marker(&grid).unwrap();
        let k0 = grid.bin_of(0.0);
        assert!(p.probabilities[k0] > p.probabilities[k0 - 1]);
        assert!(p.probabilities[k0] > p.probabilities[k0 + 1]);
        assert_abs_diff_eq!(p.probabilities[grid.bin_of(250.0)], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.total(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(visibility(&p, Contrast::default()).unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn washed_pattern_is_flat() {
        let grid = default_grid();
        let p = pattern_marked_unconditioned(&grid).unwrap();
        for v in &p.probabilities {
            assert_abs_diff_eq!(*v, 1.0 / 512.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(visibility(&p, Contrast::default()).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn conditioned_patterns() {
        let grid = default_grid();
        let w = grid.geometry().fringe_width();
        let (plus, bp) = pattern_conditioned(&grid, 0.0, Sign::Plus).unwrap();
        let (minus, bm) = pattern_conditioned(&grid, 0.0, Sign::Minus).unwrap();
        assert_abs_diff_eq!(bp, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(bm, 0.5, epsilon = 1e-12);
        let peaks: Vec<f64> = peak_bins(&plus.probabilities).iter().map(|&k| grid.centers()[k]).collect();
        assert_eq!(peaks, vec![-w, 0.0, w]);
        let peaks: Vec<f64> = peak_bins(&minus.probabilities).iter().map(|&k| grid.centers()[k]).collect();
        assert_eq!(peaks, vec![-1.5 * w, -0.5 * w, 0.5 * w, 1.5 * w]);
        assert_abs_diff_eq!(visibility(&plus, Contrast::default()).unwrap(), 1.0, epsilon = 1e-9);
        assert!(pattern_conditioned(&grid, f64::NAN, Sign::Plus).is_err());
    }

    #[test]
    fn delayed_states_follow_position() {
        let grid = default_grid();
        let at0 = delayed_marker_state_at(&grid, grid.bin_of(0.0)).unwrap();
        assert_abs_diff_eq!(at0.theta_x, 0.0, epsilon = 1e-15);
        let dplus = erasure_basis(0.0).unwrap();
        assert_abs_diff_eq!(at0.marker.fidelity(dplus.plus()), 1.0, epsilon = 1e-12);

        let half = delayed_marker_state_at(&grid, grid.bin_of(250.0)).unwrap();
        assert_abs_diff_eq!(half.theta_x, PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(half.fidelity, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(half.marker.fidelity(dplus.plus()), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(half.marker.fidelity(dplus.minus()), 1.0, epsilon = 1e-12);

        for d in delayed_marker_scan(&grid).unwrap() {
            let d = d.unwrap();
            assert_abs_diff_eq!(d.purity, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(d.fidelity, 1.0, epsilon = 1e-12);
        }
        assert!(delayed_marker_state_at(&grid, 512).is_err());
    }

    #[test]
    fn visibility_errors() {
        let p = ScreenPattern {
            probabilities: vec![0.0, 0.0],
            envelope_weights: vec![0.5, 0.5],
            condition: PatternCondition::Unconditioned,
        };
        assert!(matches!(visibility(&p, Contrast::Raw), Err(EraserError::DegeneratePattern(_))));
        let single = ScreenPattern {
            probabilities: vec![1.0],
            envelope_weights: vec![1.0],
            condition: PatternCondition::Unconditioned,
        };
        assert!(visibility(&single, Contrast::Raw).is_err());
    }
}
