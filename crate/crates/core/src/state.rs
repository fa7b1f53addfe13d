//! Dense pure states over a `system ⊗ marker` product space and the 2×2
//! reduced density operator of the marker.
//!
//! Layout is system-major: the amplitude of `|s⟩|m⟩` lives at
//! `s * marker_dim + m`, so all marker components of one system outcome are
//! contiguous. The marker dimension is 1 (no marker) or 2.

use num_complex::Complex64 as C64;

use crate::error::{EraserError, Result};

/// Absolute tolerance for algebraic identities.
pub const TOLERANCE: f64 = 1e-12;

/// Conditioning on an outcome with probability below this is an error.
pub const ZERO_PROBABILITY: f64 = 1e-15;

/// A two-component marker vector in the `(|d1⟩, |d2⟩)` basis.
pub type MarkerVector = [C64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims {
    pub system: usize,
    pub marker: usize,
}

impl Dims {
    pub fn new(system: usize, marker: usize) -> Self {
        Self { system, marker }
    }

    pub fn len(&self) -> usize {
        self.system * self.marker
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A label for one product-basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub system_index: usize,
    pub marker_index: Option<usize>,
}

/// A normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Dims,
    amplitudes: Vec<C64>,
    normalization: f64,
}

fn squared_norm(amplitudes: &[C64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

fn check_finite(amplitudes: &[C64]) -> Result<()> {
    match amplitudes.iter().position(|a| !a.is_finite()) {
        Some(i) => Err(EraserError::NonFinite(format!(
            "amplitude {i} = {}",
            amplitudes[i]
        ))),
        None => Ok(()),
    }
}

/// Builds a normalized state from raw amplitudes.
///
/// The factor the input was multiplied by is kept and available through
/// [`PureState::normalization`].
pub fn make_state(dims: Dims, amplitudes: Vec<C64>) -> Result<PureState> {
    if dims.marker != 1 && dims.marker != 2 {
        return Err(EraserError::DimensionMismatch(format!(
            "marker dimension must be 1 or 2, got {}",
            dims.marker
        )));
    }
    if dims.system == 0 || amplitudes.len() != dims.len() {
        return Err(EraserError::DimensionMismatch(format!(
            "{} amplitudes for dims {}x{}",
            amplitudes.len(),
            dims.system,
            dims.marker
        )));
    }
    check_finite(&amplitudes)?;
    let norm = squared_norm(&amplitudes).sqrt();
    if norm == 0.0 {
        return Err(EraserError::ZeroNorm);
    }
    let factor = 1.0 / norm;
    let amplitudes = amplitudes.into_iter().map(|a| a * factor).collect();
    Ok(PureState {
        dims,
        amplitudes,
        normalization: factor,
    })
}

impl PureState {
    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn system_dim(&self) -> usize {
        self.dims.system
    }

    pub fn marker_dim(&self) -> usize {
        self.dims.marker
    }

    pub fn has_marker(&self) -> bool {
        self.dims.marker == 2
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Factor applied to the raw input amplitudes by [`make_state`].
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn squared_norm(&self) -> f64 {
        squared_norm(&self.amplitudes)
    }

    pub fn index_of(&self, label: BasisLabel) -> Result<usize> {
        if label.system_index >= self.dims.system {
            return Err(EraserError::IndexOutOfRange {
                index: label.system_index,
                dim: self.dims.system,
            });
        }
        let m = label.marker_index.unwrap_or(0);
        if m >= self.dims.marker || (label.marker_index.is_none() && self.has_marker()) {
            return Err(EraserError::IndexOutOfRange {
                index: m,
                dim: self.dims.marker,
            });
        }
        Ok(label.system_index * self.dims.marker + m)
    }

    pub fn amplitude(&self, label: BasisLabel) -> Result<C64> {
        Ok(self.amplitudes[self.index_of(label)?])
    }

    /// Marker components belonging to system outcome `s`.
    pub fn system_block(&self, s: usize) -> &[C64] {
        let m = self.dims.marker;
        &self.amplitudes[s * m..(s + 1) * m]
    }

    /// Probability of each system outcome, summed over the marker.
    pub fn system_probabilities(&self) -> Vec<f64> {
        self.amplitudes
            .chunks(self.dims.marker)
            .map(squared_norm)
            .collect()
    }
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner_product(a: &PureState, b: &PureState) -> Result<C64> {
    if a.dims != b.dims {
        return Err(EraserError::DimensionMismatch(format!(
            "{:?} vs {:?}",
            a.dims, b.dims
        )));
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// `system ⊗ marker`. Both inputs must be marker-free; the second one becomes
/// the marker and must have dimension 1 or 2.
pub fn tensor(system: &PureState, marker: &PureState) -> Result<PureState> {
    if system.has_marker() || marker.has_marker() {
        return Err(EraserError::DimensionMismatch(
            "tensor factors must be marker-free states".into(),
        ));
    }
    let m = marker.system_dim();
    if m > 2 {
        return Err(EraserError::DimensionMismatch(format!(
            "marker factor has dimension {m}"
        )));
    }
    let amplitudes = system
        .amplitudes
        .iter()
        .flat_map(|s| marker.amplitudes.iter().map(move |d| s * d))
        .collect();
    make_state(Dims::new(system.system_dim(), m), amplitudes)
}

fn check_marker_vector(v: &MarkerVector) -> Result<()> {
    check_finite(v)?;
    let n = squared_norm(v);
    if (n - 1.0).abs() > TOLERANCE {
        return Err(EraserError::NotNormalized(n));
    }
    Ok(())
}

fn clip_probability(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// Unnormalized partial inner product `(⟨b| ⊗ 1)|ψ⟩` as system amplitudes.
pub(crate) fn partial_marker_overlap(state: &PureState, b: &MarkerVector) -> Vec<C64> {
    let (b0, b1) = (b[0].conj(), b[1].conj());
    state
        .amplitudes
        .chunks_exact(2)
        .map(|block| b0 * block[0] + b1 * block[1])
        .collect()
}

/// Projects the marker onto `marker_state`.
///
/// Returns the renormalized residual system state and the probability of
/// the marker outcome.
pub fn project_marker(state: &PureState, marker_state: &MarkerVector) -> Result<(PureState, f64)> {
    if !state.has_marker() {
        return Err(EraserError::NoMarker);
    }
    check_marker_vector(marker_state)?;
    let partial = partial_marker_overlap(state, marker_state);
    let probability = squared_norm(&partial);
    if probability < ZERO_PROBABILITY {
        return Err(EraserError::ZeroProbability(probability));
    }
    let residual = make_state(Dims::new(state.system_dim(), 1), partial)?;
    Ok((residual, clip_probability(probability)))
}

/// Projects the system onto outcome `system_index` (0-based).
///
/// Returns the normalized conditional marker vector and the outcome
/// probability.
pub fn project_system(state: &PureState, system_index: usize) -> Result<(MarkerVector, f64)> {
    if !state.has_marker() {
        return Err(EraserError::NoMarker);
    }
    if system_index >= state.system_dim() {
        return Err(EraserError::IndexOutOfRange {
            index: system_index,
            dim: state.system_dim(),
        });
    }
    let block = state.system_block(system_index);
    let probability = squared_norm(block);
    if probability < ZERO_PROBABILITY {
        return Err(EraserError::ZeroProbability(probability));
    }
    let scale = 1.0 / probability.sqrt();
    Ok(([block[0] * scale, block[1] * scale], clip_probability(probability)))
}

/// A 2×2 density operator on the marker space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityOperator {
    matrix: [[C64; 2]; 2],
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity at [`TOLERANCE`].
    pub fn new(matrix: [[C64; 2]; 2]) -> Result<Self> {
        check_finite(&[matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1]])?;
        let herm = (matrix[0][1] - matrix[1][0].conj())
            .norm()
            .max(matrix[0][0].im.abs())
            .max(matrix[1][1].im.abs());
        if herm > TOLERANCE {
            return Err(EraserError::InvalidDensity(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let trace = matrix[0][0].re + matrix[1][1].re;
        if (trace - 1.0).abs() > TOLERANCE {
            return Err(EraserError::InvalidDensity(format!("trace {trace}")));
        }
        let rho = Self { matrix };
        let [_, low] = rho.eigenvalues();
        if low < -TOLERANCE {
            return Err(EraserError::InvalidDensity(format!(
                "negative eigenvalue {low:e}"
            )));
        }
        Ok(rho)
    }

    /// `|v⟩⟨v|` for a normalized marker vector.
    pub fn from_pure(v: &MarkerVector) -> Result<Self> {
        check_marker_vector(v)?;
        let mut matrix = [[C64::default(); 2]; 2];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = v[i] * v[j].conj();
            }
        }
        Self::new(matrix)
    }

    pub fn dim(&self) -> usize {
        2
    }

    pub fn matrix(&self) -> &[[C64; 2]; 2] {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[row][col]
    }

    /// Eigenvalues, largest first.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.matrix[0][0].re;
        let d = self.matrix[1][1].re;
        let b = self.matrix[0][1].norm();
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        [mean + radius, mean - radius]
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.matrix
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// `⟨t|ρ|t⟩` for a normalized target.
    pub fn fidelity_pure(&self, target: &MarkerVector) -> Result<f64> {
        check_marker_vector(target)?;
        let mut acc = C64::default();
        for i in 0..2 {
            for j in 0..2 {
                acc += target[i].conj() * self.matrix[i][j] * target[j];
            }
        }
        Ok(acc.re)
    }
}

/// `tr_system |ψ⟩⟨ψ|`, in the `(d1, d2)` basis.
pub fn reduced_marker_density(state: &PureState) -> Result<DensityOperator> {
    if !state.has_marker() {
        return Err(EraserError::NoMarker);
    }
    let mut matrix = [[C64::default(); 2]; 2];
    for block in state.amplitudes.chunks_exact(2) {
        for i in 0..2 {
            for j in 0..2 {
                matrix[i][j] += block[i] * block[j].conj();
            }
        }
    }
    DensityOperator::new(matrix)
}

pub fn purity(rho: &DensityOperator) -> f64 {
    rho.purity()
}

pub fn fidelity_pure(rho: &DensityOperator, target: &MarkerVector) -> Result<f64> {
    rho.fidelity_pure(target)
}
