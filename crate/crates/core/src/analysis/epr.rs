//! The spin-pair analogy: `(|↑↑⟩ + |↓↓⟩)/√2` has the same amplitudes as the
//! marked two-slit state under `ψ_A ↦ ↑₁`, `ψ_B ↦ ↓₁`, `d1 ↦ ↑₂`, `d2 ↦ ↓₂`,
//! and the x-basis of spin 2 coincides with the `θ = 0` erasure basis.
//! Spin 1 is stored as the system factor and spin 2 as the marker.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::analysis::JointTable;
use crate::error::Result;
use crate::state::{inner_product, make_state, project_marker, Dims, MarkerVector, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinAxis {
    Z,
    X,
}

impl SpinAxis {
    /// Eigenvectors in the z basis: `(↑, ↓)` for Z, `(+, −)` for X.
    pub fn eigenvectors(self) -> [MarkerVector; 2] {
        let r = C64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            SpinAxis::Z => [
                [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            ],
            SpinAxis::X => [[r, r], [r, -r]],
        }
    }

    pub fn labels(self) -> [&'static str; 2] {
        match self {
            SpinAxis::Z => ["up", "down"],
            SpinAxis::X => ["+", "-"],
        }
    }
}

impl fmt::Display for SpinAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpinAxis::Z => "z",
            SpinAxis::X => "x",
        })
    }
}

impl std::str::FromStr for SpinAxis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "z" | "Z" => Ok(SpinAxis::Z),
            "x" | "X" => Ok(SpinAxis::X),
            other => Err(format!("unknown spin axis `{other}`")),
        }
    }
}

/// `(|↑⟩₁|↑⟩₂ + |↓⟩₁|↓⟩₂)/√2`.
pub fn epr_state() -> PureState {
    let (one, zero) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    make_state(Dims::new(2, 2), vec![one, zero, zero, one]).expect("EPR amplitudes are valid")
}

fn single_spin(v: MarkerVector) -> Result<PureState> {
    make_state(Dims::new(2, 1), v.to_vec())
}

/// Amplitudes of [`epr_state`] in the product basis `axis1 ⊗ axis2`.
pub fn epr_state_in(axis1: SpinAxis, axis2: SpinAxis) -> Result<PureState> {
    let phi = epr_state();
    let mut amplitudes = Vec::with_capacity(4);
    for a in axis1.eigenvectors() {
        for b in axis2.eigenvectors() {
            let mut acc = C64::new(0.0, 0.0);
            for (i, ai) in a.iter().enumerate() {
                for (j, bj) in b.iter().enumerate() {
                    acc += ai.conj() * bj.conj() * phi.amplitudes()[i * 2 + j];
                }
            }
            amplitudes.push(acc);
        }
    }
    make_state(Dims::new(2, 2), amplitudes)
}

/// Joint outcome table for measuring spin 1 along `axis1` and spin 2 along
/// `axis2`. Spin 2 is projected first; the residual of spin 1 is then read
/// in its own basis.
pub fn epr_correlation_table(axis1: SpinAxis, axis2: SpinAxis) -> Result<JointTable> {
    let phi = epr_state();
    let spin1 = axis1
        .eigenvectors()
        .into_iter()
        .map(single_spin)
        .collect::<Result<Vec<_>>>()?;
    let mut cells = vec![0.0; 4];
    for (b, v2) in axis2.eigenvectors().iter().enumerate() {
        let (residual, p2) = project_marker(&phi, v2)?;
        for (a, s1) in spin1.iter().enumerate() {
            cells[a * 2 + b] = p2 * inner_product(s1, &residual)?.norm_sqr();
        }
    }
    let rows = axis1.labels().iter().map(|l| format!("{l}_1")).collect();
    let cols = axis2.labels().iter().map(|l| format!("{l}_2")).collect();
    JointTable::new(rows, cols, cells)
}
