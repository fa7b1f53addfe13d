//! The two-state path marker.
//!
//! `|d1⟩` records path A and `|d2⟩` path B. The erasure family is
//! `|d^θ_±⟩ = (e^{iθ}|d1⟩ ± e^{-iθ}|d2⟩)/√2`; every member is unbiased with
//! respect to the which-path basis. With this phase convention the pattern
//! recovered on `|d^θ_+⟩` is `1 + cos(2θ_x − 2θ)`, i.e. it is translated by
//! `θ·w/π` relative to `θ = 0`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{EraserError, Result};
use crate::state::{MarkerVector, TOLERANCE};

/// Normalized marker state `c1|d1⟩ + c2|d2⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkerState {
    c1: C64,
    c2: C64,
}

impl MarkerState {
    pub fn new(c1: C64, c2: C64) -> Result<Self> {
        if !c1.is_finite() || !c2.is_finite() {
            return Err(EraserError::NonFinite(format!("marker ({c1}, {c2})")));
        }
        let n = c1.norm_sqr() + c2.norm_sqr();
        if (n - 1.0).abs() > TOLERANCE {
            return Err(EraserError::NotNormalized(n));
        }
        Ok(Self { c1, c2 })
    }

    pub fn from_vector(v: MarkerVector) -> Result<Self> {
        Self::new(v[0], v[1])
    }

    pub fn d1() -> Self {
        Self {
            c1: C64::new(1.0, 0.0),
            c2: C64::new(0.0, 0.0),
        }
    }

    pub fn d2() -> Self {
        Self {
            c1: C64::new(0.0, 0.0),
            c2: C64::new(1.0, 0.0),
        }
    }

    pub fn c1(&self) -> C64 {
        self.c1
    }

    pub fn c2(&self) -> C64 {
        self.c2
    }

    pub fn vector(&self) -> MarkerVector {
        [self.c1, self.c2]
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &MarkerState) -> C64 {
        self.c1.conj() * other.c1 + self.c2.conj() * other.c2
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &MarkerState) -> f64 {
        self.overlap(other).norm_sqr()
    }
}

impl fmt::Display for MarkerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.c1, self.c2)
    }
}

/// Sign selecting `|d^θ_+⟩` or `|d^θ_-⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisKind {
    WhichPath,
    Erasure { theta: f64 },
}

/// An orthonormal measurement basis for the marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkerBasis {
    kind: BasisKind,
    states: [MarkerState; 2],
}

impl MarkerBasis {
    pub fn which_path() -> Self {
        Self {
            kind: BasisKind::WhichPath,
            states: [MarkerState::d1(), MarkerState::d2()],
        }
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn theta(&self) -> Option<f64> {
        match self.kind {
            BasisKind::Erasure { theta } => Some(theta),
            BasisKind::WhichPath => None,
        }
    }

    pub fn states(&self) -> &[MarkerState; 2] {
        &self.states
    }

    pub fn plus(&self) -> &MarkerState {
        &self.states[0]
    }

    pub fn minus(&self) -> &MarkerState {
        &self.states[1]
    }

    pub fn state(&self, sign: Sign) -> &MarkerState {
        &self.states[sign.index()]
    }

    /// Outcome labels, `d1`/`d2` or `d+`/`d-`.
    pub fn labels(&self) -> [&'static str; 2] {
        match self.kind {
            BasisKind::WhichPath => ["d1", "d2"],
            BasisKind::Erasure { .. } => ["d+", "d-"],
        }
    }

    /// Max deviation of `|⟨b_i|b_j⟩|` from `δ_ij`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.states.iter().enumerate() {
            for (j, b) in self.states.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.overlap(b).norm() - target).abs());
            }
        }
        worst
    }
}

/// `(|d1⟩, |d2⟩)`.
pub fn which_path_basis() -> (MarkerState, MarkerState) {
    (MarkerState::d1(), MarkerState::d2())
}

/// `|d^θ_±⟩ = (e^{iθ}|d1⟩ ± e^{-iθ}|d2⟩)/√2`. `θ` is used as given, without
/// reduction.
pub fn erasure_basis(theta: f64) -> Result<MarkerBasis> {
    if !theta.is_finite() {
        return Err(EraserError::NonFinitePhase(theta));
    }
    let a = C64::from_polar(FRAC_1_SQRT_2, theta);
    let b = C64::from_polar(FRAC_1_SQRT_2, -theta);
    Ok(MarkerBasis {
        kind: BasisKind::Erasure { theta },
        states: [MarkerState { c1: a, c2: b }, MarkerState { c1: a, c2: -b }],
    })
}

/// Max over the four cross pairs of `| |⟨a_i|b_j⟩|² − 1/2 |`.
pub fn mutual_unbiasedness_check(a: &MarkerBasis, b: &MarkerBasis) -> f64 {
    a.states()
        .iter()
        .flat_map(|x| b.states().iter().map(move |y| (x.fidelity(y) - 0.5).abs()))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn canonical_basis() {
        let (d1, d2) = which_path_basis();
        assert_eq!(d1.vector(), [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert_eq!(d2.vector(), [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        assert_eq!(d1.overlap(&d2), C64::new(0.0, 0.0));
    }

    #[test]
    fn erasure_basis_values() {
        let b = erasure_basis(0.0).unwrap();
        assert_abs_diff_eq!(b.plus().c1().re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(b.plus().c2().re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(b.minus().c2().re, -FRAC_1_SQRT_2, epsilon = 1e-15);

        let b = erasure_basis(PI / 2.0).unwrap();
        assert_abs_diff_eq!(b.plus().c1().re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.plus().c1().im, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(b.plus().c2().im, -FRAC_1_SQRT_2, epsilon = 1e-15);

        assert!(matches!(erasure_basis(f64::NAN), Err(EraserError::NonFinitePhase(_))));
        assert!(matches!(erasure_basis(f64::INFINITY), Err(EraserError::NonFinitePhase(_))));
    }

    #[test]
    fn unbiased_against_which_path_over_theta_sweep() {
        // brute-force overlaps on a 100-point sweep
        let d1 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        for k in 0..100 {
            let theta = -7.0 + 0.14 * k as f64;
            let b = erasure_basis(theta).unwrap();
            for s in b.states() {
                let v = s.vector();
                let ov = d1[0].conj() * v[0] + d1[1].conj() * v[1];
                assert_abs_diff_eq!(ov.norm_sqr(), 0.5, epsilon = 1e-12);
            }
            assert!(b.orthonormality_error() < 1e-12);
        }
    }

    #[test]
    fn unbiasedness_check() {
        let wp = MarkerBasis::which_path();
        assert!(mutual_unbiasedness_check(&erasure_basis(0.0).unwrap(), &wp) < 1e-12);
        assert!(mutual_unbiasedness_check(&erasure_basis(1.234).unwrap(), &wp) < 1e-12);
        assert_abs_diff_eq!(mutual_unbiasedness_check(&wp, &wp), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn period_pi_up_to_global_phase() {
        for k in 0..20 {
            let t = 0.37 * k as f64;
            let a = erasure_basis(t).unwrap();
            let b = erasure_basis(t + PI).unwrap();
            for (x, y) in a.states().iter().zip(b.states()) {
                assert_abs_diff_eq!((x.c1() + y.c1()).norm(), 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!((x.c2() + y.c2()).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(matches!(
            MarkerState::new(C64::new(1.0, 0.0), C64::new(1.0, 0.0)),
            Err(EraserError::NotNormalized(_))
        ));
    }
}
