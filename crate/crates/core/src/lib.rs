//! Exact state-vector simulation of the delayed-choice quantum eraser.
//!
//! Two interferometers are modelled: a two-path interferometer whose paths
//! are split into `n` shared output channels ([`nchannel`]), and the
//! continuous two-slit screen ([`twoslit`]). In both, the quanton's path is
//! entangled with a two-state marker ([`marker`]). [`analysis`] builds joint
//! detection tables in either measurement order, reproduces the spin-pair
//! analogy and samples seeded detection events.
//!
//! All states are small and dense; identities hold to `1e-12` in double
//! precision.

pub mod analysis;
pub mod checks;
pub mod error;
pub mod marker;
pub mod nchannel;
pub mod rng;
pub mod state;
pub mod twoslit;

pub use num_complex::Complex64 as C64;

pub use error::{EraserError, Result};
pub use marker::{erasure_basis, which_path_basis, MarkerBasis, MarkerState, Sign};
pub use state::{
    fidelity_pure, inner_product, make_state, project_marker, project_system, purity, reduced_marker_density,
    tensor, BasisLabel, DensityOperator, Dims, PureState,
};
