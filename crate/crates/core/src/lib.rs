//! Resonance poles of the spherical square barrier.
//!
//! The poles of the partial-wave S-matrix are found as zeros of `F_l2(k)` and
//! certified by the matching determinant and the Green-function Wronskian.
//! Around them sit the Gamow states, the S-matrix and Green-function residues,
//! and the exponential decay law.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gamow;
pub mod green;
pub mod model;
pub mod numerics;
pub mod resonances;
pub mod smatrix;
pub mod solutions;
pub mod verify;

pub use error::{Error, Result};
pub use model::{BarrierSpec, ComplexEnergy, ComplexWaveNumber, Sheet};
pub use numerics::ComplexRect;
pub use resonances::{find_poles, pole_pair, three_method_agreement, GrowingPole, Method, ResonancePole};
pub use smatrix::{phase_shift, s_matrix};
pub use solutions::{chi, coefficients, psi_outgoing, CoefficientSet};
