//! Relativistic spin observables for massive spin-½ particles.
//!
//! All states carry a sharp momentum: a two-component spinor together with a
//! mass and a 3-momentum. Natural units (ħ = c = 1) and the metric signature
//! (+, −, −, −) are used throughout.
//!
//! Two spin operators are built and compared. The Wigner (rest-frame) spin
//! comes from the Pauli-Lubanski vector boosted back to the rest frame
//! ([`spinops::wigner_spin`]). The one-particle restriction of the Dirac spin
//! `Σ/2` coincides with the energy-normalized Pauli-Lubanski operator
//! ([`spinops::restricted_spin`] with [`OperatorKind::NormalizedPL`]); the
//! plane-wave bispinor route ([`dirac::dispin_expectation`]) reaches the same
//! restriction independently and serves as a cross-check.
//!
//! On top of these sit the expectation-table reconstruction of spin matrices
//! ([`reconstruct`]), two-outcome POVMs ([`spinops::povm`]) and two-particle
//! CHSH correlations with an optimizer and a closed-form maximum ([`bell`]).

#![forbid(unsafe_code)]

pub mod bell;
pub mod dirac;
mod error;
pub mod linalg;
pub mod lorentz;
pub mod reconstruct;
pub mod spinops;

pub use error::{Error, Result};
pub use spinops::OperatorKind;

pub use nalgebra;
pub use num_complex;
