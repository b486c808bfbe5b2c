//! Exact Fock-space laboratory for comparing coherence properties of boson
//! and fermion fields on a handful of modes.
//!
//! Built bottom-up: [`fock`] holds bases, state vectors and ladder
//! operators; [`generator`] exponentiates quadratic generators; the
//! remaining modules construct states and evaluate correlators on them.

pub mod chaotic;
pub mod coherent;
pub mod correlators;
pub mod coupler;
pub mod error;
pub mod fixtures;
pub mod fock;
pub mod generator;
pub mod modes;
pub mod permutation;
pub mod propositions;

pub use error::{Error, Result};
pub use fock::{BasisSet, BasisState, Statistics, StateVector, C64};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
