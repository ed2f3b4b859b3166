//! Deterministic state-vector model of a two-source optical bench carrying
//! path-polarization entangled classical light.
//!
//! The bench state lives in a 16-dimensional space
//! `path₁ ⊗ pol₁ ⊗ path₂ ⊗ pol₂` (see [`basis`]). Optical elements act as
//! 2×2 matrices embedded at a slot. [`bench`] evolves the source states
//! through the chain, [`observables`] and [`correlations`] evaluate
//! intensity correlations both by operator expectation and in closed form,
//! [`contextuality`] builds CHSH-type functionals, and [`detector`] models a
//! single-detector readout.

pub mod basis;
pub mod bench;
pub mod contextuality;
pub mod correlations;
pub mod detector;
pub mod elements;
pub mod error;
pub mod fit;
pub mod linalg;
pub mod observables;

pub use bench::{apply_bs_prime, evolve_prestate, Bench, BenchState, PhaseSetting, SourceSpec, Stage};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexScalar, ComplexVector, TOL};
