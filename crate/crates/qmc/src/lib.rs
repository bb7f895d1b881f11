//! Output states of quantum Markov chains.
//!
//! A system of dimension `d` interacts with a sequence of fresh `k`-level
//! units through an isometry `V : C^d -> C^d ⊗ C^k`. After `n` steps the
//! units carry a finitely correlated (matrix product) state. This crate
//! covers the ergodic structure of `V`, the gauge symmetry and
//! identifiability of tangent directions, quantum Fisher information,
//! the Gaussian limit of local perturbations, and Monte Carlo trajectories
//! of sequential measurements.

pub mod core;
pub mod ergodic;
mod error;
pub mod gauge;
pub mod gaussian;
pub mod qubit_example;
pub mod statmodel;
pub mod trajectories;

pub use crate::core::{ComplexMatrix, ComplexVector, DensityMatrix, Isometry, Picture, Superoperator, C64};
pub use crate::error::{IrreducibilityCheck, QmcError, Result};
