//! Isometries, transfer operators, states and the basic linear algebra they rest on.

pub mod channel;
pub mod isometry;
pub mod json;
pub mod linalg;
pub mod random;
pub mod state;

pub use channel::{channel, sandwich_map, Picture, Superoperator};
pub use isometry::{lift_left, stack, unstack, word_operators, Isometry};
pub use linalg::{ComplexMatrix, ComplexVector, C64};
pub use state::DensityMatrix;

/// Build an isometry from its Kraus operators with the default tolerance.
pub fn isometry_from_kraus(kraus: Vec<ComplexMatrix>) -> crate::Result<Isometry> {
    Isometry::from_kraus(kraus)
}

/// Square root of a positive semidefinite matrix.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> crate::Result<ComplexMatrix> {
    linalg::sqrt_psd(m, 1e-10)
}
