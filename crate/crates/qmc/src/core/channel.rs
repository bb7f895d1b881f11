use serde::{Deserialize, Serialize};

use crate::core::isometry::Isometry;
use crate::core::linalg::*;
use crate::error::{QmcError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Picture {
    /// Acts on observables: `X ↦ Σ K* X K`.
    Heisenberg,
    /// Acts on states: `ρ ↦ Σ K ρ K*`.
    Schrodinger,
}

/// Linear map on `d1 × d2` matrices, stored as a `(d1 d2) × (d1 d2)` matrix
/// acting on column-major vectorisations.
#[derive(Debug, Clone)]
pub struct Superoperator {
    rows: usize,
    cols: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn from_matrix(rows: usize, cols: usize, matrix: ComplexMatrix) -> Self {
        assert_eq!(matrix.nrows(), rows * cols);
        assert_eq!(matrix.ncols(), rows * cols);
        Superoperator { rows, cols, matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((x.nrows(), x.ncols()), (self.rows, self.cols));
        unvectorize(&(&self.matrix * vectorize(x)), self.rows, self.cols)
    }

    /// Adjoint with respect to the Hilbert-Schmidt inner product.
    pub fn dual(&self) -> Superoperator {
        Superoperator::from_matrix(self.rows, self.cols, self.matrix.adjoint())
    }

    pub fn compose(&self, other: &Superoperator) -> Superoperator {
        Superoperator::from_matrix(self.rows, self.cols, &self.matrix * &other.matrix)
    }

    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        eigenvalues_by_modulus(&self.matrix)
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        spectral_radius(&self.matrix)
    }
}

/// Transfer operator of `V` in the requested picture.
pub fn channel(iso: &Isometry, picture: Picture) -> Superoperator {
    let d = iso.d();
    let mut m = zeros(d * d, d * d);
    for k in iso.kraus() {
        match picture {
            Picture::Heisenberg => m += kron(&k.transpose(), &k.adjoint()),
            Picture::Schrodinger => m += kron(&k.conjugate(), k),
        }
    }
    Superoperator::from_matrix(d, d, m)
}

/// Mixed transfer map `X ↦ V1*(X ⊗ 1)V2 = Σ K1_u* X K2_u` on `d1 × d2` matrices.
pub fn sandwich_map(iso1: &Isometry, iso2: &Isometry) -> Result<Superoperator> {
    if iso1.k() != iso2.k() {
        return Err(QmcError::UnitDimMismatch(format!(
            "unit dimensions {} and {} differ",
            iso1.k(),
            iso2.k()
        )));
    }
    let (d1, d2) = (iso1.d(), iso2.d());
    let mut m = zeros(d1 * d2, d1 * d2);
    for (a, b) in iso1.kraus().iter().zip(iso2.kraus()) {
        m += kron(&b.transpose(), &a.adjoint());
    }
    Ok(Superoperator::from_matrix(d1, d2, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Isometry {
        Isometry::from_kraus(vec![
            real_matrix(2, 2, &[0.0, 0.6, 0.0, 0.0]),
            complex_matrix(2, 2, &[cr(0.0), c(0.0, 0.8), cr(1.0), cr(0.0)]),
        ])
        .unwrap()
    }

    #[test]
    fn pictures_are_dual() {
        let v = sample();
        let t = channel(&v, Picture::Heisenberg);
        let ts = channel(&v, Picture::Schrodinger);
        assert!((t.dual().matrix() - ts.matrix()).norm() < 1e-12);
        let x = complex_matrix(2, 2, &[cr(1.0), c(0.3, 0.2), c(-0.1, 0.0), cr(2.0)]);
        assert!((t.apply(&x) - v.heisenberg(&x)).norm() < 1e-12);
        assert!((ts.apply(&x) - v.schrodinger(&x)).norm() < 1e-12);
    }

    #[test]
    fn sandwich_of_same_isometry_is_heisenberg() {
        let v = sample();
        let s = sandwich_map(&v, &v).unwrap();
        assert!((s.matrix() - channel(&v, Picture::Heisenberg).matrix()).norm() < 1e-12);
    }

    #[test]
    fn unit_mismatch_rejected() {
        let v = sample();
        let w = v.blocked(2);
        assert_eq!(sandwich_map(&v, &w).unwrap_err().kind(), "UnitDimMismatch");
    }
}
