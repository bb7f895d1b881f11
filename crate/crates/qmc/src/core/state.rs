use crate::core::linalg::*;
use crate::error::{QmcError, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

/// Positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(QmcError::DimensionMismatch(format!(
                "density matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = m.norm().max(1.0);
        let ah = antihermitian_norm(&m);
        if ah > HERMITIAN_TOL * scale {
            return Err(QmcError::NotDensity(format!("anti-Hermitian part {ah:.3e}")));
        }
        let h = hermitian_part(&m);
        let tr = h.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(QmcError::NotDensity(format!("trace {tr}")));
        }
        let (vals, _) = eigh(&h);
        let min = vals.last().copied().unwrap_or(0.0);
        if min < -POSITIVITY_TOL {
            return Err(QmcError::NotDensity(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix(h))
    }

    /// Normalise a positive matrix by its trace.
    pub fn from_unnormalized(m: &ComplexMatrix) -> Result<Self> {
        let tr = m.trace().re;
        if tr <= 0.0 {
            return Err(QmcError::NotDensity("non-positive trace".into()));
        }
        Self::new(hermitian_part(m) / cr(tr))
    }

    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        let n = psi.norm();
        if n == 0.0 {
            return Err(QmcError::NotDensity("zero vector".into()));
        }
        let v = psi / cr(n);
        Ok(DensityMatrix(projector(&v)))
    }

    pub fn basis(d: usize, i: usize) -> Self {
        DensityMatrix(projector(&ket(d, i)))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix(identity(d) / cr(d as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// `Tr(ρ X)`.
    pub fn expect(&self, x: &ComplexMatrix) -> C64 {
        trace_product(&self.0, x)
    }

    /// Eigenvalues in decreasing order.
    pub fn spectrum(&self) -> Vec<f64> {
        eigh(&self.0).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum().last().copied().unwrap_or(0.0)
    }

    /// `½ ||ρ - σ||_1`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let (vals, _) = eigh(&(&self.0 - &other.0));
        0.5 * vals.iter().map(|x| x.abs()).sum::<f64>()
    }

    /// `Tr(ρ σ)`.
    pub fn overlap(&self, other: &DensityMatrix) -> f64 {
        trace_product(&self.0, &other.0).re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(DensityMatrix::new(real_matrix(2, 2, &[0.5, 0.0, 0.0, 0.5])).is_ok());
        assert!(DensityMatrix::new(real_matrix(2, 2, &[1.5, 0.0, 0.0, -0.5])).is_err());
        assert!(DensityMatrix::new(real_matrix(2, 2, &[0.5, 0.1, 0.0, 0.5])).is_err());
        assert!(DensityMatrix::new(real_matrix(2, 2, &[0.6, 0.0, 0.0, 0.5])).is_err());
    }

    #[test]
    fn trace_distance_of_orthogonal_pure_states() {
        let a = DensityMatrix::basis(3, 0);
        let b = DensityMatrix::basis(3, 2);
        assert!((a.trace_distance(&b) - 1.0).abs() < 1e-12);
        assert!(a.overlap(&b).abs() < 1e-12);
    }
}
