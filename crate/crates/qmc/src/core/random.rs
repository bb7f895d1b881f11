//! Seeded random matrices for tests, examples and property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::core::isometry::{unstack, Isometry};
use crate::core::linalg::*;

/// Deterministic generator for a `(seed, stream)` pair.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

pub fn gaussian_vector<R: Rng>(n: usize, rng: &mut R) -> ComplexVector {
    ComplexVector::from_fn(n, |_, _| {
        c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

/// Haar-distributed isometry `C^cols -> C^rows`.
pub fn haar_isometry_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    polar_isometry(&gaussian_matrix(rows, cols, rng)).0
}

pub fn haar_unitary<R: Rng>(d: usize, rng: &mut R) -> ComplexMatrix {
    haar_isometry_matrix(d, d, rng)
}

pub fn random_isometry<R: Rng>(d: usize, k: usize, rng: &mut R) -> Isometry {
    let v = haar_isometry_matrix(d * k, d, rng);
    Isometry::from_kraus(unstack(&v, d, k)).expect("polar factor is an isometry")
}

pub fn random_hermitian<R: Rng>(d: usize, rng: &mut R) -> ComplexMatrix {
    hermitian_part(&gaussian_matrix(d, d, rng))
}

/// Full-rank random state (Hilbert-Schmidt measure).
pub fn random_density<R: Rng>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix(d, d, rng);
    let m = &g * g.adjoint();
    let tr = m.trace();
    m / tr
}

pub fn random_unit_vector<R: Rng>(d: usize, rng: &mut R) -> ComplexVector {
    let v = gaussian_vector(d, rng);
    let n = v.norm();
    v / cr(n)
}

/// Isometry with a nontrivial invariant subspace: Kraus operators are block
/// upper triangular in a random basis, so the span of the first `d1` basis
/// vectors is mapped into itself.
pub fn random_reducible_isometry<R: Rng>(d: usize, k: usize, d1: usize, rng: &mut R) -> Isometry {
    assert!(d1 >= 1 && d1 < d);
    // Kraus operators whose first d1 columns only populate the first d1 rows.
    let top = haar_isometry_matrix(d1 * k, d1, rng);
    let rest = haar_isometry_matrix(d * k, d - d1, rng);
    // Orthogonalise the remaining columns against the invariant part.
    let mut first = zeros(d * k, d1);
    for u in 0..k {
        for i in 0..d1 {
            for j in 0..d1 {
                first[(u * d + i, j)] = top[(u * d1 + i, j)];
            }
        }
    }
    let proj = &first * first.adjoint();
    let rest = &rest - &proj * &rest;
    let rest = polar_isometry(&rest).0;
    let mut v = zeros(d * k, d);
    v.view_mut((0, 0), (d * k, d1)).copy_from(&first);
    v.view_mut((0, d1), (d * k, d - d1)).copy_from(&rest);
    let w = haar_unitary(d, rng);
    let kraus = unstack(&v, d, k)
        .into_iter()
        .map(|m| &w * m * w.adjoint())
        .collect();
    Isometry::from_kraus(kraus).expect("construction is isometric")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_isometries_are_isometries() {
        let mut r = rng(1, 0);
        for _ in 0..5 {
            assert!(random_isometry(3, 2, &mut r).residual() < 1e-12);
            assert!(random_reducible_isometry(3, 2, 1, &mut r).residual() < 1e-12);
        }
    }

    #[test]
    fn streams_differ_and_repeat() {
        let a: f64 = rng(5, 0).random();
        let b: f64 = rng(5, 1).random();
        let a2: f64 = rng(5, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, a2);
    }
}
