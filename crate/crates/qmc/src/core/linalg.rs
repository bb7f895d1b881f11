//! Dense complex linear algebra helpers on top of nalgebra.
//!
//! Vectorisation is column-major throughout: `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QmcError, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `e^{i t}`.
#[inline]
pub fn cis(t: f64) -> C64 {
    C64::from_polar(1.0, t)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(r, c)
}

/// Build a matrix from row-major real parts.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    assert_eq!(data.len(), rows * cols);
    ComplexMatrix::from_fn(rows, cols, |i, j| cr(data[i * cols + j]))
}

/// Build a matrix from row-major complex entries.
pub fn complex_matrix(rows: usize, cols: usize, data: &[C64]) -> ComplexMatrix {
    assert_eq!(data.len(), rows * cols);
    ComplexMatrix::from_fn(rows, cols, |i, j| data[i * cols + j])
}

pub fn ket(d: usize, i: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(d);
    v[i] = ONE;
    v
}

pub fn projector(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

pub fn vectorize(m: &ComplexMatrix) -> ComplexVector {
    ComplexVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &ComplexVector, rows: usize, cols: usize) -> ComplexMatrix {
    assert_eq!(v.len(), rows * cols);
    ComplexMatrix::from_column_slice(rows, cols, v.as_slice())
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Which factor of a bipartite space `C^{d1} ⊗ C^{d2}` to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

/// Partial trace on `C^{d1} ⊗ C^{d2}` (first factor most significant).
pub fn partial_trace(m: &ComplexMatrix, d1: usize, d2: usize, keep: Keep) -> ComplexMatrix {
    assert_eq!(m.nrows(), d1 * d2);
    assert_eq!(m.ncols(), d1 * d2);
    match keep {
        Keep::First => ComplexMatrix::from_fn(d1, d1, |a, b| {
            (0..d2).map(|s| m[(a * d2 + s, b * d2 + s)]).sum()
        }),
        Keep::Second => ComplexMatrix::from_fn(d2, d2, |a, b| {
            (0..d1).map(|s| m[(s * d2 + a, s * d2 + b)]).sum()
        }),
    }
}

/// Hilbert-Schmidt inner product `Tr(A* B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `Tr(A B)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    assert_eq!(a.ncols(), b.nrows());
    assert_eq!(a.nrows(), b.ncols());
    let mut s = ZERO;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * cr(0.5)
}

/// Frobenius norm of the anti-Hermitian part `(M - M*)/2`.
pub fn antihermitian_norm(m: &ComplexMatrix) -> f64 {
    ((m - m.adjoint()) * cr(0.5)).norm()
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values sorted in decreasing order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Operator (spectral) norm.
pub fn op_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Trace (nuclear) norm.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().sum()
}

/// Thin SVD with singular values sorted in decreasing order.
pub struct SortedSvd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v_t: ComplexMatrix,
}

pub fn svd_sorted(m: &ComplexMatrix) -> SortedSvd {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
    });
    let s = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u = ComplexMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
    let v_t = ComplexMatrix::from_fn(order.len(), v_t.ncols(), |r, c| v_t[(order[r], c)]);
    SortedSvd { u, s, v_t }
}

/// All eigenvalues of a square complex matrix (complex Schur form).
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    assert!(m.is_square());
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let schur = m
        .clone()
        .try_schur(1e-15, 100_000)
        .ok_or_else(|| QmcError::Numerical("Schur decomposition did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Eigenvalues sorted by decreasing modulus, ties broken by argument.
pub fn eigenvalues_by_modulus(m: &ComplexMatrix) -> Result<Vec<C64>> {
    let mut ev = eigenvalues(m)?;
    ev.sort_by(|a, b| {
        b.norm()
            .partial_cmp(&a.norm())
            .unwrap()
            .then(a.arg().partial_cmp(&b.arg()).unwrap())
    });
    Ok(ev)
}

pub fn spectral_radius(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in decreasing order.
pub fn eigh(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let h = hermitian_part(m);
    let eig = h.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Square root of a positive semidefinite matrix; eigenvalues below `-tol` are rejected.
pub fn sqrt_psd(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let (vals, vecs) = eigh(m);
    if let Some(&min) = vals.last() {
        if min < -tol {
            return Err(QmcError::NotPsd { min_eig: min });
        }
    }
    let d = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
        vals.len(),
        vals.iter().map(|&x| cr(x.max(0.0).sqrt())),
    ));
    Ok(&vecs * d * vecs.adjoint())
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let (vals, vecs) = eigh(m);
    let d = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
        vals.len(),
        vals.iter().map(|&x| cr(f(x))),
    ));
    &vecs * d * vecs.adjoint()
}

/// Matrix exponential `exp(i H)` of a Hermitian generator.
pub fn unitary_from_hermitian(h: &ComplexMatrix) -> ComplexMatrix {
    let (vals, vecs) = eigh(h);
    let d = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
        vals.len(),
        vals.iter().map(|&x| cis(x)),
    ));
    &vecs * d * vecs.adjoint()
}

/// Right null vector of `m` (unit norm) together with the two smallest singular values.
pub struct NullVector {
    pub vector: ComplexVector,
    pub sigma_min: f64,
    pub sigma_next: f64,
}

pub fn null_vector(m: &ComplexMatrix) -> NullVector {
    let svd = svd_sorted(m);
    let n = m.ncols();
    assert!(m.nrows() >= n, "null_vector expects a tall or square matrix");
    let last = n - 1;
    let vector = ComplexVector::from_fn(n, |i, _| svd.v_t[(last, i)].conj());
    NullVector {
        vector,
        sigma_min: svd.s[last],
        sigma_next: if n >= 2 { svd.s[last - 1] } else { f64::INFINITY },
    }
}

/// Isometric factor `U V*` of the polar decomposition of a full-column-rank matrix.
pub fn polar_isometry(m: &ComplexMatrix) -> (ComplexMatrix, f64) {
    let svd = svd_sorted(m);
    let smin = svd.s.last().copied().unwrap_or(0.0);
    (&svd.u * &svd.v_t, smin)
}

/// Least-squares solution via the SVD. Returns `(x, sigma_min, sigma_max)`.
pub fn lstsq(a: &ComplexMatrix, b: &ComplexVector) -> (ComplexVector, f64, f64) {
    let svd = svd_sorted(a);
    let smax = svd.s.first().copied().unwrap_or(0.0);
    let smin = svd.s.last().copied().unwrap_or(0.0);
    let cutoff = smax * 1e-14;
    let utb = svd.u.adjoint() * b;
    let mut y = ComplexVector::zeros(svd.s.len());
    for (i, &s) in svd.s.iter().enumerate() {
        if s > cutoff {
            y[i] = utb[i] / s;
        }
    }
    (svd.v_t.adjoint() * y, smin, smax)
}

/// Modified Gram-Schmidt; drops vectors whose residual norm falls below `tol`.
pub fn orthonormalize(vectors: &[ComplexVector], tol: f64) -> Vec<ComplexVector> {
    let mut basis: Vec<ComplexVector> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let coeff = b.dotc(&w);
                w -= b * coeff;
            }
        }
        let n = w.norm();
        if n > tol {
            basis.push(w / cr(n));
        }
    }
    basis
}

/// Rank of a set of complex matrices viewed as vectors of a *real* vector space.
pub fn real_rank(mats: &[ComplexMatrix], tol: f64) -> usize {
    if mats.is_empty() {
        return 0;
    }
    let len = mats[0].len();
    let m = nalgebra::DMatrix::<f64>::from_fn(2 * len, mats.len(), |r, c| {
        let z = mats[c].as_slice()[r % len];
        if r < len {
            z.re
        } else {
            z.im
        }
    });
    let sv = m.svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > tol * smax.max(1.0)).count()
}

/// Real basis of `C^{r×c}`: `E_ij` followed by `i E_ij`.
pub fn real_basis(rows: usize, cols: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(2 * rows * cols);
    for phase in [ONE, I] {
        for j in 0..cols {
            for i in 0..rows {
                let mut e = zeros(rows, cols);
                e[(i, j)] = phase;
                out.push(e);
            }
        }
    }
    out
}

/// `M^n` by repeated squaring.
pub fn matrix_power(m: &ComplexMatrix, mut n: usize) -> ComplexMatrix {
    let mut result = identity(m.nrows());
    let mut base = m.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        base = &base * &base;
        n >>= 1;
    }
    result
}

/// Remove a global phase: the first entry (column-major) with modulus above `tol` becomes real positive.
pub fn canonical_phase(m: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    match m.iter().find(|z| z.norm() > tol) {
        Some(z) => m * (z.conj() / z.norm()),
        None => m.clone(),
    }
}

/// Smallest distance between `z` and an element of the list.
pub fn nearest(z: C64, list: &[C64]) -> f64 {
    list.iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vec_identity_holds() {
        let a = complex_matrix(2, 2, &[c(1.0, 2.0), c(0.0, 1.0), c(-1.0, 0.5), c(3.0, 0.0)]);
        let x = complex_matrix(2, 2, &[c(0.3, 0.0), c(1.0, -1.0), c(2.0, 0.0), c(0.0, 0.7)]);
        let b = complex_matrix(2, 2, &[c(0.0, 1.0), c(1.0, 0.0), c(1.0, 1.0), c(-2.0, 0.0)]);
        let lhs = vectorize(&(&a * &x * &b));
        let rhs = kron(&b.transpose(), &a) * vectorize(&x);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn schur_eigenvalues_of_triangular_and_rotation() {
        let r = real_matrix(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let mut ev = eigenvalues(&r).unwrap();
        ev.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((ev[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = real_matrix(2, 2, &[0.7, 0.1, 0.1, 0.3]);
        let b = real_matrix(3, 3, &[0.5, 0.0, 0.0, 0.0, 0.25, 0.0, 0.0, 0.0, 0.25]);
        let ab = kron(&a, &b);
        assert!((partial_trace(&ab, 2, 3, Keep::First) - &a).norm() < 1e-12);
        assert!((partial_trace(&ab, 2, 3, Keep::Second) - &b).norm() < 1e-12);
    }

    #[test]
    fn sqrt_psd_squares_back() {
        let m = complex_matrix(2, 2, &[cr(2.0), c(0.5, 0.5), c(0.5, -0.5), cr(1.0)]);
        let s = sqrt_psd(&m, 1e-12).unwrap();
        assert!((&s * &s - &m).norm() < 1e-12);
        let neg = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(sqrt_psd(&neg, 1e-12).is_err());
    }

    #[test]
    fn null_vector_finds_kernel() {
        let m = real_matrix(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0]);
        let nv = null_vector(&m);
        assert!(nv.sigma_min < 1e-12);
        assert!((&m * &nv.vector).norm() < 1e-12);
    }

    #[test]
    fn real_rank_counts_real_directions() {
        let a = real_matrix(1, 1, &[1.0]);
        let b = complex_matrix(1, 1, &[I]);
        assert_eq!(real_rank(&[a.clone(), b.clone()], 1e-10), 2);
        assert_eq!(real_rank(&[a.clone(), a * cr(2.0)], 1e-10), 1);
    }
}
