use crate::core::linalg::*;
use crate::error::{QmcError, Result};

/// Default tolerance for `||V*V - I||` on user supplied isometries.
pub const ISOMETRY_TOL: f64 = 1e-8;

/// Isometry `V : C^d -> C^d ⊗ C^k`, stored as the stacked Kraus matrix.
///
/// Row `u * d + s` of the `(d k) × d` matrix holds system index `s` of unit
/// index `u`, so the `u`-th `d × d` block is the Kraus operator `K_u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    d: usize,
    k: usize,
    kraus: Vec<ComplexMatrix>,
}

impl Isometry {
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::from_kraus_with_tol(kraus, ISOMETRY_TOL)
    }

    pub fn from_kraus_with_tol(kraus: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        if kraus.is_empty() {
            return Err(QmcError::UnitDimMismatch("no Kraus operators".into()));
        }
        let d = kraus[0].nrows();
        if d == 0 {
            return Err(QmcError::DimensionMismatch("empty Kraus operator".into()));
        }
        for (i, m) in kraus.iter().enumerate() {
            if m.nrows() != d || m.ncols() != d {
                return Err(QmcError::DimensionMismatch(format!(
                    "Kraus operator {i} is {}x{}, expected {d}x{d}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        let iso = Isometry { d, k: kraus.len(), kraus };
        let residual = iso.residual();
        if residual > tol {
            return Err(QmcError::NotIsometry { residual, tol });
        }
        Ok(iso)
    }

    /// From the stacked `(d k) × d` matrix in unit-major row order.
    pub fn from_matrix(v: &ComplexMatrix, d: usize, k: usize) -> Result<Self> {
        if v.nrows() != d * k || v.ncols() != d {
            return Err(QmcError::DimensionMismatch(format!(
                "expected a {}x{d} matrix, got {}x{}",
                d * k,
                v.nrows(),
                v.ncols()
            )));
        }
        Self::from_kraus(unstack(v, d, k))
    }

    /// From a `(d k) × d` matrix whose rows are ordered `s * k + u`
    /// (system index most significant), the convention used when writing
    /// `V` as a map into `C^d ⊗ C^k`.
    pub fn from_system_major(v: &ComplexMatrix, d: usize, k: usize) -> Result<Self> {
        Self::from_matrix(&system_major_to_unit_major(v, d, k), d, k)
    }

    /// Build without checking isometry (for internal constructions that are isometric by design).
    pub(crate) fn from_kraus_unchecked(kraus: Vec<ComplexMatrix>) -> Self {
        let d = kraus[0].nrows();
        Isometry { d, k: kraus.len(), kraus }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Stacked `(d k) × d` matrix.
    pub fn matrix(&self) -> ComplexMatrix {
        stack(&self.kraus)
    }

    /// Same matrix with system-major row order.
    pub fn system_major(&self) -> ComplexMatrix {
        unit_major_to_system_major(&self.matrix(), self.d, self.k)
    }

    /// Operator norm of `V*V - 1`.
    pub fn residual(&self) -> f64 {
        let mut g = -identity(self.d);
        for m in &self.kraus {
            g += m.adjoint() * m;
        }
        op_norm(&g)
    }

    /// Heisenberg picture `T(X) = V*(X ⊗ 1)V = Σ K_u* X K_u`.
    pub fn heisenberg(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = zeros(self.d, self.d);
        for m in &self.kraus {
            out += m.adjoint() * x * m;
        }
        out
    }

    /// Schrödinger picture `T_*(ρ) = Σ K_u ρ K_u*`.
    pub fn schrodinger(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = zeros(self.d, self.d);
        for m in &self.kraus {
            out += m * rho * m.adjoint();
        }
        out
    }

    /// Mixed transfer map `X ↦ Σ K_u* X L_u` where `L_u` are the Kraus operators of `other`.
    pub fn sandwich(&self, other: &Isometry, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = zeros(self.d, other.d);
        for (a, b) in self.kraus.iter().zip(&other.kraus) {
            out += a.adjoint() * x * b;
        }
        out
    }

    /// `(X ⊗ 1) V`, i.e. `X K_u` blockwise.
    pub fn lift_left(&self, x: &ComplexMatrix) -> ComplexMatrix {
        stack(&self.kraus.iter().map(|m| x * m).collect::<Vec<_>>())
    }

    /// `V X`.
    pub fn times_right(&self, x: &ComplexMatrix) -> ComplexMatrix {
        stack(&self.kraus.iter().map(|m| m * x).collect::<Vec<_>>())
    }

    /// `V* A` for a `(d k) × d` matrix `A`.
    pub fn adjoint_times(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let blocks = unstack(a, self.d, self.k);
        let mut out = zeros(self.d, a.ncols());
        for (m, b) in self.kraus.iter().zip(&blocks) {
            out += m.adjoint() * b;
        }
        out
    }

    /// Isometry of `b` consecutive steps, unit dimension `k^b`.
    ///
    /// Unit string `(i_1, ..., i_b)` has index `Σ i_t k^{b-t}` and Kraus
    /// operator `K_{i_b} ⋯ K_{i_1}`.
    pub fn blocked(&self, b: usize) -> Isometry {
        Isometry::from_kraus_unchecked(word_operators(&self.kraus, b))
    }

    /// Kraus operators of the conjugate isometry `V*`-elementwise (complex conjugation).
    pub fn conjugate(&self) -> Isometry {
        Isometry::from_kraus_unchecked(self.kraus.iter().map(|m| m.conjugate()).collect())
    }
}

/// All products `K_{i_n} ⋯ K_{i_1}` in lexicographic order of `(i_1, ..., i_n)`.
pub fn word_operators(kraus: &[ComplexMatrix], n: usize) -> Vec<ComplexMatrix> {
    let d = kraus[0].nrows();
    let mut words = vec![identity(d)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(words.len() * kraus.len());
        for w in &words {
            for m in kraus {
                next.push(m * w);
            }
        }
        words = next;
    }
    words
}

/// Stack `d × c` blocks vertically.
pub fn stack(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let r = blocks[0].nrows();
    let c = blocks[0].ncols();
    let mut out = zeros(r * blocks.len(), c);
    for (u, b) in blocks.iter().enumerate() {
        out.view_mut((u * r, 0), (r, c)).copy_from(b);
    }
    out
}

/// Split a `(d k) × c` matrix into its `k` blocks of `d` rows.
pub fn unstack(a: &ComplexMatrix, d: usize, k: usize) -> Vec<ComplexMatrix> {
    assert_eq!(a.nrows(), d * k, "expected {} rows", d * k);
    (0..k).map(|u| a.view((u * d, 0), (d, a.ncols())).into_owned()).collect()
}

/// `(X ⊗ 1_k) A` for a stacked `(d k) × c` matrix.
pub fn lift_left(x: &ComplexMatrix, a: &ComplexMatrix, k: usize) -> ComplexMatrix {
    let d = x.ncols();
    stack(&unstack(a, d, k).iter().map(|b| x * b).collect::<Vec<_>>())
}

pub fn system_major_to_unit_major(v: &ComplexMatrix, d: usize, k: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * k, v.ncols(), |row, col| {
        let (u, s) = (row / d, row % d);
        v[(s * k + u, col)]
    })
}

pub fn unit_major_to_system_major(v: &ComplexMatrix, d: usize, k: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * k, v.ncols(), |row, col| {
        let (s, u) = (row / k, row % k);
        v[(u * d + s, col)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amplitude_damping(g: f64) -> Isometry {
        Isometry::from_kraus(vec![
            real_matrix(2, 2, &[1.0, 0.0, 0.0, (1.0 - g).sqrt()]),
            real_matrix(2, 2, &[0.0, g.sqrt(), 0.0, 0.0]),
        ])
        .unwrap()
    }

    #[test]
    fn rejects_non_isometry() {
        let err = Isometry::from_kraus(vec![real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.5])]).unwrap_err();
        assert_eq!(err.kind(), "NotIsometry");
    }

    #[test]
    fn layout_round_trip() {
        let v = amplitude_damping(0.3);
        let sm = v.system_major();
        let back = Isometry::from_system_major(&sm, 2, 2).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn blocked_is_isometry_and_composes() {
        let v = amplitude_damping(0.4);
        let v3 = v.blocked(3);
        assert_eq!(v3.k(), 8);
        assert!(v3.residual() < 1e-12);
        let x = real_matrix(2, 2, &[0.2, 1.0, -0.3, 0.5]);
        let three = v.heisenberg(&v.heisenberg(&v.heisenberg(&x)));
        assert!((v3.heisenberg(&x) - three).norm() < 1e-12);
    }

    #[test]
    fn adjoint_times_matches_dense() {
        let v = amplitude_damping(0.25);
        let a = v.lift_left(&real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let dense = v.matrix().adjoint() * &a;
        assert!((v.adjoint_times(&a) - dense).norm() < 1e-12);
    }
}
