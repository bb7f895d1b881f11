//! Gauge symmetry `U(1) × PU(d)` of isometries, equivalence witnesses,
//! stabilisers, and the split of tangent vectors into gauge and
//! identifiable parts.

use serde::Serialize;

use crate::core::isometry::{lift_left, stack, unstack};
use crate::core::linalg::*;
use crate::core::{channel, sandwich_map, Isometry, Picture};
use crate::ergodic::{analyze, ErgodicTol, SpectralProfile};
use crate::error::{QmcError, Result};

/// Tolerance on `V*A - A*V` below which raw tangents are symmetrised.
pub const TANGENCY_TOL: f64 = 1e-8;
/// Tolerance on `V*A` for identifiable inputs.
pub const IDENTIFIABLE_TOL: f64 = 1e-8;

/// Group element `(c, W)` acting as `V ↦ c̄ (W ⊗ 1) V W*`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeElement {
    phase: C64,
    unitary: ComplexMatrix,
}

impl GaugeElement {
    pub fn new(phase: C64, unitary: ComplexMatrix) -> Result<Self> {
        if (phase.norm() - 1.0).abs() > 1e-12 {
            return Err(QmcError::InvalidInput(format!("phase {phase} is not of unit modulus")));
        }
        if !unitary.is_square() {
            return Err(QmcError::DimensionMismatch("unitary must be square".into()));
        }
        let defect = op_norm(&(unitary.adjoint() * &unitary - identity(unitary.nrows())));
        if defect > 1e-10 {
            return Err(QmcError::InvalidInput(format!("W is not unitary (defect {defect:.3e})")));
        }
        Ok(GaugeElement { phase, unitary })
    }

    pub fn identity(d: usize) -> Self {
        GaugeElement { phase: ONE, unitary: identity(d) }
    }

    pub fn random<R: rand::Rng>(d: usize, rng: &mut R) -> Self {
        let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        GaugeElement {
            phase: cis(t),
            unitary: crate::core::random::haar_unitary(d, rng),
        }
    }

    pub fn phase(&self) -> C64 {
        self.phase
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    /// Group product: acting with the result equals acting with `other` then `self`.
    pub fn compose(&self, other: &GaugeElement) -> GaugeElement {
        GaugeElement {
            phase: self.phase * other.phase,
            unitary: &self.unitary * &other.unitary,
        }
    }

    pub fn inverse(&self) -> GaugeElement {
        GaugeElement {
            phase: self.phase.conj(),
            unitary: self.unitary.adjoint(),
        }
    }

    /// Transport a tangent vector at `V` to `g·V`.
    pub fn transport_tangent(&self, a: &ComplexMatrix, k: usize) -> ComplexMatrix {
        lift_left(&self.unitary, a, k) * self.unitary.adjoint() * self.phase.conj()
    }
}

/// `g·V = c̄ (W ⊗ 1) V W*`.
pub fn act(g: &GaugeElement, iso: &Isometry) -> Result<Isometry> {
    if g.unitary.nrows() != iso.d() {
        return Err(QmcError::DimensionMismatch(format!(
            "gauge unitary is {}x{}, system dimension is {}",
            g.unitary.nrows(),
            g.unitary.nrows(),
            iso.d()
        )));
    }
    let w = &g.unitary;
    let wa = w.adjoint();
    let kraus = iso
        .kraus()
        .iter()
        .map(|k| w * k * &wa * g.phase.conj())
        .collect();
    Isometry::from_kraus(kraus)
}

/// Witness `(c, W)` of output equivalence: `(W ⊗ 1) V₂ = c V₁ W`.
#[derive(Debug, Clone)]
pub struct Witness {
    pub phase: C64,
    pub unitary: ComplexMatrix,
    pub residual: f64,
}

impl Witness {
    /// The group element `g` with `g·V₁ = V₂`.
    pub fn gauge_element(&self) -> GaugeElement {
        GaugeElement {
            phase: self.phase.conj(),
            unitary: self.unitary.adjoint(),
        }
    }
}

/// Decide whether two irreducible isometries generate the same stationary
/// output and, if so, return a witness in canonical gauge (first nonzero
/// entry of the first column of `W` real positive).
pub fn equivalence_witness(iso1: &Isometry, iso2: &Isometry, tol: f64) -> Result<Option<Witness>> {
    analyze(iso1, ErgodicTol::default())?;
    analyze(iso2, ErgodicTol::default())?;
    if iso1.d() != iso2.d() {
        return Err(QmcError::DimensionMismatch(format!(
            "system dimensions {} and {} differ; equivalent irreducible chains have equal dimension",
            iso1.d(),
            iso2.d()
        )));
    }
    let t12 = sandwich_map(iso1, iso2)?;
    let ev = t12.eigenvalues()?;
    let c = ev[0];
    if c.norm() < 1.0 - tol {
        return Ok(None);
    }
    let d = iso1.d();
    let nv = null_vector(&(t12.matrix() - identity(d * d) * c));
    let f = unvectorize(&nv.vector, d, d);
    let g = f.adjoint() * &f;
    let s = g.trace().re / d as f64;
    let defect = op_norm(&(&g / cr(s) - identity(d)));
    if defect > 1e-6 {
        return Err(QmcError::WitnessInconsistent(format!(
            "peripheral eigenvector is not proportional to a unitary (defect {defect:.3e})"
        )));
    }
    let (w, _) = polar_isometry(&f);
    let w = canonical_phase(&w, 1e-10);
    let phase = c / c.norm();
    let lhs = lift_left(&w, &iso2.matrix(), iso2.k());
    let rhs = iso1.matrix() * &w * phase;
    let residual = max_abs(&(lhs - rhs));
    if residual > 1e-8 {
        return Err(QmcError::WitnessInconsistent(format!(
            "(W ⊗ 1)V₂ - cV₁W has size {residual:.3e}"
        )));
    }
    Ok(Some(Witness { phase, unitary: w, residual }))
}

/// Cyclic stabiliser `{(γ^m, Z^m)}` of an irreducible isometry.
#[derive(Debug, Clone)]
pub struct Stabiliser {
    pub order: usize,
    pub elements: Vec<GaugeElement>,
    /// Largest deviation of `g·V` from `V` over the elements.
    pub residual: f64,
}

pub fn stabiliser(profile: &SpectralProfile) -> Stabiliser {
    let p = profile.period();
    let v = profile.iso();
    let mut residual: f64 = 0.0;
    let elements: Vec<GaugeElement> = (0..p as i64)
        .map(|m| {
            let g = GaugeElement {
                phase: profile.gamma_pow(m),
                unitary: profile.z_pow(m).clone(),
            };
            let moved = act_unchecked(&g, v);
            residual = residual.max(max_abs(&(moved - v.matrix())));
            g
        })
        .collect();
    Stabiliser { order: p, elements, residual }
}

fn act_unchecked(g: &GaugeElement, iso: &Isometry) -> ComplexMatrix {
    let w = &g.unitary;
    let wa = w.adjoint();
    stack(&iso.kraus().iter().map(|k| w * k * &wa * g.phase.conj()).collect::<Vec<_>>())
}

/// Tangent vector `A` at `V`, using the convention that `V + iAt` is the
/// first-order perturbation; tangency means `V*A` is Hermitian.
#[derive(Debug, Clone)]
pub struct TangentVector {
    base: Isometry,
    a: ComplexMatrix,
}

impl TangentVector {
    /// Accepts `A` if the anti-Hermitian part of `V*A` is below
    /// `TANGENCY_TOL` and removes that part.
    pub fn new(base: &Isometry, a: ComplexMatrix) -> Result<Self> {
        let (d, k) = (base.d(), base.k());
        if a.nrows() != d * k || a.ncols() != d {
            return Err(QmcError::DimensionMismatch(format!(
                "tangent must be {}x{d}, got {}x{}",
                d * k,
                a.nrows(),
                a.ncols()
            )));
        }
        let h = base.adjoint_times(&a);
        let anti = (&h - h.adjoint()) * cr(0.5);
        let residual = anti.norm();
        if residual > TANGENCY_TOL * a.norm().max(1.0) {
            return Err(QmcError::NotTangent { residual });
        }
        let a = a - base.matrix() * anti;
        Ok(TangentVector { base: base.clone(), a })
    }

    /// From a velocity `dV/dθ` of a curve of isometries: `A = -i dV/dθ`.
    pub fn from_velocity(base: &Isometry, velocity: &ComplexMatrix) -> Result<Self> {
        Self::new(base, velocity * c(0.0, -1.0))
    }

    pub fn base(&self) -> &Isometry {
        &self.base
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.a
    }

    /// The velocity `dV/dθ = iA`.
    pub fn velocity(&self) -> ComplexMatrix {
        &self.a * I
    }
}

/// Gauge direction `dμ(θ, K) = θV - (K ⊗ 1)V + VK`.
pub fn dmu(profile: &SpectralProfile, theta: f64, kgen: &ComplexMatrix) -> Result<TangentVector> {
    let d = profile.d();
    if kgen.nrows() != d || kgen.ncols() != d {
        return Err(QmcError::DimensionMismatch(format!("K must be {d}x{d}")));
    }
    let scale = kgen.norm().max(1.0);
    let ah = antihermitian_norm(kgen);
    if ah > 1e-10 * scale {
        return Err(QmcError::GaugeConstraintViolated(format!("K is not Hermitian (defect {ah:.3e})")));
    }
    let tr = profile.rho().expect(kgen).norm();
    if tr > 1e-10 * scale {
        return Err(QmcError::GaugeConstraintViolated(format!("Tr(ρK) = {tr:.3e} is not zero")));
    }
    Ok(TangentVector {
        base: profile.iso().clone(),
        a: dmu_matrix(profile.iso(), theta, &hermitian_part(kgen)),
    })
}

fn dmu_matrix(v: &Isometry, theta: f64, kgen: &ComplexMatrix) -> ComplexMatrix {
    v.matrix() * cr(theta) - v.lift_left(kgen) + v.times_right(kgen)
}

#[derive(Debug, Clone)]
pub struct TangentSplit {
    pub theta: f64,
    pub kgen: ComplexMatrix,
    pub a_id: ComplexMatrix,
    /// `dμ(θ, K)`.
    pub a_gauge: ComplexMatrix,
    /// `||V*a_id||`.
    pub identifiability_residual: f64,
    /// `||A - dμ(θ,K) - a_id||`.
    pub reconstruction_residual: f64,
    /// Condition number of the constrained resolvent system.
    pub condition: f64,
}

/// Decompose `A = dμ(θ, K) + A^id` with `Tr(ρK) = 0` and `V*A^id = 0`.
pub fn split(iso: &Isometry, profile: &SpectralProfile, a: &TangentVector) -> Result<TangentSplit> {
    profile.check_iso(iso)?;
    let d = iso.d();
    let am = a.matrix();
    let h = hermitian_part(&iso.adjoint_times(am));
    let rho = profile.rho().matrix();
    let theta = trace_product(rho, &h).re;
    let x = &h - identity(d) * cr(theta);
    let (kgen, condition) = restricted_resolvent(iso, rho, &x)?;
    let a_gauge = dmu_matrix(iso, theta, &kgen);
    let a_id = am - &a_gauge;
    let identifiability_residual = iso.adjoint_times(&a_id).norm();
    let reconstruction_residual = (am - (&a_gauge + &a_id)).norm();
    Ok(TangentSplit {
        theta,
        kgen,
        a_id,
        a_gauge,
        identifiability_residual,
        reconstruction_residual,
        condition,
    })
}

/// Solve `(Id - T)K = X` on `{Tr(ρK) = 0}` by least squares on the augmented system.
pub(crate) fn restricted_resolvent(iso: &Isometry, rho: &ComplexMatrix, x: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let d = iso.d();
    let t = channel(iso, Picture::Heisenberg);
    let mut aug = zeros(d * d + 1, d * d);
    aug.view_mut((0, 0), (d * d, d * d))
        .copy_from(&(identity(d * d) - t.matrix()));
    for i in 0..d {
        for j in 0..d {
            aug[(d * d, i + j * d)] = rho[(j, i)];
        }
    }
    let mut rhs = ComplexVector::zeros(d * d + 1);
    rhs.rows_mut(0, d * d).copy_from(&vectorize(x));
    let (sol, smin, smax) = lstsq(&aug, &rhs);
    if smin < 1e-12 * smax {
        return Err(QmcError::SingularResolvent { sigma_min: smin });
    }
    Ok((hermitian_part(&unvectorize(&sol, d, d)), smax / smin))
}

fn require_identifiable(profile: &SpectralProfile, a: &ComplexMatrix) -> Result<()> {
    let (d, k) = (profile.d(), profile.k());
    if a.nrows() != d * k || a.ncols() != d {
        return Err(QmcError::DimensionMismatch(format!("tangent must be {}x{d}", d * k)));
    }
    let residual = profile.iso().adjoint_times(a).norm();
    if residual > IDENTIFIABLE_TOL * a.norm().max(1.0) {
        return Err(QmcError::NotIdentifiable { residual });
    }
    Ok(())
}

/// `(A, B) = Tr(ρ A* B)` on identifiable directions; `β = Re`, `σ = Im`.
pub fn tangent_inner(profile: &SpectralProfile, a_id: &ComplexMatrix, b_id: &ComplexMatrix) -> Result<C64> {
    require_identifiable(profile, a_id)?;
    require_identifiable(profile, b_id)?;
    Ok(inner_unchecked(profile, a_id, b_id))
}

pub(crate) fn inner_unchecked(profile: &SpectralProfile, a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    trace_product(profile.rho().matrix(), &(a.adjoint() * b))
}

/// `U(g)^m A = γ^m (Z*^m ⊗ 1) A Z^m`.
pub fn stabiliser_tangent_action(profile: &SpectralProfile, m: i64, a: &ComplexMatrix) -> ComplexMatrix {
    let z = profile.z_pow(m);
    lift_left(&z.adjoint(), a, profile.k()) * z * profile.gamma_pow(m)
}

/// Components `A_m = Σ_a (P_{a+1-m} ⊗ 1) A P_a`, the `γ^m`-eigencomponents of `U(g)`.
pub fn mode_decompose(profile: &SpectralProfile, a: &ComplexMatrix) -> Vec<ComplexMatrix> {
    let p = profile.period() as i64;
    let k = profile.k();
    (0..p)
        .map(|m| {
            let mut out = zeros(a.nrows(), a.ncols());
            for b in 0..p {
                out += lift_left(profile.projection(b + 1 - m), a, k) * profile.projection(b);
            }
            out
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SingularDimension {
    /// Real dimension of the `γ^0` eigenspace, from the block dimensions.
    pub l: usize,
    /// Same quantity from the rank of the mode projection.
    pub l_numeric: usize,
    pub d_id: usize,
    pub d_nonid: usize,
}

pub fn singular_dimension(profile: &SpectralProfile) -> SingularDimension {
    let (d, k, p) = (profile.d(), profile.k(), profile.period());
    let dims = profile.block_dims();
    let l = 2 * (0..p)
        .map(|a| (dims[(a + 1) % p] * k - dims[a]) * dims[a])
        .sum::<usize>();
    let v = profile.iso().matrix();
    let images: Vec<ComplexMatrix> = real_basis(d * k, d)
        .into_iter()
        .map(|e| {
            let e_id = &e - &v * (v.adjoint() * &e);
            mode_decompose(profile, &e_id).swap_remove(0)
        })
        .collect();
    SingularDimension {
        l,
        l_numeric: real_rank(&images, 1e-9),
        d_id: 2 * d * d * (k - 1),
        d_nonid: d * d,
    }
}

/// Real ranks of the identifiable projector and of the gauge image, computed on
/// a real basis of the tangent space.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TangentRanks {
    pub tangent: usize,
    pub identifiable: usize,
    pub gauge: usize,
}

pub fn tangent_ranks(profile: &SpectralProfile) -> Result<TangentRanks> {
    let iso = profile.iso();
    let (d, k) = (iso.d(), iso.k());
    let v = iso.matrix();
    let mut tangents = Vec::new();
    let mut ids = Vec::new();
    let mut gauges = Vec::new();
    for e in real_basis(d * k, d) {
        let h = v.adjoint() * &e;
        let t = &e - &v * ((&h - h.adjoint()) * cr(0.5));
        let tv = TangentVector::new(iso, t.clone())?;
        let s = split(iso, profile, &tv)?;
        tangents.push(t);
        ids.push(s.a_id);
        gauges.push(s.a_gauge);
    }
    Ok(TangentRanks {
        tangent: real_rank(&tangents, 1e-9),
        identifiable: real_rank(&ids, 1e-9),
        gauge: real_rank(&gauges, 1e-9),
    })
}

/// Blocks `A_u` of a stacked tangent.
pub fn tangent_blocks(profile: &SpectralProfile, a: &ComplexMatrix) -> Vec<ComplexMatrix> {
    unstack(a, profile.d(), profile.k())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::random;

    fn shift() -> Isometry {
        Isometry::from_kraus(vec![
            real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            real_matrix(2, 2, &[0.0, 0.0, 1.0, 0.0]),
        ])
        .unwrap()
    }

    #[test]
    fn stabiliser_of_shift() {
        let prof = analyze(&shift(), ErgodicTol::default()).unwrap();
        let s = stabiliser(&prof);
        assert_eq!(s.order, 2);
        assert!(s.residual < 1e-12);
        assert!((s.elements[1].phase() + ONE).norm() < 1e-12);
    }

    #[test]
    fn split_recovers_gauge_direction() {
        let mut r = random::rng(11, 0);
        let v = random::random_isometry(3, 2, &mut r);
        let prof = analyze(&v, ErgodicTol::default()).unwrap();
        let h = random::random_hermitian(3, &mut r);
        let kgen = &h - identity(3) * prof.rho().expect(&h);
        let a = dmu(&prof, 0.7, &kgen).unwrap();
        let s = split(&v, &prof, &a).unwrap();
        assert!((s.theta - 0.7).abs() < 1e-10);
        assert!((s.kgen - kgen).norm() < 1e-9);
        assert!(s.a_id.norm() < 1e-9);
    }

    #[test]
    fn dmu_identity() {
        let prof = analyze(&shift(), ErgodicTol::default()).unwrap();
        let kgen = real_matrix(2, 2, &[0.4, 0.0, 0.0, -0.4]);
        let a = dmu(&prof, 0.0, &kgen).unwrap();
        let lhs = prof.iso().adjoint_times(a.matrix());
        let rhs = &kgen - prof.iso().heisenberg(&kgen);
        assert!((lhs - rhs).norm() < 1e-12);
        assert_eq!(
            dmu(&prof, 0.0, &identity(2)).unwrap_err().kind(),
            "GaugeConstraintViolated"
        );
    }

    #[test]
    fn singular_dimensions() {
        let prof = analyze(&shift(), ErgodicTol::default()).unwrap();
        let sd = singular_dimension(&prof);
        assert_eq!((sd.l, sd.l_numeric, sd.d_id, sd.d_nonid), (4, 4, 8, 4));
        let mut r = random::rng(2, 0);
        let v = random::random_isometry(2, 2, &mut r);
        let prof = analyze(&v, ErgodicTol::default()).unwrap();
        let sd = singular_dimension(&prof);
        assert_eq!((sd.l, sd.l_numeric, sd.d_id), (8, 8, 8));
        let v = random::random_isometry(2, 3, &mut r);
        let prof = analyze(&v, ErgodicTol::default()).unwrap();
        assert_eq!(singular_dimension(&prof).d_id, 16);
    }

    #[test]
    fn witness_of_gauge_copy() {
        let mut r = random::rng(4, 0);
        let v = random::random_isometry(2, 2, &mut r);
        let g = GaugeElement::random(2, &mut r);
        let w = act(&g, &v).unwrap();
        let wit = equivalence_witness(&v, &w, 1e-8).unwrap().unwrap();
        let moved = act(&wit.gauge_element(), &v).unwrap();
        assert!(max_abs(&(moved.matrix() - w.matrix())) < 1e-9);
    }
}
