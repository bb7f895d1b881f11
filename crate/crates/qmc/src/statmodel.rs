//! Finite-n statistics of output states: overlaps through deformed transfer
//! operators, quantum Fisher information, local observables and their
//! asymptotic variance.

use serde::Serialize;

use crate::core::isometry::word_operators;
use crate::core::linalg::*;
use crate::core::{channel, sandwich_map, DensityMatrix, Isometry, Picture, Superoperator};
use crate::ergodic::{checked_pow, SpectralProfile, DEFAULT_TENSOR_CAP};
use crate::error::{QmcError, Result};
use crate::gauge::{inner_unchecked, split, TangentVector};

/// Default cap on the block length of local observables.
pub const DEFAULT_BLOCK_CAP: usize = 3;

/// `X ↦ V_L*(X ⊗ 1)V_R`.
#[derive(Debug, Clone)]
pub struct DeformedChannel {
    left: Isometry,
    right: Isometry,
}

impl DeformedChannel {
    pub fn new(left: &Isometry, right: &Isometry) -> Result<Self> {
        if left.k() != right.k() {
            return Err(QmcError::UnitDimMismatch(format!("{} vs {}", left.k(), right.k())));
        }
        if left.d() != right.d() {
            return Err(QmcError::DimensionMismatch(format!("{} vs {}", left.d(), right.d())));
        }
        Ok(DeformedChannel { left: left.clone(), right: right.clone() })
    }

    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.left.sandwich(&self.right, x)
    }

    /// `T^n(X)`.
    pub fn power_apply(&self, x: &ComplexMatrix, n: usize) -> ComplexMatrix {
        let mut y = x.clone();
        for _ in 0..n {
            y = self.apply(&y);
        }
        y
    }

    pub fn superoperator(&self) -> Superoperator {
        sandwich_map(&self.left, &self.right).expect("dimensions checked")
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        self.superoperator().spectral_radius()
    }
}

fn check_phi(d: usize, phi: &ComplexVector) -> Result<()> {
    if phi.len() != d {
        return Err(QmcError::DimensionMismatch(format!("initial vector has length {}, expected {d}", phi.len())));
    }
    if (phi.norm() - 1.0).abs() > 1e-10 {
        return Err(QmcError::InvalidInput("initial vector must be normalised".into()));
    }
    Ok(())
}

/// `⟨Ψ_{V₁}(n)|Ψ_{V₂}(n)⟩ = ⟨φ|T^n(1)φ⟩` with `T(X) = V₁*(X ⊗ 1)V₂`.
pub fn joint_overlap(iso1: &Isometry, iso2: &Isometry, phi: &ComplexVector, n: usize) -> Result<C64> {
    let t = DeformedChannel::new(iso1, iso2)?;
    check_phi(iso1.d(), phi)?;
    let x = t.power_apply(&identity(iso1.d()), n);
    Ok(phi.dotc(&(x * phi)))
}

/// Brute-force joint state `Σ_𝐢 |𝐢⟩ ⊗ K_𝐢 φ`, entry `𝐢 d + s`.
pub fn joint_state(iso: &Isometry, phi: &ComplexVector, n: usize, cap: usize) -> Result<ComplexVector> {
    let dim = checked_pow(iso.k(), n, cap, "output dimension k^n")?;
    check_phi(iso.d(), phi)?;
    let d = iso.d();
    let words = word_operators(iso.kraus(), n);
    let mut out = ComplexVector::zeros(dim * d);
    for (w, m) in words.iter().enumerate() {
        out.rows_mut(w * d, d).copy_from(&(m * phi));
    }
    Ok(out)
}

/// Polar retraction `V(At) = polar(V + iAt)`.
pub fn retract(iso: &Isometry, a: &ComplexMatrix, t: f64) -> Result<Isometry> {
    let (d, k) = (iso.d(), iso.k());
    if a.nrows() != d * k || a.ncols() != d {
        return Err(QmcError::DimensionMismatch(format!("direction must be {}x{d}", d * k)));
    }
    // First-order isometry defect of V + iAt is t·(V*A - A*V)/i.
    let h = iso.adjoint_times(a);
    let first_order = t.abs() * (&h - h.adjoint()).norm();
    if first_order > 1e-6 {
        return Err(QmcError::RetractionFailure(format!(
            "direction is not tangent: first-order defect {first_order:.3e}"
        )));
    }
    let m = iso.matrix() + a * c(0.0, t);
    let (u, smin) = polar_isometry(&m);
    if smin < 1e-6 {
        return Err(QmcError::RetractionFailure(format!("perturbed matrix is rank deficient (σ_min {smin:.3e})")));
    }
    Isometry::from_matrix(&u, d, k)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct WeakQlanPoint {
    pub n: usize,
    pub overlap: [f64; 2],
    pub prediction: [f64; 2],
    pub error: f64,
}

/// `|⟨Ψ_X(n)|Ψ_Y(n)⟩ - e^{-½β(X-Y,X-Y) + iσ(X,Y)}|` at the perturbations
/// `V(X n^{-1/2})`, `V(Y n^{-1/2})`. With `phase_correct` the trivial phase
/// `e^{i(θ_X - θ_Y)√n}` produced by the pure-phase components is removed.
pub fn weak_qlan_error(
    profile: &SpectralProfile,
    x: &TangentVector,
    y: &TangentVector,
    n: usize,
    phi: &ComplexVector,
    phase_correct: bool,
) -> Result<WeakQlanPoint> {
    let iso0 = profile.iso();
    let sx = split(iso0, profile, x)?;
    let sy = split(iso0, profile, y)?;
    let t = 1.0 / (n as f64).sqrt();
    let vx = retract(iso0, x.matrix(), t)?;
    let vy = retract(iso0, y.matrix(), t)?;
    let mut overlap = joint_overlap(&vx, &vy, phi, n)?;
    if phase_correct {
        let sn = (n as f64).sqrt();
        overlap *= cis((sx.theta - sy.theta) * sn);
    }
    let diff = &sx.a_id - &sy.a_id;
    let beta = inner_unchecked(profile, &diff, &diff).re;
    let sigma = inner_unchecked(profile, &sx.a_id, &sy.a_id).im;
    let prediction = (c(-0.5 * beta, sigma)).exp();
    Ok(WeakQlanPoint {
        n,
        overlap: [overlap.re, overlap.im],
        prediction: [prediction.re, prediction.im],
        error: (overlap - prediction).norm(),
    })
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Finite-n QFI `4(‖∂Ψ‖² - |⟨Ψ|∂Ψ⟩|²)` of the joint state along `A`,
/// from transfer-operator sums with `O(n)` channel applications.
pub fn qfi_finite(a: &TangentVector, phi: &ComplexVector, n: usize) -> Result<f64> {
    let iso = a.base();
    let d = iso.d();
    check_phi(d, phi)?;
    if n == 0 {
        return Ok(0.0);
    }
    // A - sV generates the same family up to a global phase; removing the
    // initial phase rate keeps the O(n²) terms from cancelling numerically.
    let s = phi.dotc(&(iso.adjoint_times(a.matrix()) * phi)).re;
    let am = &(a.matrix() - iso.matrix() * cr(s));
    let h = iso.adjoint_times(am);
    let ata = am.adjoint() * am;
    let blocks = crate::core::unstack(am, d, iso.k());

    // ρ_t = T_*^t(|φ⟩⟨φ|), t = 0..n-1
    let mut rhos = Vec::with_capacity(n);
    let mut r = projector(phi);
    for _ in 0..n {
        let next = iso.schrodinger(&r);
        rhos.push(r);
        r = next;
    }
    let mut first = ZERO;
    let mut diag = ZERO;
    for r in &rhos {
        first += trace_product(r, &h);
        diag += trace_product(r, &ata);
    }
    // S_m = Σ_{s<m} T^s(V*A); cross terms Σ_i Tr(ρ_{i-1} A*(S_{n-i} ⊗ 1)V).
    let mut cross = ZERO;
    let mut s = zeros(d, d);
    let mut ts = h.clone();
    for m in 1..n {
        s += &ts;
        ts = iso.heisenberg(&ts);
        let mut op = zeros(d, d);
        for (au, ku) in blocks.iter().zip(iso.kraus()) {
            op += au.adjoint() * &s * ku;
        }
        // pairs (i, j) with j - i = m: i ranges over 1..=n-m
        let i = n - m;
        cross += trace_product(&rhos[i - 1], &op);
    }
    let norm_sq = diag.re + 2.0 * cross.re;
    Ok(4.0 * (norm_sq - first.norm_sqr()))
}

/// Fidelity finite difference `4(1 - |⟨Ψ_V|Ψ_{V(εA)}⟩|²)/ε²`.
pub fn qfi_fidelity_oracle(a: &TangentVector, phi: &ComplexVector, n: usize, eps: f64) -> Result<f64> {
    let iso = a.base();
    let moved = retract(iso, a.matrix(), eps)?;
    let ov = joint_overlap(iso, &moved, phi, n)?;
    Ok(4.0 * (1.0 - ov.norm_sqr()) / (eps * eps))
}

/// `4 Re Tr(ρ a_id* b_id)`.
pub fn qfi_rate(profile: &SpectralProfile, a: &TangentVector, b: &TangentVector) -> Result<f64> {
    let sa = split(profile.iso(), profile, a)?;
    let sb = split(profile.iso(), profile, b)?;
    Ok(4.0 * inner_unchecked(profile, &sa.a_id, &sb.a_id).re)
}

#[derive(Debug, Clone, Serialize)]
pub struct QfiReport {
    pub n_values: Vec<usize>,
    pub f_n: Vec<f64>,
    pub rate: f64,
    /// `f_n/n - rate`.
    pub residuals: Vec<f64>,
}

pub fn qfi_report(profile: &SpectralProfile, a: &TangentVector, phi: &ComplexVector, ns: &[usize]) -> Result<QfiReport> {
    let rate = qfi_rate(profile, a, a)?;
    let f_n = ns.iter().map(|&n| qfi_finite(a, phi, n)).collect::<Result<Vec<_>>>()?;
    let residuals = ns.iter().zip(&f_n).map(|(&n, f)| f / n as f64 - rate).collect();
    Ok(QfiReport { n_values: ns.to_vec(), f_n, rate, residuals })
}

/// `ψ^{ab}_{ij}(n)[𝐢] = ⟨φ_j^b|K_𝐢|φ_i^a⟩` with weight `π_i^a`.
#[derive(Debug, Clone)]
pub struct ComponentVector {
    pub a: usize,
    pub b: usize,
    pub i: usize,
    pub j: usize,
    pub weight: f64,
    pub vector: ComplexVector,
}

pub fn output_component_vectors(profile: &SpectralProfile, n: usize, cap: usize) -> Result<Vec<ComponentVector>> {
    let iso = profile.iso();
    checked_pow(iso.k(), n, cap, "output dimension k^n")?;
    let words = word_operators(iso.kraus(), n);
    let comps = profile.stationary_components();
    let mut out = Vec::new();
    for ca in comps.iter().flatten() {
        for cb in comps.iter().flatten() {
            let kv: Vec<ComplexVector> = words.iter().map(|w| w * &ca.vector).collect();
            let vector = ComplexVector::from_iterator(kv.len(), kv.iter().map(|x| cb.vector.dotc(x)));
            out.push(ComponentVector {
                a: ca.block,
                b: cb.block,
                i: ca.index,
                j: cb.index,
                weight: ca.weight,
                vector,
            });
        }
    }
    Ok(out)
}

/// `⟨ψ^{ab}_{ij,X}(n)|ψ^{ab}_{ij,Y}(n)⟩ = ⟨φ_i^a|T^n_{X,Y}(|φ_j^b⟩⟨φ_j^b|)|φ_i^a⟩`.
pub fn component_inner(
    iso_x: &Isometry,
    iso_y: &Isometry,
    profile: &SpectralProfile,
    (a, i): (usize, usize),
    (b, j): (usize, usize),
    n: usize,
) -> Result<C64> {
    let t = DeformedChannel::new(iso_x, iso_y)?;
    let phi_a = &profile.component(a, i)?.vector;
    let phi_b = &profile.component(b, j)?.vector;
    let x = t.power_apply(&projector(phi_b), n);
    Ok(phi_a.dotc(&(x * phi_a)))
}

/// `Tr(ρ^out_{V₁}(n) ρ^out_{V₂}(n))` from transfer-operator matrix elements.
pub fn output_overlap_via_transfer(p1: &SpectralProfile, p2: &SpectralProfile, n: usize) -> Result<f64> {
    let t = DeformedChannel::new(p1.iso(), p2.iso())?;
    let c1: Vec<_> = p1.stationary_components().iter().flatten().collect();
    let c2: Vec<_> = p2.stationary_components().iter().flatten().collect();
    let mut total = 0.0;
    for m in &c1 {
        for mp in &c2 {
            let x = t.power_apply(&(&m.vector * mp.vector.adjoint()), n);
            for p in &c1 {
                for pp in &c2 {
                    let v = p.vector.dotc(&(&x * &pp.vector));
                    total += p.weight * pp.weight * v.norm_sqr();
                }
            }
        }
    }
    Ok(total)
}

/// Hermitian observable `q` on `b` consecutive output units.
#[derive(Debug, Clone)]
pub struct LocalObservable {
    k: usize,
    b: usize,
    q: ComplexMatrix,
}

impl LocalObservable {
    pub fn new(k: usize, b: usize, q: ComplexMatrix) -> Result<Self> {
        Self::with_cap(k, b, q, DEFAULT_BLOCK_CAP)
    }

    pub fn with_cap(k: usize, b: usize, q: ComplexMatrix, cap: usize) -> Result<Self> {
        if b == 0 {
            return Err(QmcError::InvalidInput("block length must be positive".into()));
        }
        if b > cap {
            return Err(QmcError::SizeCap { what: "observable block length".into(), needed: b, cap });
        }
        let dim = k.pow(b as u32);
        if q.nrows() != dim || q.ncols() != dim {
            return Err(QmcError::DimensionMismatch(format!("observable must be {dim}x{dim}")));
        }
        let ah = antihermitian_norm(&q);
        if ah > 1e-12 * q.norm().max(1.0) {
            return Err(QmcError::InvalidInput(format!("observable is not Hermitian (defect {ah:.3e})")));
        }
        Ok(LocalObservable { k, b, q: hermitian_part(&q) })
    }

    /// Projector onto a unit vector of `C^{k^b}`.
    pub fn projector(k: usize, b: usize, v: &ComplexVector) -> Result<Self> {
        let n = v.norm();
        Self::new(k, b, projector(&(v / cr(n))))
    }

    /// `|u⟩⟨u|` on a single unit.
    pub fn basis_projector(k: usize, u: usize) -> Self {
        LocalObservable { k, b: 1, q: projector(&ket(k, u)) }
    }

    pub fn k(&self) -> usize {
        self.k
    }
    pub fn block(&self) -> usize {
        self.b
    }
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.q
    }

    pub fn shifted(&self, c: f64) -> LocalObservable {
        LocalObservable { k: self.k, b: self.b, q: &self.q + identity(self.q.nrows()) * cr(c) }
    }
}

/// `Σ_{𝐢𝐣} q_{𝐢𝐣} K_𝐢* X K_𝐣` over `b` steps.
fn block_heisenberg(words: &[ComplexMatrix], q: &ComplexMatrix, x: &ComplexMatrix) -> ComplexMatrix {
    let d = x.nrows();
    let xk: Vec<ComplexMatrix> = words.iter().map(|w| x * w).collect();
    let mut out = zeros(d, d);
    for (i, wi) in words.iter().enumerate() {
        let mut acc = zeros(d, d);
        for (j, xj) in xk.iter().enumerate() {
            let qij = q[(i, j)];
            if qij != ZERO {
                acc += xj * qij;
            }
        }
        out += wi.adjoint() * acc;
    }
    out
}

fn check_observable(profile: &SpectralProfile, q: &LocalObservable) -> Result<()> {
    if q.k != profile.k() {
        return Err(QmcError::UnitDimMismatch(format!("observable acts on k = {}, chain has k = {}", q.k, profile.k())));
    }
    Ok(())
}

/// `m_V(Q) = Tr(ρ V(b)*(1 ⊗ q)V(b))`.
pub fn stationary_mean(profile: &SpectralProfile, q: &LocalObservable) -> Result<f64> {
    check_observable(profile, q)?;
    let words = word_operators(profile.iso().kraus(), q.b);
    let f = block_heisenberg(&words, &q.q, &identity(profile.d()));
    Ok(profile.rho().expect(&f).re)
}

#[derive(Debug, Clone, Serialize)]
pub struct VarianceReport {
    pub sigma2: f64,
    pub mean: f64,
    /// Centered autocovariances `c_0, ..., c_{b-1}` of overlapping windows.
    pub short_lags: Vec<f64>,
    /// `Σ_{l≥b} c_l`, summed in the Abel/Cesàro sense.
    pub tail: f64,
    pub condition: f64,
}

/// Asymptotic variance `σ²(Q) = c_0 + 2 Σ_{l≥1} c_l`, the tail summed in
/// closed form through the peripheral projections and the reduced resolvent.
pub fn asymptotic_variance(profile: &SpectralProfile, q: &LocalObservable) -> Result<VarianceReport> {
    asymptotic_variance_with_cap(profile, q, DEFAULT_TENSOR_CAP)
}

pub fn asymptotic_variance_with_cap(profile: &SpectralProfile, q: &LocalObservable, cap: usize) -> Result<VarianceReport> {
    check_observable(profile, q)?;
    let iso = profile.iso();
    let (d, k, b) = (iso.d(), iso.k(), q.b);
    checked_pow(k, 2 * b - 1, cap, "overlapping window dimension k^(2b-1)")?;
    let mean = stationary_mean(profile, q)?;
    let qc = &q.q - identity(q.q.nrows()) * cr(mean);
    let rho = profile.rho();

    let mut short_lags = Vec::with_capacity(b);
    for l in 0..b {
        let kl = k.pow(l as u32);
        let q1 = kron(&qc, &identity(kl));
        let q2 = kron(&identity(kl), &qc);
        let sym = (&q1 * &q2 + &q2 * &q1) * cr(0.5);
        let words = word_operators(iso.kraus(), b + l);
        short_lags.push(rho.expect(&block_heisenberg(&words, &sym, &identity(d))).re);
    }

    let words = word_operators(iso.kraus(), b);
    let f = block_heisenberg(&words, &qc, &identity(d));
    let p = profile.period();
    let mut tail = ZERO;
    let mut f_dec = f.clone();
    for kk in 1..p as i64 {
        let coeff = trace_product(&profile.peripheral()[kk as usize].j, &f);
        f_dec -= profile.z_pow(kk) * coeff;
        let gk = profile.gamma_pow(kk);
        let head = rho.expect(&block_heisenberg(&words, &qc, profile.z_pow(kk)));
        tail += head * coeff / (ONE - gk);
    }
    f_dec -= identity(d) * rho.expect(&f);
    let (y, condition) = reduced_resolvent(profile, &f_dec)?;
    tail += rho.expect(&block_heisenberg(&words, &qc, &y));

    let sigma2 = short_lags[0] + 2.0 * short_lags[1..].iter().sum::<f64>() + 2.0 * tail.re;
    Ok(VarianceReport { sigma2, mean, short_lags, tail: tail.re, condition })
}

/// `(Id - T + Π)^{-1} X` with `Π` the projection onto the peripheral eigenspace.
fn reduced_resolvent(profile: &SpectralProfile, x: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let d = profile.d();
    let t = channel(profile.iso(), Picture::Heisenberg);
    let mut m = identity(d * d) - t.matrix();
    for mode in profile.peripheral() {
        let zv = vectorize(&mode.z);
        let row = ComplexMatrix::from_fn(1, d * d, |_, c| {
            let (i, j) = (c % d, c / d);
            mode.j[(j, i)]
        });
        m += zv * row;
    }
    let sv = singular_values(&m);
    let condition = sv[0] / sv[sv.len() - 1];
    if condition > 1e12 {
        return Err(QmcError::ResolventIllConditioned { condition });
    }
    let sol = m
        .lu()
        .solve(&vectorize(x))
        .ok_or(QmcError::ResolventIllConditioned { condition })?;
    Ok((unvectorize(&sol, d, d), condition))
}

/// Exact `Var(Σ_{j=1}^N Q^{(j)})/N` for the stationary output and
/// `N = 1..=n_max`, overlapping windows of length `b`.
pub fn finite_window_variances(profile: &SpectralProfile, q: &LocalObservable, n_max: usize) -> Result<Vec<f64>> {
    let rep = asymptotic_variance(profile, q)?;
    let iso = profile.iso();
    let b = q.b;
    let qc = &q.q - identity(q.q.nrows()) * cr(rep.mean);
    let words = word_operators(iso.kraus(), b);
    let f = block_heisenberg(&words, &qc, &identity(iso.d()));
    // c_l for l = 0..n_max-1
    let mut cs = rep.short_lags.clone();
    let mut g = f.clone();
    while cs.len() < n_max {
        cs.push(profile.rho().expect(&block_heisenberg(&words, &qc, &g)).re);
        g = iso.heisenberg(&g);
    }
    cs.truncate(n_max.max(1));
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let nf = n as f64;
        let mut v = cs[0];
        for (l, cl) in cs.iter().enumerate().take(n).skip(1) {
            v += 2.0 * (1.0 - l as f64 / nf) * cl;
        }
        out.push(v);
    }
    Ok(out)
}

/// Dense stationary output state (convenience wrapper).
pub fn stationary_output(profile: &SpectralProfile, n: usize, cap: usize) -> Result<DensityMatrix> {
    crate::ergodic::output_state(profile.iso(), profile.rho(), n, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::random;
    use crate::ergodic::{analyze, ErgodicTol};

    fn shift() -> Isometry {
        Isometry::from_kraus(vec![
            real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            real_matrix(2, 2, &[0.0, 0.0, 1.0, 0.0]),
        ])
        .unwrap()
    }

    #[test]
    fn overlap_matches_brute_force() {
        let mut r = random::rng(9, 0);
        let v1 = random::random_isometry(2, 2, &mut r);
        let v2 = random::random_isometry(2, 2, &mut r);
        let phi = random::random_unit_vector(2, &mut r);
        for n in 1..=5 {
            let a = joint_state(&v1, &phi, n, 4096).unwrap();
            let b = joint_state(&v2, &phi, n, 4096).unwrap();
            let direct = a.dotc(&b);
            let via = joint_overlap(&v1, &v2, &phi, n).unwrap();
            assert!((direct - via).norm() < 1e-12);
        }
    }

    #[test]
    fn shift_variance_vanishes() {
        let prof = analyze(&shift(), ErgodicTol::default()).unwrap();
        let q = LocalObservable::basis_projector(2, 0);
        let rep = asymptotic_variance(&prof, &q).unwrap();
        assert!((rep.mean - 0.5).abs() < 1e-12);
        assert!(rep.sigma2.abs() < 1e-12);
    }

    #[test]
    fn variance_matches_fejer_limit() {
        let mut r = random::rng(12, 0);
        let v = random::random_isometry(3, 2, &mut r);
        let prof = analyze(&v, ErgodicTol::default()).unwrap();
        let q = LocalObservable::new(2, 2, random::random_hermitian(4, &mut r)).unwrap();
        let rep = asymptotic_variance(&prof, &q).unwrap();
        let fe = finite_window_variances(&prof, &q, 4000).unwrap();
        // Fejér weights converge like 1/N.
        assert!((fe[3999] - rep.sigma2).abs() < 2e-2 * rep.sigma2.abs().max(1.0));
        let shifted = asymptotic_variance(&prof, &q.shifted(2.5)).unwrap();
        assert!((shifted.sigma2 - rep.sigma2).abs() < 1e-9);
    }

    #[test]
    fn qfi_matches_fidelity() {
        let mut r = random::rng(21, 0);
        let v = random::random_isometry(2, 2, &mut r);
        let g = random::gaussian_matrix(4, 2, &mut r);
        let h = v.adjoint_times(&g);
        let a = &g - v.matrix() * ((&h - h.adjoint()) * cr(0.5));
        let a = TangentVector::new(&v, a).unwrap();
        let phi = ket(2, 0);
        for n in 1..=5 {
            let f = qfi_finite(&a, &phi, n).unwrap();
            let fd = qfi_fidelity_oracle(&a, &phi, n, 1e-4).unwrap();
            assert!((f - fd).abs() < 1e-2 * f.abs().max(1e-3), "n={n}: {f} vs {fd}");
        }
    }
}
