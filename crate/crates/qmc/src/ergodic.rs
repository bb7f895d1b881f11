//! Ergodic classification of the transfer operator: irreducibility, period,
//! stationary state, peripheral eigen-structure and cyclic block projections.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::core::isometry::word_operators;
use crate::core::linalg::*;
use crate::core::{channel, DensityMatrix, Isometry, Picture};
use crate::error::{IrreducibilityCheck, QmcError, Result};

/// Default cap on the output dimension `k^n` for dense output states.
pub const DEFAULT_TENSOR_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErgodicTol {
    /// Eigenvalues with `|λ| ≥ 1 - peripheral_band` count as peripheral.
    pub peripheral_band: f64,
    /// Minimal eigenvalue of the stationary state accepted as faithful.
    pub faithfulness_floor: f64,
    /// Eigenvalues within this distance of 1 are counted as eigenvalue 1.
    pub simplicity_gap: f64,
}

impl Default for ErgodicTol {
    fn default() -> Self {
        ErgodicTol {
            peripheral_band: 1e-8,
            faithfulness_floor: 1e-9,
            simplicity_gap: 1e-8,
        }
    }
}

impl ErgodicTol {
    pub fn validate(&self) -> Result<()> {
        if self.peripheral_band > 0.0 && self.faithfulness_floor > 0.0 && self.simplicity_gap > 0.0 {
            Ok(())
        } else {
            Err(QmcError::InvalidInput("tolerances must be positive".into()))
        }
    }
}

/// Peripheral eigenvalue `γ^j` with its Heisenberg eigen-operator `Z^j` and
/// Schrödinger eigen-operator `J_j`, normalised so that `Tr(J_j Z^j) = 1`.
#[derive(Debug, Clone)]
pub struct PeripheralMode {
    pub index: usize,
    pub eigenvalue: C64,
    pub z: ComplexMatrix,
    pub j: ComplexMatrix,
}

/// Element `φ` of the eigenbasis of the stationary state inside block `a`,
/// with eigenvalue `π` (so that `Σ_i π_i^a = 1/p`).
#[derive(Debug, Clone)]
pub struct StationaryComponent {
    pub block: usize,
    pub index: usize,
    pub weight: f64,
    pub vector: ComplexVector,
}

/// Norms of the defects of every structural identity, all expected at round-off level.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Residuals {
    pub stationarity: f64,
    pub projection_sum: f64,
    pub projection_orthogonality: f64,
    pub cyclic_relation: f64,
    pub z_eigen: f64,
    pub z_intertwining: f64,
    pub stationary_commutation: f64,
    pub block_trace: f64,
    pub peripheral_roots: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        [
            self.stationarity,
            self.projection_sum,
            self.projection_orthogonality,
            self.cyclic_relation,
            self.z_eigen,
            self.z_intertwining,
            self.stationary_commutation,
            self.block_trace,
            self.peripheral_roots,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct SpectralProfile {
    iso: Isometry,
    tol: ErgodicTol,
    eigenvalues: Vec<C64>,
    period: usize,
    rho: DensityMatrix,
    projections: Vec<ComplexMatrix>,
    modes: Vec<PeripheralMode>,
    components: Vec<Vec<StationaryComponent>>,
    residuals: Residuals,
    subleading_modulus: f64,
}

impl SpectralProfile {
    pub fn iso(&self) -> &Isometry {
        &self.iso
    }
    pub fn d(&self) -> usize {
        self.iso.d()
    }
    pub fn k(&self) -> usize {
        self.iso.k()
    }
    pub fn tol(&self) -> ErgodicTol {
        self.tol
    }
    /// Eigenvalues of the transfer operator, by decreasing modulus.
    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigenvalues
    }
    pub fn period(&self) -> usize {
        self.period
    }
    pub fn is_primitive(&self) -> bool {
        self.period == 1
    }
    /// `γ = e^{2πi/p}`.
    pub fn gamma(&self) -> C64 {
        root_of_unity(self.period, 1)
    }
    /// `γ^m` for any integer `m`.
    pub fn gamma_pow(&self, m: i64) -> C64 {
        root_of_unity(self.period, m)
    }
    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }
    pub fn projections(&self) -> &[ComplexMatrix] {
        &self.projections
    }
    /// `P_a`, index taken modulo the period.
    pub fn projection(&self, a: i64) -> &ComplexMatrix {
        &self.projections[a.rem_euclid(self.period as i64) as usize]
    }
    pub fn block_dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.len()).collect()
    }
    pub fn peripheral(&self) -> &[PeripheralMode] {
        &self.modes
    }
    /// `Z^m`, index taken modulo the period.
    pub fn z_pow(&self, m: i64) -> &ComplexMatrix {
        &self.modes[m.rem_euclid(self.period as i64) as usize].z
    }
    pub fn z(&self) -> &ComplexMatrix {
        self.z_pow(1)
    }
    /// `ρ_a = P_a ρ P_a`.
    pub fn rho_block(&self, a: i64) -> ComplexMatrix {
        let p = self.projection(a);
        p * self.rho.matrix() * p
    }
    pub fn stationary_components(&self) -> &[Vec<StationaryComponent>] {
        &self.components
    }
    pub fn component(&self, a: usize, i: usize) -> Result<&StationaryComponent> {
        self.components
            .get(a)
            .and_then(|c| c.get(i))
            .ok_or_else(|| QmcError::IndexOutOfRange(format!("stationary component ({a}, {i})")))
    }
    pub fn residuals(&self) -> &Residuals {
        &self.residuals
    }
    pub fn min_stationary_eigenvalue(&self) -> f64 {
        self.rho.min_eigenvalue()
    }
    /// Largest modulus among non-peripheral eigenvalues (0 if none).
    pub fn subleading_modulus(&self) -> f64 {
        self.subleading_modulus
    }
    /// Peripheral projection `Π_k(X) = Tr(J_k X) Z^k`.
    pub fn peripheral_projection(&self, k: i64, x: &ComplexMatrix) -> ComplexMatrix {
        let m = &self.modes[k.rem_euclid(self.period as i64) as usize];
        &m.z * trace_product(&m.j, x)
    }

    pub(crate) fn check_iso(&self, iso: &Isometry) -> Result<()> {
        if iso.d() != self.d() || iso.k() != self.k() || max_abs(&(iso.matrix() - self.iso.matrix())) > 1e-12 {
            return Err(QmcError::ProfileMismatch("profile was computed for a different isometry".into()));
        }
        Ok(())
    }

    /// JSON report used by the command line.
    pub fn report(&self) -> serde_json::Value {
        serde_json::json!({
            "irreducible": true,
            "d": self.d(),
            "k": self.k(),
            "period": self.period,
            "gamma": crate::core::json::complex_pair(self.gamma()),
            "eigenvalues": self.eigenvalues.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "block_dims": self.block_dims(),
            "rho_ss": crate::core::json::matrix_to_value(self.rho.matrix()),
            "min_eig_rho_ss": self.min_stationary_eigenvalue(),
            "subleading_modulus": self.subleading_modulus,
            "projections": self.projections.iter().map(crate::core::json::matrix_to_value).collect::<Vec<_>>(),
            "z": crate::core::json::matrix_to_value(self.z()),
            "residuals": self.residuals,
            "tolerances": self.tol,
        })
    }
}

pub fn root_of_unity(p: usize, m: i64) -> C64 {
    let m = m.rem_euclid(p as i64) as f64;
    cis(2.0 * PI * m / p as f64)
}

/// Classify `iso`. Reducible channels yield `QmcError::NotIrreducible`
/// carrying the failing check and the computed spectrum.
pub fn analyze(iso: &Isometry, tol: ErgodicTol) -> Result<SpectralProfile> {
    tol.validate()?;
    let d = iso.d();
    let schro = channel(iso, Picture::Schrodinger);
    let heis = channel(iso, Picture::Heisenberg);
    let eigenvalues = schro.eigenvalues()?;
    let ev_pairs: Vec<(f64, f64)> = eigenvalues.iter().map(|z| (z.re, z.im)).collect();

    let ones = eigenvalues
        .iter()
        .filter(|z| (*z - ONE).norm() <= tol.simplicity_gap)
        .count();
    if ones != 1 {
        return Err(QmcError::NotIrreducible {
            check: IrreducibilityCheck::EigenvalueOneNotSimple,
            detail: format!("{ones} eigenvalues within {:.1e} of 1", tol.simplicity_gap),
            eigenvalues: ev_pairs,
        });
    }

    // Stationary state from the kernel of T_* - 1.
    let kernel = null_vector(&(schro.matrix() - identity(d * d)));
    let m = unvectorize(&kernel.vector, d, d);
    let tr = m.trace();
    let rho = hermitian_part(&(m / tr));
    let (rho_vals, _) = eigh(&rho);
    let min_eig = *rho_vals.last().unwrap();
    if min_eig < tol.faithfulness_floor {
        return Err(QmcError::NotIrreducible {
            check: IrreducibilityCheck::StationaryNotFaithful,
            detail: format!("minimal eigenvalue of the stationary state is {min_eig:.3e}"),
            eigenvalues: ev_pairs,
        });
    }
    let rho = DensityMatrix::new(rho)?;

    // Peripheral spectrum.
    let peripheral: Vec<C64> = eigenvalues
        .iter()
        .copied()
        .filter(|z| z.norm() >= 1.0 - tol.peripheral_band)
        .collect();
    let p = peripheral.len();
    let mut root_residual: f64 = 0.0;
    for z in &peripheral {
        if (z.norm() - 1.0).abs() > tol.peripheral_band.max(1e-10) {
            return Err(QmcError::PeripheralMismatch(format!(
                "eigenvalue {z} lies inside the peripheral band but off the unit circle"
            )));
        }
    }
    for j in 0..p {
        let target = root_of_unity(p, j as i64);
        let dist = nearest(target, &peripheral);
        root_residual = root_residual.max(dist);
        if dist > tol.peripheral_band.max(1e-8) {
            return Err(QmcError::PeripheralMismatch(format!(
                "{p} peripheral eigenvalues but γ^{j} = {target} is missing (distance {dist:.3e})"
            )));
        }
    }
    let subleading_modulus = eigenvalues
        .iter()
        .map(|z| z.norm())
        .filter(|&r| r < 1.0 - tol.peripheral_band)
        .fold(0.0, f64::max);

    let gamma = root_of_unity(p, 1);
    let z = if p == 1 {
        identity(d)
    } else {
        peripheral_unitary(heis.matrix(), gamma, p, d)?
    };
    let projections = spectral_projections(&z, p);

    // Schrödinger eigen-operators J_j = Σ_a γ̄^{aj} ρ_a.
    let rho_blocks: Vec<ComplexMatrix> = projections.iter().map(|pa| pa * rho.matrix() * pa).collect();
    let mut modes = Vec::with_capacity(p);
    let mut zpow = identity(d);
    for jdx in 0..p {
        let mut jm = zeros(d, d);
        for (a, ra) in rho_blocks.iter().enumerate() {
            jm += ra * root_of_unity(p, -((a * jdx) as i64));
        }
        modes.push(PeripheralMode {
            index: jdx,
            eigenvalue: root_of_unity(p, jdx as i64),
            z: zpow.clone(),
            j: jm,
        });
        zpow = &zpow * &z;
    }

    let components = stationary_eigenbasis(rho.matrix(), &projections);

    let residuals = compute_residuals(iso, &rho, &projections, &z, gamma, root_residual);
    if residuals.cyclic_relation > 1e-8 {
        return Err(QmcError::LabelingFailure(format!(
            "cyclic relation T(P_(a+1)) = P_a violated by {:.3e}",
            residuals.cyclic_relation
        )));
    }

    Ok(SpectralProfile {
        iso: iso.clone(),
        tol,
        eigenvalues,
        period: p,
        rho,
        projections,
        modes,
        components,
        residuals,
        subleading_modulus,
    })
}

/// Unitary `Z` with `T(Z) = γZ`, `Z^p = 1`, labelled canonically.
fn peripheral_unitary(heis: &ComplexMatrix, gamma: C64, p: usize, d: usize) -> Result<ComplexMatrix> {
    let nv = null_vector(&(heis - identity(d * d) * gamma));
    let m = unvectorize(&nv.vector, d, d);
    // Divide by an eigenvalue of maximal modulus: the result is unitary with 1 in its spectrum.
    let ev = eigenvalues(&m)?;
    let lead = ev
        .iter()
        .copied()
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
        .ok_or_else(|| QmcError::Numerical("empty spectrum".into()))?;
    let z0 = m / lead;
    let unit_defect = op_norm(&(z0.adjoint() * &z0 - identity(d)));
    if unit_defect > 1e-6 {
        return Err(QmcError::LabelingFailure(format!(
            "peripheral eigen-operator is not proportional to a unitary (defect {unit_defect:.3e})"
        )));
    }
    // Cyclic relabelling Z -> γ^{-j} Z: pick the representative whose P_0
    // dominates along the standard basis (lexicographically).
    let mut best: Option<(Vec<f64>, ComplexMatrix)> = None;
    for j in 0..p {
        let zj = &z0 * root_of_unity(p, -(j as i64));
        let p0 = &spectral_projections(&zj, p)[0];
        let score: Vec<f64> = (0..d).map(|i| p0[(i, i)].re).collect();
        let better = match &best {
            None => true,
            Some((s, _)) => lexicographically_greater(&score, s, 1e-9),
        };
        if better {
            best = Some((score, zj));
        }
    }
    Ok(best.unwrap().1)
}

fn lexicographically_greater(a: &[f64], b: &[f64], tol: f64) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x > &(y + tol) {
            return true;
        }
        if x < &(y - tol) {
            return false;
        }
    }
    false
}

/// Spectral projections of a unitary with spectrum in the p-th roots of unity
/// (Lagrange interpolation), `P_a` for eigenvalue `γ^a`.
fn spectral_projections(z: &ComplexMatrix, p: usize) -> Vec<ComplexMatrix> {
    let d = z.nrows();
    (0..p)
        .map(|a| {
            let ga = root_of_unity(p, a as i64);
            let mut m = identity(d);
            for b in 0..p {
                if b != a {
                    let gb = root_of_unity(p, b as i64);
                    m = m * (z - identity(d) * gb) / (ga - gb);
                }
            }
            hermitian_part(&m)
        })
        .collect()
}

/// Eigenbasis of `ρ` restricted to each block; degenerate eigenspaces are
/// resolved by projecting the standard basis and orthonormalising.
fn stationary_eigenbasis(rho: &ComplexMatrix, projections: &[ComplexMatrix]) -> Vec<Vec<StationaryComponent>> {
    let d = rho.nrows();
    projections
        .iter()
        .enumerate()
        .map(|(a, pa)| {
            let (pv, pvec) = eigh(pa);
            let cols: Vec<usize> = (0..d).filter(|&i| pv[i] > 0.5).collect();
            let basis = ComplexMatrix::from_fn(d, cols.len(), |r, cc| pvec[(r, cols[cc])]);
            let restricted = hermitian_part(&(basis.adjoint() * rho * &basis));
            let (vals, vecs) = eigh(&restricted);
            let full = &basis * vecs;
            let mut out = Vec::new();
            let mut start = 0;
            while start < vals.len() {
                let mut end = start + 1;
                while end < vals.len() && (vals[start] - vals[end]).abs() < 1e-9 {
                    end += 1;
                }
                let space: Vec<ComplexVector> = (start..end).map(|c| full.column(c).into_owned()).collect();
                let vectors = if end - start == 1 {
                    space
                } else {
                    let proj = space.iter().fold(zeros(d, d), |acc, v| acc + projector(v));
                    let candidates: Vec<ComplexVector> = (0..d).map(|i| &proj * ket(d, i)).collect();
                    orthonormalize(&candidates, 1e-8).into_iter().take(end - start).collect()
                };
                for (offset, v) in vectors.into_iter().enumerate() {
                    let v = canonical_vector_phase(&v);
                    out.push(StationaryComponent {
                        block: a,
                        index: start + offset,
                        weight: vals[start + offset],
                        vector: v,
                    });
                }
                start = end;
            }
            out
        })
        .collect()
}

fn canonical_vector_phase(v: &ComplexVector) -> ComplexVector {
    match v.iter().find(|z| z.norm() > 1e-10) {
        Some(z) => v * (z.conj() / z.norm()),
        None => v.clone(),
    }
}

fn compute_residuals(
    iso: &Isometry,
    rho: &DensityMatrix,
    projections: &[ComplexMatrix],
    z: &ComplexMatrix,
    gamma: C64,
    peripheral_roots: f64,
) -> Residuals {
    let d = iso.d();
    let p = projections.len();
    let r = rho.matrix();
    let sum = projections.iter().fold(zeros(d, d), |acc, m| acc + m);
    let mut orth: f64 = 0.0;
    let mut cyc: f64 = 0.0;
    let mut comm: f64 = 0.0;
    let mut btr: f64 = 0.0;
    for a in 0..p {
        let pa = &projections[a];
        orth = orth.max((pa * pa - pa).norm());
        for pb in projections.iter().skip(a + 1) {
            orth = orth.max((pa * pb).norm());
        }
        cyc = cyc.max((iso.heisenberg(&projections[(a + 1) % p]) - pa).norm());
        comm = comm.max((r * pa - pa * r).norm());
        btr = btr.max((trace_product(r, pa).re - 1.0 / p as f64).abs());
    }
    let z_intertwining = iso
        .kraus()
        .iter()
        .map(|k| (z * k - k * z * gamma).norm())
        .fold(0.0, f64::max);
    Residuals {
        stationarity: (iso.schrodinger(r) - r).norm(),
        projection_sum: (sum - identity(d)).norm(),
        projection_orthogonality: orth,
        cyclic_relation: cyc,
        z_eigen: (iso.heisenberg(z) - z * gamma).norm(),
        z_intertwining,
        stationary_commutation: comm,
        block_trace: btr,
        peripheral_roots,
    }
}

/// The list of block projections `P_0, ..., P_{p-1}`.
pub fn periodic_projections(profile: &SpectralProfile) -> Vec<ComplexMatrix> {
    profile.projections.clone()
}

/// Ergodic projection `E_*(ρ) = p Σ_a Tr(ρ P_a) ρ_a`.
pub fn ergodic_projection(profile: &SpectralProfile, rho: &DensityMatrix) -> DensityMatrix {
    let p = profile.period();
    let d = profile.d();
    let mut out = zeros(d, d);
    for a in 0..p {
        let w = trace_product(rho.matrix(), &profile.projections[a]);
        out += profile.rho_block(a as i64) * (w * p as f64);
    }
    DensityMatrix::new(hermitian_part(&out)).expect("ergodic projection of a state is a state")
}

/// Dense output state of the first `n` units, `Tr_H[V(n) ρ V(n)*]`.
///
/// Basis string `(i_1, ..., i_n)` has index `Σ i_t k^{n-t}`, the first unit
/// being most significant.
pub fn output_state(iso: &Isometry, rho_in: &DensityMatrix, n: usize, cap: usize) -> Result<DensityMatrix> {
    let m = output_gram_factor(iso, rho_in, n, cap)?;
    DensityMatrix::new(hermitian_part(&(&m * m.adjoint())))
}

/// Rows are `vec(K_𝐢 √ρ)`, so that the output state is `M M*`.
pub(crate) fn output_gram_factor(iso: &Isometry, rho_in: &DensityMatrix, n: usize, cap: usize) -> Result<ComplexMatrix> {
    let k = iso.k();
    let dim = checked_pow(k, n, cap, "output dimension k^n")?;
    if rho_in.dim() != iso.d() {
        return Err(QmcError::DimensionMismatch(format!(
            "input state has dimension {}, isometry {}",
            rho_in.dim(),
            iso.d()
        )));
    }
    let d = iso.d();
    let sq = sqrt_psd(rho_in.matrix(), 1e-10)?;
    let words = word_operators(iso.kraus(), n);
    debug_assert_eq!(words.len(), dim);
    Ok(ComplexMatrix::from_fn(dim, d * d, |row, col| {
        let w = &words[row];
        let (a, b) = (col % d, col / d);
        (0..d).map(|t| w[(a, t)] * sq[(t, b)]).sum()
    }))
}

pub(crate) fn checked_pow(k: usize, n: usize, cap: usize, what: &str) -> Result<usize> {
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim.saturating_mul(k);
        if dim > cap {
            return Err(QmcError::SizeCap {
                what: what.into(),
                needed: k.saturating_pow(n as u32),
                cap,
            });
        }
    }
    Ok(dim)
}

/// True iff the iterated Kraus images of `v` span the system space within
/// `depth` steps.
pub fn access_span_check(iso: &Isometry, v: &ComplexVector, depth: usize) -> bool {
    let d = iso.d();
    if v.norm() == 0.0 {
        return false;
    }
    let mut basis = orthonormalize(std::slice::from_ref(v), 1e-10);
    let mut frontier = basis.clone();
    for _ in 0..depth {
        if basis.len() == d {
            break;
        }
        let mut candidates = basis.clone();
        for f in &frontier {
            for k in iso.kraus() {
                candidates.push(k * f);
            }
        }
        let next = orthonormalize(&candidates, 1e-9);
        if next.len() == basis.len() {
            break;
        }
        frontier = next[basis.len()..].to_vec();
        basis = next;
    }
    basis.len() == d
}

/// Irreducibility decided through spans only: every common invariant subspace
/// of the Kraus operators contains an eigenvector of a generic linear
/// combination of them, so it suffices to test those eigenvectors.
pub fn span_irreducibility_oracle(iso: &Isometry, seed: u64) -> Result<bool> {
    use crate::core::random;
    let d = iso.d();
    let mut r = random::rng(seed, 0);
    let coeffs = random::gaussian_vector(iso.k(), &mut r);
    let mut comb = zeros(d, d);
    for (cf, k) in coeffs.iter().zip(iso.kraus()) {
        comb += k * *cf;
    }
    for lambda in eigenvalues(&comb)? {
        let nv = null_vector(&(&comb - identity(d) * lambda));
        // Generalised eigenspaces are covered by the kernel vector; if the
        // kernel is not one-dimensional test every kernel direction.
        let svd = svd_sorted(&(&comb - identity(d) * lambda));
        let scale = svd.s[0].max(1.0);
        let kernel_dim = svd.s.iter().filter(|&&s| s < 1e-8 * scale).count().max(1);
        let mut candidates = vec![nv.vector];
        for t in 1..kernel_dim {
            let row = d - 1 - t;
            candidates.push(ComplexVector::from_fn(d, |i, _| svd.v_t[(row, i)].conj()));
        }
        for v in candidates {
            if !access_span_check(iso, &v, d * d) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift() -> Isometry {
        Isometry::from_kraus(vec![
            real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            real_matrix(2, 2, &[0.0, 0.0, 1.0, 0.0]),
        ])
        .unwrap()
    }

    #[test]
    fn shift_profile() {
        let prof = analyze(&shift(), ErgodicTol::default()).unwrap();
        assert_eq!(prof.period(), 2);
        assert!((prof.rho().matrix() - identity(2) * cr(0.5)).norm() < 1e-12);
        assert!((prof.z() - real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0])).norm() < 1e-12);
        assert!((prof.projection(0) - real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0])).norm() < 1e-12);
        assert!(prof.residuals().max() < 1e-12);
        assert_eq!(prof.block_dims(), vec![1, 1]);
    }

    #[test]
    fn amplitude_damping_is_not_irreducible() {
        let g: f64 = 0.3;
        let v = Isometry::from_kraus(vec![
            real_matrix(2, 2, &[1.0, 0.0, 0.0, (1.0 - g).sqrt()]),
            real_matrix(2, 2, &[0.0, g.sqrt(), 0.0, 0.0]),
        ])
        .unwrap();
        match analyze(&v, ErgodicTol::default()) {
            Err(QmcError::NotIrreducible { check, .. }) => {
                assert_eq!(check, IrreducibilityCheck::StationaryNotFaithful)
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(!span_irreducibility_oracle(&v, 3).unwrap());
    }

    #[test]
    fn identity_channel_has_degenerate_one() {
        let v = Isometry::from_kraus(vec![identity(2), zeros(2, 2)]).unwrap();
        match analyze(&v, ErgodicTol::default()) {
            Err(QmcError::NotIrreducible { check, .. }) => {
                assert_eq!(check, IrreducibilityCheck::EigenvalueOneNotSimple)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shift_output_alternates() {
        let v = shift();
        let prof = analyze(&v, ErgodicTol::default()).unwrap();
        let out = output_state(&v, prof.rho(), 2, DEFAULT_TENSOR_CAP).unwrap();
        let mut expect = zeros(4, 4);
        expect[(1, 1)] = cr(0.5);
        expect[(2, 2)] = cr(0.5);
        assert!((out.matrix() - expect).norm() < 1e-12);
        assert!(matches!(
            output_state(&v, prof.rho(), 13, DEFAULT_TENSOR_CAP),
            Err(QmcError::SizeCap { .. })
        ));
    }

    #[test]
    fn access_span_examples() {
        let v = shift();
        assert!(access_span_check(&v, &ket(2, 0), 4));
        let block = Isometry::from_kraus(vec![
            real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]),
            real_matrix(2, 2, &[0.0, 0.0, 0.0, 1.0]),
        ])
        .unwrap();
        assert!(!access_span_check(&block, &ket(2, 0), 4));
    }

    #[test]
    fn ergodic_projection_of_basis_state() {
        let prof = analyze(&shift(), ErgodicTol::default()).unwrap();
        let e = ergodic_projection(&prof, &DensityMatrix::basis(2, 0));
        assert!((e.matrix() - real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0])).norm() < 1e-12);
    }
}
