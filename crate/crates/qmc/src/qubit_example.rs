//! Qubit fixtures: three one-parameter families of `d = k = 2` chains, the
//! two-parameter periodic family they cross, and their reference values.
//!
//! Matrices are written in the system-major layout (row `s·k + u`) in which
//! they are usually displayed, and converted on construction.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::Serialize;

use crate::core::isometry::system_major_to_unit_major;
use crate::core::linalg::*;
use crate::core::{channel, Isometry, Picture};
use crate::ergodic::{analyze, ErgodicTol, SpectralProfile};
use crate::error::{QmcError, Result};
use crate::gauge::{mode_decompose, split, stabiliser_tangent_action, TangentVector};
use crate::statmodel::{stationary_mean, LocalObservable};

/// Step used for numerical differentiation of `θ ↦ V_θ`.
pub const DIFF_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        let lo_ok = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let hi_ok = if self.hi_closed { x <= self.hi } else { x < self.hi };
        lo_ok && hi_ok
    }

    /// `n` evenly spaced interior points.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let lo = if self.lo.is_finite() { self.lo } else { -1.0 };
        let hi = if self.hi.is_finite() { self.hi } else { 1.0 };
        (1..=n).map(|i| lo + (hi - lo) * i as f64 / (n + 1) as f64).collect()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QubitModel {
    /// Stays on the periodic submanifold for all θ.
    M1,
    /// Crosses the periodic submanifold at θ = 0 with an identifiable tangent
    /// that has components in both modes.
    M2,
    /// Crosses at θ = 0 along a purely `V_1` direction; the stationary mean of
    /// `|0⟩⟨0|` is flat there.
    M3,
    /// `K_0 = [[0, x], [y, 0]]`, `K_1 = [[0, w], [z, 0]]` with
    /// `x = √(1-|w|²)`, `y = √(1-|z|²)`; θ is ignored.
    PeriodicPoint { w: C64, z: C64 },
}

impl QubitModel {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "m1" => Ok(QubitModel::M1),
            "m2" => Ok(QubitModel::M2),
            "m3" => Ok(QubitModel::M3),
            "s" | "shift" => Ok(QubitModel::PeriodicPoint { w: ZERO, z: ONE }),
            other => Err(QmcError::InvalidInput(format!("unknown model '{other}' (expected m1, m2, m3 or shift)"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            QubitModel::M1 => "m1".into(),
            QubitModel::M2 => "m2".into(),
            QubitModel::M3 => "m3".into(),
            QubitModel::PeriodicPoint { w, z } => format!("periodic_point({w}, {z})"),
        }
    }

    pub fn interval(&self) -> Interval {
        match self {
            QubitModel::M1 => Interval { lo: 0.25, hi: 0.5, lo_closed: false, hi_closed: false },
            QubitModel::M2 => Interval { lo: -0.3, hi: 0.3, lo_closed: false, hi_closed: false },
            QubitModel::M3 => Interval { lo: 0.0, hi: FRAC_PI_2, lo_closed: true, hi_closed: false },
            QubitModel::PeriodicPoint { .. } => {
                Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY, lo_closed: false, hi_closed: false }
            }
        }
    }

    /// Reference point of the golden tangent.
    pub fn reference_theta(&self) -> f64 {
        match self {
            QubitModel::M1 => 0.3,
            _ => 0.0,
        }
    }

    pub fn check_theta(&self, theta: f64) -> Result<()> {
        let iv = self.interval();
        if !theta.is_finite() || !iv.contains(theta) {
            return Err(QmcError::OutOfInterval { value: theta, interval: iv.to_string() });
        }
        Ok(())
    }

    pub fn isometry(&self, theta: f64) -> Result<Isometry> {
        self.check_theta(theta)?;
        self.isometry_any(theta)
    }

    /// The same formula without the interval check, for finite differences
    /// at an endpoint. Fails if the formula leaves the isometries.
    pub fn isometry_any(&self, theta: f64) -> Result<Isometry> {
        if let QubitModel::PeriodicPoint { w, z } = *self {
            return periodic_point(w, z);
        }
        Isometry::from_system_major(&self.system_major(theta)?, 2, 2)
    }

    /// Displayed `4×2` matrix (row `s·k + u`).
    pub fn system_major(&self, t: f64) -> Result<ComplexMatrix> {
        let root = |x: f64| {
            if x < -1e-15 {
                Err(QmcError::OutOfInterval { value: t, interval: self.interval().to_string() })
            } else {
                Ok(x.max(0.0).sqrt())
            }
        };
        let m = match self {
            QubitModel::M1 => complex_matrix(
                4,
                2,
                &[
                    ZERO,
                    cr(root(1.0 - 4.0 * t * t)?),
                    ZERO,
                    cr(2.0 * t),
                    cr(t),
                    ZERO,
                    c(0.0, root(1.0 - t * t)?),
                    ZERO,
                ],
            ),
            QubitModel::M2 => {
                let r = root(1.0 - 3.0 * t * t)?;
                complex_matrix(4, 2, &[cr(t), cr(r), c(0.0, t), cr(-t), cr(-t), c(0.0, t), cr(r), cr(-t)])
            }
            QubitModel::M3 => {
                let (s, co) = t.sin_cos();
                let (a, b, h) = ((2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt(), 0.5f64.sqrt());
                real_matrix(4, 2, &[a * s, b * co, b * s, -a * co, h * co, h * s, -h * co, h * s])
            }
            QubitModel::PeriodicPoint { w, z } => periodic_point(*w, *z)?.system_major(),
        };
        Ok(m)
    }

    /// Central-difference velocity `dV/dθ` in the unit-major layout.
    pub fn velocity(&self, theta: f64) -> Result<ComplexMatrix> {
        let h = DIFF_STEP;
        let plus = self.isometry_any(theta + h)?.matrix();
        let minus = self.isometry_any(theta - h)?.matrix();
        Ok((plus - minus) / cr(2.0 * h))
    }

    /// Tangent `A = -i dV/dθ`.
    pub fn tangent(&self, theta: f64) -> Result<TangentVector> {
        let iso = self.isometry_any(theta)?;
        TangentVector::from_velocity(&iso, &self.velocity(theta)?)
    }

    /// Observable whose stationary mean has a closed form.
    pub fn standard_observable(&self) -> LocalObservable {
        match self {
            QubitModel::M2 => {
                let plus = ComplexVector::from_vec(vec![cr(0.5f64.sqrt()), cr(0.5f64.sqrt())]);
                LocalObservable::projector(2, 1, &plus).expect("unit vector")
            }
            _ => LocalObservable::basis_projector(2, 0),
        }
    }

    pub fn closed_form_mean(&self, theta: f64) -> Result<f64> {
        self.check_theta(theta)?;
        let t = theta;
        match self {
            QubitModel::M1 => Ok(0.5 - 1.5 * t * t),
            QubitModel::M2 => Ok(0.5 * (1.0 - 2.0 * t * (1.0 - 3.0 * t * t).sqrt())),
            QubitModel::M3 => Ok(7.0 / 12.0 - t.cos().powi(2) / 6.0),
            QubitModel::PeriodicPoint { .. } => {
                Err(QmcError::InvalidInput("the periodic family has no one-parameter mean".into()))
            }
        }
    }
}

/// `K_0 = [[0, x], [y, 0]]`, `K_1 = [[0, w], [z, 0]]`.
pub fn periodic_point(w: C64, z: C64) -> Result<Isometry> {
    if w.norm() > 1.0 || z.norm() > 1.0 {
        return Err(QmcError::InvalidInput("|w| and |z| must not exceed 1".into()));
    }
    let x = cr((1.0 - w.norm_sqr()).max(0.0).sqrt());
    let y = cr((1.0 - z.norm_sqr()).max(0.0).sqrt());
    let det = x * z - y * w;
    if det.norm() < 1e-12 {
        return Err(QmcError::ReducibleParameters(format!("x z = y w for w = {w}, z = {z}")));
    }
    Isometry::from_kraus(vec![
        complex_matrix(2, 2, &[ZERO, x, y, ZERO]),
        complex_matrix(2, 2, &[ZERO, w, z, ZERO]),
    ])
}

/// Vectors `v_0, v_1` with `V|1⟩ = |0⟩ ⊗ v_0` and `V|0⟩ = |1⟩ ⊗ v_1`, for an
/// isometry of the periodic form.
fn periodic_vectors(iso: &Isometry) -> Result<[ComplexVector; 2]> {
    if iso.d() != 2 || iso.k() != 2 {
        return Err(QmcError::DimensionMismatch("periodic coordinates need d = k = 2".into()));
    }
    let ks = iso.kraus();
    let diag = ks.iter().map(|m| m[(0, 0)].norm() + m[(1, 1)].norm()).sum::<f64>();
    if diag > 1e-10 {
        return Err(QmcError::InvalidInput("isometry is not of the periodic form".into()));
    }
    let v0 = ComplexVector::from_vec(vec![ks[0][(0, 1)], ks[1][(0, 1)]]);
    let v1 = ComplexVector::from_vec(vec![ks[0][(1, 0)], ks[1][(1, 0)]]);
    Ok([v0, v1])
}

/// Unit vector orthogonal to `v` in `C^2`, first nonzero entry real positive.
fn complement(v: &ComplexVector) -> ComplexVector {
    let u = ComplexVector::from_vec(vec![-v[1].conj(), v[0].conj()]);
    let u = &u / cr(u.norm());
    let first = if u[0].norm() > 1e-12 { u[0] } else { u[1] };
    let ph = first / cr(first.norm());
    u * ph.conj()
}

/// `2×2` coordinates `a_ij = ⟨i ⊗ v_i^⊥|A|j⟩` of an identifiable tangent at a
/// periodic point. The antidiagonal part spans `V_0`, the diagonal `V_1`.
pub fn periodic_coordinates(iso: &Isometry, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let [v0, v1] = periodic_vectors(iso)?;
    let perps = [complement(&v0), complement(&v1)];
    let mut out = zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            // unit-major row u·d + s
            let col = a.column(j);
            let mut acc = ZERO;
            for u in 0..2 {
                acc += perps[i][u].conj() * col[u * 2 + i];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Inverse of [`periodic_coordinates`].
pub fn from_periodic_coordinates(iso: &Isometry, coords: &ComplexMatrix) -> Result<ComplexMatrix> {
    let [v0, v1] = periodic_vectors(iso)?;
    let perps = [complement(&v0), complement(&v1)];
    let mut a = zeros(4, 2);
    for i in 0..2 {
        for j in 0..2 {
            for u in 0..2 {
                a[(u * 2 + i, j)] += coords[(i, j)] * perps[i][u];
            }
        }
    }
    Ok(a)
}

/// Reference tangents as displayed, all in the velocity convention `dV/dθ`
/// and in the unit-major layout.
#[derive(Debug, Clone)]
pub struct GoldenTangent {
    pub model: QubitModel,
    pub theta0: f64,
    pub velocity: ComplexMatrix,
    pub a_id: ComplexMatrix,
    /// Displayed mode components `(m, A_m)`.
    pub parts: Vec<(usize, ComplexMatrix)>,
    /// Displayed periodic coordinates of the parts.
    pub coordinates: Vec<(usize, ComplexMatrix)>,
    /// Displayed `U(g) A^id`.
    pub rotated: Option<ComplexMatrix>,
    /// Mode containing all of `A^id`, as displayed.
    pub membership: usize,
}

fn sm(rows: &[C64]) -> ComplexMatrix {
    system_major_to_unit_major(&complex_matrix(4, 2, rows), 2, 2)
}

pub fn golden_tangent(model: QubitModel, theta0: f64) -> Result<GoldenTangent> {
    let t = theta0;
    match model {
        QubitModel::M1 => {
            model.check_theta(t)?;
            let r4 = (1.0 - 4.0 * t * t).sqrt();
            let r1 = (1.0 - t * t).sqrt();
            let velocity = sm(&[ZERO, cr(-4.0 * t / r4), ZERO, cr(2.0), ONE, ZERO, c(0.0, -t / r1), ZERO]);
            let a_id = sm(&[
                ZERO,
                cr(-t * (7.0 + 4.0 * t) / r4),
                ZERO,
                cr(2.0),
                cr(1.0 - 2.0 * t * t),
                ZERO,
                c(0.0, -t * (3.0 - t * t) / r1),
                ZERO,
            ]);
            Ok(GoldenTangent {
                model,
                theta0: t,
                velocity,
                parts: vec![(0, a_id.clone())],
                a_id,
                coordinates: vec![],
                rotated: None,
                membership: 0,
            })
        }
        QubitModel::M2 => {
            let (o, l, i) = (ZERO, ONE, I);
            let velocity = sm(&[l, o, i, -l, -l, i, o, -l]);
            let a_id = sm(&[o, o, i - l, -l, -l, l + i, o, o]);
            let part0 = sm(&[o, o, o, -l, -l, o, o, o]);
            let part1 = sm(&[o, o, i - l, o, o, l + i, o, o]);
            let rotated = sm(&[o, o, l - i, -l, -l, -(l + i), o, o]);
            Ok(GoldenTangent {
                model,
                theta0: 0.0,
                velocity,
                a_id,
                parts: vec![(0, part0), (1, part1)],
                coordinates: vec![
                    (0, complex_matrix(2, 2, &[o, -l, -l, o])),
                    (1, complex_matrix(2, 2, &[i - l, o, o, l + i])),
                ],
                rotated: Some(rotated),
                membership: usize::MAX,
            })
        }
        QubitModel::M3 => {
            let (a, b, h) = ((2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt(), 0.5f64.sqrt());
            let c0 = system_major_to_unit_major(&real_matrix(4, 2, &[a, 0.0, b, 0.0, 0.0, h, 0.0, h]), 2, 2);
            Ok(GoldenTangent {
                model,
                theta0: 0.0,
                velocity: c0.clone(),
                parts: vec![(1, c0.clone())],
                a_id: c0,
                coordinates: vec![],
                rotated: None,
                membership: 1,
            })
        }
        QubitModel::PeriodicPoint { .. } => {
            Err(QmcError::InvalidInput("no displayed tangent for the periodic family".into()))
        }
    }
}

/// Computed counterparts of a [`GoldenTangent`] and their deviations.
#[derive(Debug, Clone, Serialize)]
pub struct GoldenComparison {
    pub model: String,
    pub theta0: f64,
    pub velocity_error: f64,
    /// `‖i·split(-i D).a_id - displayed A^id‖_max`.
    pub a_id_error: f64,
    pub part_errors: Vec<f64>,
    pub coordinate_errors: Vec<f64>,
    pub rotated_error: Option<f64>,
    /// Frobenius norms of the computed mode components.
    pub mode_norms: Vec<f64>,
    /// `‖V* A^id‖` of the displayed matrix; nonzero means it is not identifiable.
    pub displayed_identifiability_defect: f64,
    pub computed_a_id: crate::core::json::MatrixJson,
}

impl GoldenComparison {
    pub fn max_error(&self) -> f64 {
        let mut m = self.velocity_error.max(self.a_id_error);
        for e in self.part_errors.iter().chain(&self.coordinate_errors) {
            m = m.max(*e);
        }
        m.max(self.rotated_error.unwrap_or(0.0))
    }
}

pub fn compare_golden(g: &GoldenTangent) -> Result<GoldenComparison> {
    let iso = g.model.isometry_any(g.theta0)?;
    let profile = analyze(&iso, ErgodicTol::default())?;
    let vel = g.model.velocity(g.theta0)?;
    let tv = TangentVector::from_velocity(&iso, &vel)?;
    let s = split(&iso, &profile, &tv)?;
    let a_id = &s.a_id * I;
    let modes = mode_decompose(&profile, &a_id);
    let part_errors = g
        .parts
        .iter()
        .map(|(m, p)| max_abs(&(&modes[*m % modes.len()] - p)))
        .collect();
    let coordinate_errors = g
        .coordinates
        .iter()
        .map(|(m, p)| Ok(max_abs(&(periodic_coordinates(&iso, &modes[*m])? - p))))
        .collect::<Result<Vec<_>>>()?;
    let rotated_error = g
        .rotated
        .as_ref()
        .map(|r| max_abs(&(stabiliser_tangent_action(&profile, 1, &a_id) - r)));
    Ok(GoldenComparison {
        model: g.model.name(),
        theta0: g.theta0,
        velocity_error: max_abs(&(&vel - &g.velocity)),
        a_id_error: max_abs(&(&a_id - &g.a_id)),
        part_errors,
        coordinate_errors,
        rotated_error,
        mode_norms: modes.iter().map(|m| m.norm()).collect(),
        displayed_identifiability_defect: iso.adjoint_times(&g.a_id).norm(),
        computed_a_id: crate::core::json::MatrixJson::from_matrix(&a_id),
    })
}

/// Spectral data of `T̃_θ = T_θ² - Tr(ρ ·)1` for the third family.
#[derive(Debug, Clone, Serialize)]
pub struct SnrSpectralData {
    pub theta: f64,
    pub spectral_radius: f64,
    /// `(1 - 2 sin²θ)²`, the square of the eigenvalue of `Z = diag(1, -1)`.
    pub z_branch: f64,
    /// `‖T_θ(Z) - (-1 + 2 sin²θ) Z‖`.
    pub z_eigen_residual: f64,
    /// Whether the `Z` branch is the largest, i.e. the small-θ regime.
    pub z_branch_dominant: bool,
    pub eigenvalue_moduli: Vec<f64>,
}

pub fn snr_spectral_data(theta: f64) -> Result<SnrSpectralData> {
    let model = QubitModel::M3;
    model.check_theta(theta)?;
    let iso = model.isometry(theta)?;
    let t = channel(&iso, Picture::Heisenberg);
    let t2 = t.matrix() * t.matrix();
    // Tr(ρ X) with ρ = I/2 at every θ; taken from the profile when available.
    let rho = match analyze(&iso, ErgodicTol::default()) {
        Ok(p) => p.rho().matrix().clone(),
        Err(_) => identity(2) * cr(0.5),
    };
    let one = vectorize(&identity(2));
    let row = ComplexMatrix::from_fn(1, 4, |_, col| {
        let (i, j) = (col % 2, col / 2);
        rho[(j, i)]
    });
    let tt = t2 - one * row;
    let mut moduli: Vec<f64> = eigenvalues(&tt)?.iter().map(|e| e.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    let z = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let s2 = theta.sin().powi(2);
    let z_eigen_residual = (iso.heisenberg(&z) - &z * cr(-1.0 + 2.0 * s2)).norm();
    let z_branch = (1.0 - 2.0 * s2).powi(2);
    Ok(SnrSpectralData {
        theta,
        spectral_radius: moduli[0],
        z_branch,
        z_eigen_residual,
        z_branch_dominant: (moduli[0] - z_branch).abs() <= 1e-9,
        eigenvalue_moduli: moduli,
    })
}

/// Numerical check of a local region `[lo, θ̄)` used by the estimators.
#[derive(Debug, Clone, Serialize)]
pub struct LocalRegionReport {
    pub model: String,
    pub theta_bar: f64,
    pub grid: Vec<f64>,
    pub periods: Vec<usize>,
    pub all_irreducible: bool,
    pub mean_strictly_monotone: bool,
    pub max_mean_error: f64,
}

pub fn verify_local_region(model: QubitModel, lo: f64, theta_bar: f64, points: usize) -> Result<LocalRegionReport> {
    let grid: Vec<f64> = (0..points)
        .map(|i| lo + (theta_bar - lo) * i as f64 / points as f64)
        .filter(|t| model.interval().contains(*t))
        .collect();
    let mut periods = Vec::new();
    let mut means = Vec::new();
    let mut all_irreducible = true;
    let mut max_mean_error = 0.0f64;
    let q = model.standard_observable();
    for &t in &grid {
        let iso = model.isometry(t)?;
        match analyze(&iso, ErgodicTol::default()) {
            Ok(p) => {
                periods.push(p.period());
                let m = stationary_mean(&p, &q)?;
                max_mean_error = max_mean_error.max((m - model.closed_form_mean(t)?).abs());
                means.push(m);
            }
            Err(QmcError::NotIrreducible { .. }) => {
                all_irreducible = false;
                periods.push(0);
                means.push(model.closed_form_mean(t)?);
            }
            Err(e) => return Err(e),
        }
    }
    let inc = means.windows(2).all(|w| w[1] > w[0]);
    let dec = means.windows(2).all(|w| w[1] < w[0]);
    Ok(LocalRegionReport {
        model: model.name(),
        theta_bar,
        grid,
        periods,
        all_irreducible,
        mean_strictly_monotone: inc || dec,
        max_mean_error,
    })
}

/// Profile at a model point.
pub fn model_profile(model: QubitModel, theta: f64) -> Result<SpectralProfile> {
    analyze(&model.isometry(theta)?, ErgodicTol::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m1_matrix_and_mean() {
        let iso = QubitModel::M1.isometry(0.3).unwrap();
        let sm = iso.system_major();
        assert!((sm[(0, 1)].re - 0.64f64.sqrt()).abs() < 1e-15);
        assert!((sm[(1, 1)].re - 0.6).abs() < 1e-15);
        assert!((sm[(3, 0)].im - 0.91f64.sqrt()).abs() < 1e-15);
        assert!((QubitModel::M1.closed_form_mean(0.3).unwrap() - 0.365).abs() < 1e-15);
        let p = model_profile(QubitModel::M1, 0.3).unwrap();
        let m = stationary_mean(&p, &QubitModel::M1.standard_observable()).unwrap();
        assert!((m - 0.365).abs() < 1e-10);
    }

    #[test]
    fn m3_endpoints() {
        assert!((QubitModel::M3.closed_form_mean(0.0).unwrap() - 5.0 / 12.0).abs() < 1e-15);
        assert!(matches!(QubitModel::M3.isometry(FRAC_PI_2), Err(QmcError::OutOfInterval { .. })));
        let p = model_profile(QubitModel::M3, 0.0).unwrap();
        assert_eq!(p.period(), 2);
        assert_eq!(model_profile(QubitModel::M3, 0.2).unwrap().period(), 1);
    }

    #[test]
    fn shift_is_a_periodic_point() {
        let iso = periodic_point(ZERO, ONE).unwrap();
        assert!((&iso.kraus()[0] - real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0])).norm() < 1e-15);
        assert!((&iso.kraus()[1] - real_matrix(2, 2, &[0.0, 0.0, 1.0, 0.0])).norm() < 1e-15);
        let w = cr(0.6);
        let z = cr(0.6);
        assert!(matches!(periodic_point(w, z), Err(QmcError::ReducibleParameters(_))));
    }

    #[test]
    fn goldens_of_m2_and_m3() {
        for model in [QubitModel::M2, QubitModel::M3] {
            let g = golden_tangent(model, 0.0).unwrap();
            let cmp = compare_golden(&g).unwrap();
            assert!(cmp.max_error() < 1e-7, "{}: {:?}", model.name(), cmp);
        }
    }

    #[test]
    fn m1_identifiable_part_is_the_velocity() {
        let g = golden_tangent(QubitModel::M1, 0.3).unwrap();
        let cmp = compare_golden(&g).unwrap();
        assert!(cmp.velocity_error < 1e-7);
        assert!(cmp.mode_norms[1] < 1e-7);
        let vel = QubitModel::M1.velocity(0.3).unwrap();
        let computed = cmp.computed_a_id.to_matrix().unwrap();
        assert!(max_abs(&(computed - vel)) < 1e-7);
    }

    #[test]
    fn coordinates_round_trip() {
        let iso = QubitModel::M3.isometry(0.0).unwrap();
        let coords = complex_matrix(2, 2, &[c(0.3, 0.1), c(-1.0, 0.2), c(0.5, 0.0), c(0.0, 2.0)]);
        let a = from_periodic_coordinates(&iso, &coords).unwrap();
        assert!(iso.adjoint_times(&a).norm() < 1e-12);
        assert!(max_abs(&(periodic_coordinates(&iso, &a).unwrap() - coords)) < 1e-12);
    }

    #[test]
    fn snr_small_angles() {
        let d0 = snr_spectral_data(0.0).unwrap();
        assert!((d0.spectral_radius - 1.0).abs() < 1e-9);
        let d = snr_spectral_data(0.05).unwrap();
        assert!(d.z_branch_dominant);
        assert!(d.z_eigen_residual < 1e-12);
        let far = snr_spectral_data(std::f64::consts::FRAC_PI_4).unwrap();
        assert!(far.z_branch.abs() < 1e-15);
        assert!(far.z_eigen_residual < 1e-12);
    }
}
