//! Monte Carlo sampling of sequential measurements on the output units.
//!
//! Each trial draws from a ChaCha8 generator seeded with the master seed and
//! positioned on stream `trial`, so results do not depend on how trials are
//! scheduled across threads.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::core::isometry::word_operators;
use crate::core::linalg::*;
use crate::core::{random, DensityMatrix, Isometry};
use crate::ergodic::{analyze, ErgodicTol};
use crate::error::{QmcError, Result};
use crate::qubit_example::QubitModel;
use crate::statmodel::{asymptotic_variance, stationary_mean, LocalObservable};

/// Outcomes with total probability below this stop the trajectory.
pub const DEGENERATE_PROB: f64 = 1e-14;

/// Measurement on `b` consecutive output units: an orthonormal basis of
/// `C^{k^b}` or a POVM of effects summing to the identity.
#[derive(Debug, Clone)]
pub enum BlockMeasurement {
    Basis { k: usize, b: usize, vectors: Vec<ComplexVector> },
    Povm { k: usize, b: usize, effects: Vec<ComplexMatrix> },
}

impl BlockMeasurement {
    pub fn standard(k: usize, b: usize) -> Self {
        let n = k.pow(b as u32);
        BlockMeasurement::Basis { k, b, vectors: (0..n).map(|i| ket(n, i)).collect() }
    }

    pub fn basis(k: usize, b: usize, vectors: Vec<ComplexVector>) -> Result<Self> {
        let n = k.pow(b as u32);
        if vectors.len() != n || vectors.iter().any(|v| v.len() != n) {
            return Err(QmcError::IncompleteMeasurement(format!("need {n} vectors of length {n}")));
        }
        let g = ComplexMatrix::from_fn(n, n, |i, j| vectors[i].dotc(&vectors[j]));
        let defect = (g - identity(n)).norm();
        if defect > 1e-10 {
            return Err(QmcError::IncompleteMeasurement(format!("basis is not orthonormal (defect {defect:.3e})")));
        }
        Ok(BlockMeasurement::Basis { k, b, vectors })
    }

    /// Orthonormal basis starting with the given vectors, completed against
    /// the standard basis.
    pub fn completed_basis(k: usize, b: usize, leading: &[ComplexVector]) -> Result<Self> {
        let n = k.pow(b as u32);
        let mut all: Vec<ComplexVector> = leading.iter().map(|v| v / cr(v.norm())).collect();
        all.extend((0..n).map(|i| ket(n, i)));
        let vectors = orthonormalize(&all, 1e-10);
        Self::basis(k, b, vectors)
    }

    pub fn povm(k: usize, b: usize, effects: Vec<ComplexMatrix>) -> Result<Self> {
        let n = k.pow(b as u32);
        let mut sum = zeros(n, n);
        for e in &effects {
            if e.nrows() != n || e.ncols() != n {
                return Err(QmcError::IncompleteMeasurement(format!("effects must be {n}x{n}")));
            }
            let (vals, _) = eigh(e);
            if vals.iter().any(|v| *v < -1e-10) || antihermitian_norm(e) > 1e-10 {
                return Err(QmcError::IncompleteMeasurement("effects must be positive".into()));
            }
            sum += e;
        }
        let defect = (sum - identity(n)).norm();
        if defect > 1e-10 {
            return Err(QmcError::IncompleteMeasurement(format!("effects sum to identity up to {defect:.3e}")));
        }
        Ok(BlockMeasurement::Povm { k, b, effects })
    }

    pub fn k(&self) -> usize {
        match self {
            BlockMeasurement::Basis { k, .. } | BlockMeasurement::Povm { k, .. } => *k,
        }
    }

    pub fn block(&self) -> usize {
        match self {
            BlockMeasurement::Basis { b, .. } | BlockMeasurement::Povm { b, .. } => *b,
        }
    }

    pub fn outcomes(&self) -> usize {
        match self {
            BlockMeasurement::Basis { vectors, .. } => vectors.len(),
            BlockMeasurement::Povm { effects, .. } => effects.len(),
        }
    }

    /// `Σ_j f_j E_j` as a local observable.
    pub fn observable(&self, values: &[f64]) -> Result<LocalObservable> {
        if values.len() != self.outcomes() {
            return Err(QmcError::DimensionMismatch(format!("{} values for {} outcomes", values.len(), self.outcomes())));
        }
        let n = self.k().pow(self.block() as u32);
        let mut q = zeros(n, n);
        match self {
            BlockMeasurement::Basis { vectors, .. } => {
                for (v, f) in vectors.iter().zip(values) {
                    q += projector(v) * cr(*f);
                }
            }
            BlockMeasurement::Povm { effects, .. } => {
                for (e, f) in effects.iter().zip(values) {
                    q += e * cr(*f);
                }
            }
        }
        LocalObservable::with_cap(self.k(), self.block(), q, usize::MAX)
    }
}

/// Per-outcome Kraus families `K̃_{j,l}` of the `b`-step instrument.
pub fn block_instrument(iso: &Isometry, meas: &BlockMeasurement) -> Result<Vec<Vec<ComplexMatrix>>> {
    if meas.k() != iso.k() {
        return Err(QmcError::UnitDimMismatch(format!("measurement on k = {}, chain has k = {}", meas.k(), iso.k())));
    }
    let words = word_operators(iso.kraus(), meas.block());
    let d = iso.d();
    let combine = |coeffs: &ComplexVector| -> ComplexMatrix {
        let mut m = zeros(d, d);
        for (w, c) in words.iter().zip(coeffs.iter()) {
            if *c != ZERO {
                m += w * c.conj();
            }
        }
        m
    };
    let out: Vec<Vec<ComplexMatrix>> = match meas {
        BlockMeasurement::Basis { vectors, .. } => vectors.iter().map(|v| vec![combine(v)]).collect(),
        BlockMeasurement::Povm { effects, .. } => effects
            .iter()
            .map(|e| {
                let root = hermitian_function(e, |x| x.max(0.0).sqrt());
                (0..root.nrows())
                    .map(|l| combine(&root.row(l).transpose().map(|z| z.conj())))
                    .filter(|m| m.norm() > 1e-15)
                    .collect()
            })
            .collect(),
    };
    let mut sum = zeros(d, d);
    for ks in &out {
        for k in ks {
            sum += k.adjoint() * k;
        }
    }
    let defect = (sum - identity(d)).norm();
    if defect > 1e-10 {
        return Err(QmcError::IncompleteMeasurement(format!("block instrument is not trace preserving ({defect:.3e})")));
    }
    Ok(out)
}

/// `K̃_j = ⟨ω_j|V^{(b)}⋯V^{(1)}` for a basis measurement.
pub fn block_kraus(iso: &Isometry, meas: &BlockMeasurement) -> Result<Vec<ComplexMatrix>> {
    match meas {
        BlockMeasurement::Basis { .. } => Ok(block_instrument(iso, meas)?.into_iter().map(|mut v| v.remove(0)).collect()),
        BlockMeasurement::Povm { .. } => Err(QmcError::InvalidInput(
            "a POVM outcome has several Kraus operators; use block_instrument".into(),
        )),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRecord {
    pub seed: u64,
    pub trial: u64,
    pub block: usize,
    pub outcomes: Vec<u32>,
    #[serde(skip)]
    pub final_state: ComplexMatrix,
}

/// Prepared sampler: instrument plus the eigen-decomposition of the initial state.
struct Sampler {
    instrument: Vec<Vec<ComplexMatrix>>,
    pure: bool,
    init_vals: Vec<f64>,
    init_vecs: ComplexMatrix,
    rho_in: ComplexMatrix,
}

impl Sampler {
    fn new(iso: &Isometry, rho_in: &DensityMatrix, meas: &BlockMeasurement) -> Result<Self> {
        if rho_in.dim() != iso.d() {
            return Err(QmcError::DimensionMismatch(format!("initial state has dimension {}", rho_in.dim())));
        }
        let instrument = block_instrument(iso, meas)?;
        let pure = instrument.iter().all(|ks| ks.len() == 1);
        let (init_vals, init_vecs) = eigh(rho_in.matrix());
        Ok(Sampler { instrument, pure, init_vals, init_vecs, rho_in: rho_in.matrix().clone() })
    }

    fn pick(weights: impl Iterator<Item = f64>, u: f64) -> usize {
        let mut acc = 0.0;
        let mut last = 0;
        for (j, w) in weights.enumerate() {
            acc += w;
            last = j;
            if u < acc {
                return j;
            }
        }
        last
    }

    /// Runs `n_blocks` steps, calling `visit` with each outcome.
    fn run(&self, n_blocks: usize, rng: &mut ChaCha8Rng, mut visit: impl FnMut(u32)) -> Result<ComplexMatrix> {
        if self.pure {
            // Unravel the initial state into its eigenvectors; rank-one
            // outcomes keep the conditional state pure.
            let u: f64 = rng.random();
            let idx = Self::pick(self.init_vals.iter().map(|v| v.max(0.0)), u * self.init_vals.iter().map(|v| v.max(0.0)).sum::<f64>());
            let mut psi = self.init_vecs.column(idx).into_owned();
            let mut cands: Vec<ComplexVector> = Vec::with_capacity(self.instrument.len());
            for _ in 0..n_blocks {
                cands.clear();
                let mut total = 0.0;
                for ks in &self.instrument {
                    let v = &ks[0] * &psi;
                    total += v.norm_squared();
                    cands.push(v);
                }
                if total < DEGENERATE_PROB {
                    return Err(QmcError::DegenerateState(format!("outcome probabilities sum to {total:.3e}")));
                }
                let u: f64 = rng.random::<f64>() * total;
                let j = Self::pick(cands.iter().map(|v| v.norm_squared()), u);
                let nrm = cands[j].norm();
                psi = &cands[j] / cr(nrm);
                visit(j as u32);
            }
            Ok(projector(&psi))
        } else {
            let mut rho = self.rho_in.clone();
            let mut cands: Vec<ComplexMatrix> = Vec::with_capacity(self.instrument.len());
            for _ in 0..n_blocks {
                cands.clear();
                let mut total = 0.0;
                for ks in &self.instrument {
                    let mut m = zeros(rho.nrows(), rho.ncols());
                    for k in ks {
                        m += k * &rho * k.adjoint();
                    }
                    total += m.trace().re;
                    cands.push(m);
                }
                if total < DEGENERATE_PROB {
                    return Err(QmcError::DegenerateState(format!("outcome probabilities sum to {total:.3e}")));
                }
                let u: f64 = rng.random::<f64>() * total;
                let j = Self::pick(cands.iter().map(|m| m.trace().re.max(0.0)), u);
                let p = cands[j].trace().re;
                rho = &cands[j] / cr(p);
                visit(j as u32);
            }
            Ok(rho)
        }
    }
}

/// One trajectory of `n_blocks` block measurements on stream `trial`.
pub fn sample_trial(
    iso: &Isometry,
    rho_in: &DensityMatrix,
    n_blocks: usize,
    meas: &BlockMeasurement,
    seed: u64,
    trial: u64,
) -> Result<TrajectoryRecord> {
    let sampler = Sampler::new(iso, rho_in, meas)?;
    let mut rng = random::rng(seed, trial);
    let mut outcomes = Vec::with_capacity(n_blocks);
    let final_state = sampler.run(n_blocks, &mut rng, |j| outcomes.push(j))?;
    Ok(TrajectoryRecord { seed, trial, block: meas.block(), outcomes, final_state })
}

pub fn sample(iso: &Isometry, rho_in: &DensityMatrix, n_blocks: usize, meas: &BlockMeasurement, seed: u64) -> Result<TrajectoryRecord> {
    sample_trial(iso, rho_in, n_blocks, meas, seed, 0)
}

/// Time averages `Q̄ = (1/N) Σ f(outcome)` of many independent trajectories.
pub fn block_averages(
    iso: &Isometry,
    rho_in: &DensityMatrix,
    meas: &BlockMeasurement,
    values: &[f64],
    n_blocks: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if values.len() != meas.outcomes() {
        return Err(QmcError::DimensionMismatch(format!("{} values for {} outcomes", values.len(), meas.outcomes())));
    }
    if n_blocks == 0 {
        return Err(QmcError::InvalidInput("need at least one block".into()));
    }
    let sampler = Sampler::new(iso, rho_in, meas)?;
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = random::rng(seed, t);
            let mut sum = 0.0;
            sampler.run(n_blocks, &mut rng, |j| sum += values[j as usize])?;
            Ok(sum / n_blocks as f64)
        })
        .collect()
}

/// Sample mean, variance and the standard error of the variance.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub variance_stderr: f64,
    pub mean_stderr: f64,
}

pub fn moments(xs: &[f64]) -> Moments {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    let variance = m2 * n / (n - 1.0).max(1.0);
    Moments {
        mean,
        variance,
        variance_stderr: ((m4 - m2 * m2).max(0.0) / n).sqrt(),
        mean_stderr: (variance / n).sqrt(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FluctuationStats {
    pub n_blocks: usize,
    pub trials: usize,
    pub seed: u64,
    /// Stationary mean of the block observable.
    pub target_mean: f64,
    /// Asymptotic variance of the block observable along non-overlapping blocks.
    pub target_variance: f64,
    pub qbar: Vec<f64>,
    /// `F = √N (Q̄ - m)`.
    pub fluctuations: Vec<f64>,
    pub qbar_moments: Moments,
    pub fluctuation_moments: Moments,
}

impl FluctuationStats {
    /// `|Var(F) - σ²|` in units of the standard error of `Var(F)`.
    pub fn variance_z(&self) -> f64 {
        let se = self.fluctuation_moments.variance_stderr.max(1e-300);
        (self.fluctuation_moments.variance - self.target_variance).abs() / se
    }
}

/// Fluctuations of a block observable diagonal in the measured basis,
/// averaged over `n_blocks` non-overlapping blocks. The reference mean and
/// variance are those of the chain coarse-grained to the block length.
pub fn fluctuation_stats(
    iso: &Isometry,
    meas: &BlockMeasurement,
    values: &[f64],
    n_blocks: usize,
    trials: usize,
    seed: u64,
    rho_in: Option<&DensityMatrix>,
) -> Result<FluctuationStats> {
    let blocked = iso.blocked(meas.block());
    let profile = analyze(&blocked, ErgodicTol::default())?;
    let single = match meas {
        BlockMeasurement::Basis { vectors, .. } => BlockMeasurement::Basis {
            k: blocked.k(),
            b: 1,
            vectors: vectors.clone(),
        },
        BlockMeasurement::Povm { effects, .. } => BlockMeasurement::Povm {
            k: blocked.k(),
            b: 1,
            effects: effects.clone(),
        },
    };
    let q = single.observable(values)?;
    let target_mean = stationary_mean(&profile, &q)?;
    let target_variance = asymptotic_variance(&profile, &q)?.sigma2;
    let start = rho_in.cloned().unwrap_or_else(|| profile.rho().clone());
    let qbar = block_averages(iso, &start, meas, values, n_blocks, trials, seed)?;
    let sn = (n_blocks as f64).sqrt();
    let fluctuations: Vec<f64> = qbar.iter().map(|q| sn * (q - target_mean)).collect();
    Ok(FluctuationStats {
        n_blocks,
        trials,
        seed,
        target_mean,
        target_variance,
        qbar_moments: moments(&qbar),
        fluctuation_moments: moments(&fluctuations),
        qbar,
        fluctuations,
    })
}

/// Measurement strategies with a moment estimator for the qubit families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Strategy {
    /// Standard basis on single units, counting outcome 0.
    Counting,
    /// `|±⟩` basis on single units, counting `+` (second family).
    PlusMinus,
    /// Projector `P_ω` on non-overlapping pairs, `ω = (√2|00⟩ - |11⟩)/√3`.
    PairProjector,
}

impl Strategy {
    pub fn default_for(model: QubitModel) -> Strategy {
        match model {
            QubitModel::M2 => Strategy::PlusMinus,
            _ => Strategy::Counting,
        }
    }

    pub fn measurement(&self) -> BlockMeasurement {
        match self {
            Strategy::Counting => BlockMeasurement::standard(2, 1),
            Strategy::PlusMinus => {
                let h = 0.5f64.sqrt();
                BlockMeasurement::basis(
                    2,
                    1,
                    vec![
                        ComplexVector::from_vec(vec![cr(h), cr(h)]),
                        ComplexVector::from_vec(vec![cr(h), cr(-h)]),
                    ],
                )
                .expect("orthonormal")
            }
            Strategy::PairProjector => BlockMeasurement::completed_basis(2, 2, &[omega()]).expect("orthonormal"),
        }
    }

    pub fn block(&self) -> usize {
        if *self == Strategy::PairProjector {
            2
        } else {
            1
        }
    }
}

/// `(√2|00⟩ - |11⟩)/√3`.
pub fn omega() -> ComplexVector {
    let s = 3f64.sqrt();
    ComplexVector::from_vec(vec![cr(2f64.sqrt() / s), ZERO, ZERO, cr(-1.0 / s)])
}

/// Stationary frequency of outcome 0 of the strategy at θ.
pub fn strategy_mean(model: QubitModel, strategy: Strategy, theta: f64) -> Result<f64> {
    let iso = model.isometry_any(theta)?;
    let meas = strategy.measurement();
    let ks = block_kraus(&iso, &meas)?;
    let n = ks[0].adjoint() * &ks[0];
    let rho = match analyze(&iso, ErgodicTol::default()) {
        Ok(p) => p.rho().matrix().clone(),
        Err(e) => return Err(e),
    };
    Ok(trace_product(&rho, &n).re)
}

/// Moment estimator: invert the stationary frequency of outcome 0.
pub fn estimate(model: QubitModel, strategy: Strategy, xbar: f64) -> Result<f64> {
    match (model, strategy) {
        (QubitModel::M1, Strategy::Counting) => Ok((1.0 / 3.0 - 2.0 / 3.0 * xbar).max(0.0).sqrt()),
        (QubitModel::M3, Strategy::Counting) => {
            let c2 = (3.5 - 6.0 * xbar).clamp(0.0, 1.0);
            Ok(c2.sqrt().acos())
        }
        (QubitModel::M2, Strategy::PlusMinus) => {
            // mean decreases on (-0.3, 0.3)
            bisect(|t| strategy_closed_m2(t) - xbar, -0.3 + 1e-9, 0.3 - 1e-9, true)
        }
        (QubitModel::M3, Strategy::PairProjector) => {
            let f = |t: f64| strategy_mean(model, strategy, t).unwrap_or(f64::NAN) - xbar;
            bisect(f, 1e-6, 0.3, false)
        }
        _ => Err(QmcError::InvalidInput(format!("no estimator for {} with {strategy:?}", model.name()))),
    }
}

fn strategy_closed_m2(t: f64) -> f64 {
    0.5 * (1.0 - 2.0 * t * (1.0 - 3.0 * t * t).sqrt())
}

/// Root of a monotone function on `[lo, hi]`, clamped to the endpoints.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, decreasing: bool) -> Result<f64> {
    let sign = if decreasing { -1.0 } else { 1.0 };
    let g = |t: f64| sign * f(t);
    if g(lo) >= 0.0 {
        return Ok(lo);
    }
    if g(hi) <= 0.0 {
        return Ok(hi);
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let v = g(mid);
        if v.is_nan() {
            return Err(QmcError::Numerical("estimator inversion hit an invalid point".into()));
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimatorRun {
    pub model: String,
    pub strategy: Strategy,
    pub theta: f64,
    pub n_units: usize,
    pub trials: usize,
    pub seed: u64,
    pub frequencies: Vec<f64>,
    pub estimates: Vec<f64>,
    pub rmse: f64,
    /// Localisation band `n^{-1/2 + δ}`.
    pub band: f64,
    pub band_exponent: f64,
    /// Fraction of trials with `|θ̂ - θ| > band`.
    pub miss_rate: f64,
    /// `(dm/dθ)² / (n Var(X̄))`, the signal-to-noise ratio per output unit.
    pub snr_per_unit: f64,
    pub mean_derivative: f64,
}

/// Runs a moment estimator on `trials` independent output records of
/// `n_units` units each, starting from the stationary state.
pub fn run_estimator(
    model: QubitModel,
    strategy: Strategy,
    theta: f64,
    n_units: usize,
    trials: usize,
    seed: u64,
    delta: f64,
) -> Result<EstimatorRun> {
    model.check_theta(theta)?;
    let iso = model.isometry(theta)?;
    let profile = analyze(&iso, ErgodicTol::default())?;
    let meas = strategy.measurement();
    let n_blocks = n_units / strategy.block();
    let mut values = vec![0.0; meas.outcomes()];
    values[0] = 1.0;
    let frequencies = block_averages(&iso, profile.rho(), &meas, &values, n_blocks, trials, seed)?;
    let estimates = frequencies
        .iter()
        .map(|x| estimate(model, strategy, *x))
        .collect::<Result<Vec<_>>>()?;
    let rmse = (estimates.iter().map(|e| (e - theta).powi(2)).sum::<f64>() / trials as f64).sqrt();
    let band = (n_units as f64).powf(-0.5 + delta);
    let miss = estimates.iter().filter(|e| (*e - theta).abs() > band).count();
    let h = 1e-5;
    let mean_derivative = (strategy_mean(model, strategy, theta + h)? - strategy_mean(model, strategy, theta - h)?) / (2.0 * h);
    let var = moments(&frequencies).variance;
    Ok(EstimatorRun {
        model: model.name(),
        strategy,
        theta,
        n_units,
        trials,
        seed,
        rmse,
        band,
        band_exponent: -0.5 + delta,
        miss_rate: miss as f64 / trials as f64,
        snr_per_unit: mean_derivative.powi(2) / (n_units as f64 * var.max(1e-300)),
        mean_derivative,
        frequencies,
        estimates,
    })
}

/// Exact distribution of the standard-basis record of `n` units, from the
/// output state; used to check the sampler.
pub fn born_probabilities(iso: &Isometry, rho_in: &DensityMatrix, n: usize, cap: usize) -> Result<Vec<f64>> {
    let out = crate::ergodic::output_state(iso, rho_in, n, cap)?;
    Ok((0..out.dim()).map(|i| out.matrix()[(i, i)].re).collect())
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
    fn shift_record_alternates() {
        let rec = sample(&shift(), &DensityMatrix::basis(2, 0), 8, &BlockMeasurement::standard(2, 1), 1).unwrap();
        assert_eq!(rec.outcomes, vec![1, 0, 1, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn block_kraus_single_unit_is_identity_map() {
        let iso = QubitModel::M1.isometry(0.3).unwrap();
        let ks = block_kraus(&iso, &BlockMeasurement::standard(2, 1)).unwrap();
        for (a, b) in ks.iter().zip(iso.kraus()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn pair_projector_vanishes_at_the_crossing() {
        let iso = QubitModel::M3.isometry(0.0).unwrap();
        let ks = block_kraus(&iso, &Strategy::PairProjector.measurement()).unwrap();
        assert!(ks[0].norm() < 1e-15);
    }

    #[test]
    fn same_seed_same_record() {
        let iso = QubitModel::M1.isometry(0.35).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        let m = BlockMeasurement::standard(2, 1);
        let a = sample_trial(&iso, &rho, 50, &m, 5, 3).unwrap();
        let b = sample_trial(&iso, &rho, 50, &m, 5, 3).unwrap();
        assert_eq!(a.outcomes, b.outcomes);
    }

    #[test]
    fn estimators_invert_their_means() {
        for (model, strategy, theta) in [
            (QubitModel::M1, Strategy::Counting, 0.35),
            (QubitModel::M2, Strategy::PlusMinus, 0.1),
            (QubitModel::M2, Strategy::PlusMinus, -0.2),
            (QubitModel::M3, Strategy::Counting, 0.7),
            (QubitModel::M3, Strategy::PairProjector, 0.1),
        ] {
            let m = strategy_mean(model, strategy, theta).unwrap();
            let t = estimate(model, strategy, m).unwrap();
            assert!((t - theta).abs() < 1e-7, "{model:?} {strategy:?}: {t}");
        }
    }
}
