use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use qmc::core::json::{complex_pair, matrix_to_value, MatrixJson};
use qmc::core::linalg::{cr, ket};
use qmc::core::random;
use qmc::ergodic::{analyze, SpectralProfile};
use qmc::gauge::{equivalence_witness, mode_decompose, split, tangent_inner, tangent_ranks, TangentVector};
use qmc::gaussian::{coherent_overlap, lambda_k, mixture_trace_distance, orbit_distance, zeta_gram, ModePoint};
use qmc::qubit_example::{compare_golden, golden_tangent, QubitModel};
use qmc::statmodel::{
    asymptotic_variance_with_cap, finite_window_variances, loglog_slope, qfi_finite, qfi_rate, stationary_mean,
    weak_qlan_error, LocalObservable,
};
use qmc::trajectories::{estimate, fluctuation_stats, BlockMeasurement, Strategy};
use qmc::{ComplexMatrix, Isometry, QmcError, Result};

use crate::config::{num, print_json, read_isometry, read_matrix, Format, IsoSource, RunConfig, Table};

fn profile(iso: &Isometry, cfg: &RunConfig) -> Result<SpectralProfile> {
    analyze(iso, cfg.tol()?)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| QmcError::InvalidInput(format!("bad {what} entry '{t}'"))))
        .collect()
}

/// A tangent read from a matrix file (unit-major `dk × d`), or the family's own.
#[derive(Debug, Clone, Args)]
pub struct TangentSource {
    /// Tangent matrix JSON file.
    #[arg(long)]
    pub tangent: Option<PathBuf>,
    /// The file holds the velocity dV/dθ rather than A = -i dV/dθ.
    #[arg(long)]
    pub velocity: bool,
    /// The file uses the system-major row order (row s·k + u).
    #[arg(long)]
    pub system_major: bool,
}

fn load_tangent(src: &TangentSource, iso: &Isometry, model: Option<(QubitModel, f64)>) -> Result<TangentVector> {
    match (&src.tangent, model) {
        (Some(path), _) => {
            let mut m = read_matrix(path)?;
            if src.system_major {
                m = qmc::core::isometry::system_major_to_unit_major(&m, iso.d(), iso.k());
            }
            if src.velocity {
                TangentVector::from_velocity(iso, &m)
            } else {
                TangentVector::new(iso, m)
            }
        }
        (None, Some((model, theta))) => model.tangent(theta),
        (None, None) => Err(QmcError::InvalidInput("give --tangent for an isometry read from a file".into())),
    }
}

pub fn cmd_analyze(cfg: &RunConfig, src: &IsoSource) -> Result<()> {
    let loaded = src.load_or(None)?;
    let p = profile(&loaded.iso, cfg)?;
    match cfg.format_or(Format::Json) {
        Format::Json => {
            let mut report = p.report();
            report["source"] = src.describe(&loaded);
            report["settings"] = cfg.settings();
            print_json(&report)
        }
        Format::Csv => {
            let mut t = Table::new(cfg, &["index", "re", "im", "modulus"]);
            t.comment(format!("period={} min_eig_rho_ss={:e}", p.period(), p.min_stationary_eigenvalue()));
            for (i, z) in p.eigenvalues().iter().enumerate() {
                t.row(vec![i.to_string(), num(z.re), num(z.im), num(z.norm())]);
            }
            t.print()
        }
    }
}

pub fn cmd_equiv(cfg: &RunConfig, a: &PathBuf, b: &PathBuf, tol: f64) -> Result<()> {
    let (v1, v2) = (read_isometry(a)?, read_isometry(b)?);
    profile(&v1, cfg)?;
    profile(&v2, cfg)?;
    let w = equivalence_witness(&v1, &v2, tol)?;
    let witness = w.as_ref().map(|w| {
        json!({
            "phase": complex_pair(w.phase),
            "unitary": matrix_to_value(&w.unitary),
            "residual": w.residual,
        })
    });
    print_json(&json!({
        "equivalent": w.is_some(),
        "witness": witness,
        "tol": tol,
        "settings": cfg.settings(),
    }))
}

fn tangent_bundle(p: &SpectralProfile, a: &TangentVector) -> Result<Value> {
    let sp = split(p.iso(), p, a)?;
    let modes = mode_decompose(p, &sp.a_id);
    let mut gram = Vec::new();
    for x in &modes {
        let mut row = Vec::new();
        for y in &modes {
            row.push(complex_pair(tangent_inner(p, x, y)?));
        }
        gram.push(row);
    }
    Ok(json!({
        "theta": sp.theta,
        "kgen": matrix_to_value(&sp.kgen),
        "a_id": matrix_to_value(&sp.a_id),
        "a_gauge": matrix_to_value(&sp.a_gauge),
        "identifiability_residual": sp.identifiability_residual,
        "reconstruction_residual": sp.reconstruction_residual,
        "condition": sp.condition,
        "modes": modes.iter().map(matrix_to_value).collect::<Vec<_>>(),
        "mode_gram": gram,
        "norm2": tangent_inner(p, &sp.a_id, &sp.a_id)?.re,
    }))
}

pub fn cmd_tangent(cfg: &RunConfig, src: &IsoSource, tan: &TangentSource) -> Result<()> {
    let loaded = src.load_or(None)?;
    let p = profile(&loaded.iso, cfg)?;
    let a = load_tangent(tan, &loaded.iso, loaded.model)?;
    let mut out = tangent_bundle(&p, &a)?;
    out["ranks"] = serde_json::to_value(tangent_ranks(&p)?)?;
    out["source"] = src.describe(&loaded);
    out["settings"] = cfg.settings();
    print_json(&out)
}

pub fn cmd_qfi(cfg: &RunConfig, src: &IsoSource, tan: &TangentSource, ns: &str, phi: usize) -> Result<()> {
    let loaded = src.load_or(Some("m1"))?;
    let p = profile(&loaded.iso, cfg)?;
    let a = load_tangent(tan, &loaded.iso, loaded.model)?;
    if phi >= loaded.iso.d() {
        return Err(QmcError::IndexOutOfRange(format!("initial basis state {phi} with d = {}", loaded.iso.d())));
    }
    let ns: Vec<usize> = parse_list(ns, "n")?;
    let rate = qfi_rate(&p, &a, &a)?;
    let psi = ket(loaded.iso.d(), phi);
    let f: Vec<f64> = ns.iter().map(|&n| qfi_finite(&a, &psi, n)).collect::<Result<_>>()?;
    match cfg.format_or(Format::Csv) {
        Format::Json => print_json(&json!({
            "n": ns, "f_n": f, "rate": rate, "initial_state": phi,
            "source": src.describe(&loaded), "settings": cfg.settings(),
        })),
        Format::Csv => {
            let mut t = Table::new(cfg, &["n", "f_n", "f_n_over_n", "rate", "relative_error"]);
            t.comment(format!("source={} initial_state={phi}", src.describe(&loaded)));
            t.comment("rate = 4 Tr(rho A_id* A_id)");
            for (&n, &fv) in ns.iter().zip(&f) {
                let r = fv / n as f64;
                t.row(vec![n.to_string(), num(fv), num(r), num(rate), num((r - rate).abs() / rate.abs().max(1e-300))]);
            }
            t.print()
        }
    }
}

fn load_observable(path: &Option<PathBuf>, block: usize, iso: &Isometry, model: Option<(QubitModel, f64)>) -> Result<LocalObservable> {
    match (path, model) {
        (Some(p), _) => LocalObservable::new(iso.k(), block, read_matrix(p)?),
        (None, Some((m, _))) => Ok(m.standard_observable()),
        (None, None) => Ok(LocalObservable::basis_projector(iso.k(), 0)),
    }
}

pub fn cmd_variance(cfg: &RunConfig, src: &IsoSource, obs: &Option<PathBuf>, block: usize, n_max: usize) -> Result<()> {
    let loaded = src.load_or(None)?;
    let p = profile(&loaded.iso, cfg)?;
    let q = load_observable(obs, block, &loaded.iso, loaded.model)?;
    let rep = asymptotic_variance_with_cap(&p, &q, cfg.cap_tensor)?;
    let windows = finite_window_variances(&p, &q, n_max)?;
    match cfg.format_or(Format::Csv) {
        Format::Json => print_json(&json!({
            "report": rep, "window_variances": windows,
            "source": src.describe(&loaded), "settings": cfg.settings(),
        })),
        Format::Csv => {
            let mut t = Table::new(cfg, &["n", "window_variance", "sigma2"]);
            t.comment(format!("source={} block={}", src.describe(&loaded), q.block()));
            t.comment(format!("mean={:e} sigma2={:e} tail={:e} condition={:e}", rep.mean, rep.sigma2, rep.tail, rep.condition));
            for (i, v) in windows.iter().enumerate() {
                t.row(vec![(i + 1).to_string(), num(*v), num(rep.sigma2)]);
            }
            t.print()
        }
    }
}

/// Two unit identifiable directions drawn from the stream `(seed, 0)`.
fn random_identifiable_pair(p: &SpectralProfile, seed: u64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let mut rng = random::rng(seed, 0);
    let v = p.iso().matrix();
    let mut draw = || {
        let g = random::gaussian_matrix(v.nrows(), v.ncols(), &mut rng);
        let a = &g - &v * (v.adjoint() * &g);
        let n = tangent_inner(p, &a, &a)?.re.sqrt();
        Ok::<_, QmcError>(a / cr(n))
    };
    let x = draw()?;
    Ok((x, draw()?))
}

pub fn cmd_converge(cfg: &RunConfig, src: &IsoSource, seed: u64, e_min: u32, e_max: u32, no_phase: bool) -> Result<()> {
    let loaded = src.load_or(Some("m1"))?;
    let p = profile(&loaded.iso, cfg)?;
    if e_min > e_max || e_max > 30 {
        return Err(QmcError::InvalidInput("need n-min-exp ≤ n-max-exp ≤ 30".into()));
    }
    let (xa, ya) = random_identifiable_pair(&p, seed)?;
    let x = TangentVector::new(&loaded.iso, xa)?;
    let y = TangentVector::new(&loaded.iso, ya)?;
    let phi = ket(loaded.iso.d(), 0);
    let pts = (e_min..=e_max)
        .map(|e| weak_qlan_error(&p, &x, &y, 1usize << e, &phi, !no_phase))
        .collect::<Result<Vec<_>>>()?;
    let ns: Vec<f64> = pts.iter().map(|q| q.n as f64).collect();
    let errs: Vec<f64> = pts.iter().map(|q| q.error).collect();
    let slope = if pts.len() >= 2 { loglog_slope(&ns, &errs) } else { f64::NAN };
    match cfg.format_or(Format::Csv) {
        Format::Json => print_json(&json!({
            "points": pts, "slope": slope, "seed": seed,
            "source": src.describe(&loaded), "settings": cfg.settings(),
        })),
        Format::Csv => {
            let mut t = Table::new(cfg, &["n", "overlap_re", "overlap_im", "prediction_re", "prediction_im", "error"]);
            t.comment(format!("source={} seed={seed} directions=two unit identifiable tangents", src.describe(&loaded)));
            for q in &pts {
                t.row(vec![
                    q.n.to_string(),
                    num(q.overlap[0]),
                    num(q.overlap[1]),
                    num(q.prediction[0]),
                    num(q.prediction[1]),
                    num(q.error),
                ]);
            }
            t.comment(format!("loglog_slope={slope:e}"));
            t.print()
        }
    }
}

pub fn cmd_limit_model(cfg: &RunConfig, src: &IsoSource, seed: u64, scales: &str) -> Result<()> {
    let loaded = src.load_or(Some("shift"))?;
    let p = profile(&loaded.iso, cfg)?;
    let scales: Vec<f64> = parse_list(scales, "scale")?;
    let (ea, fa) = random_identifiable_pair(&p, seed)?;
    let e = ModePoint::from_identifiable(&p, ea)?;
    let f = ModePoint::from_identifiable(&p, fa)?;
    let period = p.period();
    let mut rows = Vec::new();
    for &s in &scales {
        let x = e.scaled(s);
        let y = f.scaled(s);
        let lam = lambda_k(&p, &x, &y)?;
        let zxx = zeta_gram(&p, &x, &x)?;
        let zxy = zeta_gram(&p, &x, &y)?;
        rows.push(json!({
            "scale": s,
            "lambda_k": lam.iter().map(|z| complex_pair(*z)).collect::<Vec<_>>(),
            "zeta_gram_xx": zxx.iter().map(|z| complex_pair(*z)).collect::<Vec<_>>(),
            "zeta_gram_xy": zxy.iter().map(|z| complex_pair(*z)).collect::<Vec<_>>(),
            "coherent_overlap_xy": complex_pair(coherent_overlap(&p, &x, &y)?),
            "trace_distance_x_y": mixture_trace_distance(&p, &x, &y)?,
            "trace_distance_x_ux": mixture_trace_distance(&p, &x, &x.rotated(&p, 1))?,
            "trace_distance_x_1.3x": mixture_trace_distance(&p, &x, &x.scaled(1.3))?,
            "orbit_distance_x_y": orbit_distance(&p, &x, &y)?,
        }));
    }
    match cfg.format_or(Format::Json) {
        Format::Json => print_json(&json!({
            "period": period, "seed": seed, "grid": rows,
            "source": src.describe(&loaded), "settings": cfg.settings(),
        })),
        Format::Csv => {
            let mut header: Vec<String> = vec!["scale".into()];
            for k in 0..period {
                header.push(format!("lambda_{k}_re"));
                header.push(format!("lambda_{k}_im"));
            }
            for m in 0..period {
                header.push(format!("zeta_norm2_{m}"));
            }
            for h in ["trace_distance_x_y", "trace_distance_x_ux", "trace_distance_x_1.3x", "orbit_distance_x_y"] {
                header.push(h.into());
            }
            let mut t = Table::with_header(cfg, header);
            t.comment(format!("source={} seed={seed} period={period}", src.describe(&loaded)));
            for r in &rows {
                let mut v = vec![num(r["scale"].as_f64().unwrap_or(f64::NAN))];
                for z in r["lambda_k"].as_array().into_iter().flatten() {
                    v.push(num(z[0].as_f64().unwrap_or(f64::NAN)));
                    v.push(num(z[1].as_f64().unwrap_or(f64::NAN)));
                }
                for z in r["zeta_gram_xx"].as_array().into_iter().flatten() {
                    v.push(num(z[0].as_f64().unwrap_or(f64::NAN)));
                }
                for h in ["trace_distance_x_y", "trace_distance_x_ux", "trace_distance_x_1.3x", "orbit_distance_x_y"] {
                    v.push(num(r[h].as_f64().unwrap_or(f64::NAN)));
                }
                t.row(v);
            }
            t.print()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Counting,
    PlusMinus,
    Pair,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Counting => Strategy::Counting,
            StrategyArg::PlusMinus => Strategy::PlusMinus,
            StrategyArg::Pair => Strategy::PairProjector,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub src: IsoSource,
    /// Number of units per trajectory.
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Units per measured block.
    #[arg(long)]
    pub block: Option<usize>,
    /// Measurement and estimator for the qubit families.
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    /// Write the JSON summary here instead of a trailing comment line.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

pub fn cmd_simulate(cfg: &RunConfig, a: &SimulateArgs) -> Result<()> {
    let loaded = a.src.load_or(None)?;
    profile(&loaded.iso, cfg)?;
    let strategy: Option<Strategy> = match (a.strategy, loaded.model) {
        (Some(s), _) => Some(s.into()),
        (None, Some((QubitModel::M3, _))) if a.block == Some(2) => Some(Strategy::PairProjector),
        (None, Some((m, _))) if a.block.unwrap_or(1) == 1 => Some(Strategy::default_for(m)),
        _ => None,
    };
    let meas = match strategy {
        Some(s) => {
            if let Some(b) = a.block {
                if b != s.block() {
                    return Err(QmcError::InvalidInput(format!("strategy {s:?} measures blocks of {}, not {b}", s.block())));
                }
            }
            s.measurement()
        }
        None => BlockMeasurement::standard(loaded.iso.k(), a.block.unwrap_or(1)),
    };
    let b = meas.block();
    if a.n < b || a.trials == 0 {
        return Err(QmcError::InvalidInput("need n ≥ block and trials ≥ 1".into()));
    }
    let n_blocks = a.n / b;
    let mut values = vec![0.0; meas.outcomes()];
    values[0] = 1.0;
    let st = fluctuation_stats(&loaded.iso, &meas, &values, n_blocks, a.trials, a.seed, None)?;
    let estimates: Option<Vec<f64>> = match (strategy, loaded.model) {
        (Some(s), Some((m, _))) => Some(st.qbar.iter().map(|x| estimate(m, s, *x).unwrap_or(f64::NAN)).collect()),
        _ => None,
    };
    let mut header = vec!["trial", "seed", "qbar", "fluctuation"];
    if estimates.is_some() {
        header.push("estimate");
    }
    let mut t = Table::new(cfg, &header);
    t.comment(format!(
        "source={} units={} block={b} blocks={n_blocks} trials={} seed={} strategy={:?}",
        a.src.describe(&loaded),
        a.n,
        a.trials,
        a.seed,
        strategy
    ));
    t.comment("trial i draws from the ChaCha8 stream (seed, i); qbar counts outcome 0 per block");
    for i in 0..a.trials {
        let mut row = vec![i.to_string(), a.seed.to_string(), num(st.qbar[i]), num(st.fluctuations[i])];
        if let Some(e) = &estimates {
            row.push(num(e[i]));
        }
        t.row(row);
    }
    let mut summary = json!({
        "source": a.src.describe(&loaded),
        "units": a.n,
        "block": b,
        "blocks": n_blocks,
        "trials": a.trials,
        "seed": a.seed,
        "target_mean": st.target_mean,
        "target_variance": st.target_variance,
        "qbar": st.qbar_moments,
        "fluctuation": st.fluctuation_moments,
        "variance_z": st.variance_z(),
        "settings": cfg.settings(),
    });
    if let (Some(e), Some((_, theta))) = (&estimates, loaded.model) {
        let ok: Vec<f64> = e.iter().cloned().filter(|x| x.is_finite()).collect();
        let rmse = (ok.iter().map(|x| (x - theta).powi(2)).sum::<f64>() / ok.len().max(1) as f64).sqrt();
        summary["estimator"] = json!({ "strategy": strategy, "theta": theta, "rmse": rmse, "failed": e.len() - ok.len() });
    }
    match &a.summary {
        Some(path) => std::fs::write(path, serde_json::to_string_pretty(&summary)? + "\n")?,
        None => t.comment(format!("summary {}", serde_json::to_string(&summary)?)),
    }
    t.print()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportLevel {
    Summary,
    Full,
}

fn limit_model_type(p: &SpectralProfile, mode_norms: &[f64]) -> &'static str {
    let tiny = 1e-7;
    if p.period() == 1 {
        "gaussian shift"
    } else if mode_norms.iter().skip(1).all(|n| *n < tiny) {
        "gaussian shift (direction along the periodic submanifold)"
    } else if mode_norms[0] < tiny {
        "gaussian mixture"
    } else {
        "gaussian shift times gaussian mixture"
    }
}

pub fn cmd_example(cfg: &RunConfig, model: &str, theta: Option<f64>, level: ReportLevel) -> Result<()> {
    let model = QubitModel::parse(model)?;
    let theta = theta.unwrap_or(model.reference_theta());
    let iso = model.isometry(theta)?;
    let p = profile(&iso, cfg)?;
    let a = model.tangent(theta)?;
    let bundle = tangent_bundle(&p, &a)?;
    let sp = split(&iso, &p, &a)?;
    let norms: Vec<f64> = mode_decompose(&p, &sp.a_id)
        .iter()
        .map(|m| tangent_inner(&p, m, m).map(|z| z.re.max(0.0).sqrt()))
        .collect::<Result<_>>()?;
    let q = model.standard_observable();
    let mut out = json!({
        "model": model.name(),
        "theta": theta,
        "interval": model.interval().to_string(),
        "period": p.period(),
        "qfi_rate": qfi_rate(&p, &a, &a)?,
        "mode_norms": norms,
        "limit_model": limit_model_type(&p, &norms),
        "stationary_mean": stationary_mean(&p, &q)?,
        "closed_form_mean": model.closed_form_mean(theta).ok(),
        "settings": cfg.settings(),
    });
    if level == ReportLevel::Full {
        out["profile"] = p.report();
        out["tangent"] = bundle;
        out["system_major"] = serde_json::to_value(MatrixJson::from_matrix(&model.system_major(theta)?))?;
        out["asymptotic_variance"] = serde_json::to_value(asymptotic_variance_with_cap(&p, &q, cfg.cap_tensor)?)?;
        if (theta - model.reference_theta()).abs() < 1e-15 {
            if let Ok(g) = golden_tangent(model, theta) {
                out["displayed_comparison"] = serde_json::to_value(compare_golden(&g)?)?;
            }
        }
    }
    print_json(&out)
}
