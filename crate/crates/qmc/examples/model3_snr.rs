//! Signal-to-noise of the third qubit family: single-unit counting against the
//! pair projector, and the spectral radius that controls its decay.
//!
//! `cargo run --example model3_snr`

use qmc::ergodic::{analyze, ErgodicTol};
use qmc::qubit_example::{snr_spectral_data, QubitModel};
use qmc::statmodel::asymptotic_variance;
use qmc::trajectories::{strategy_mean, Strategy};

fn snr(strategy: Strategy, theta: f64) -> qmc::Result<f64> {
    let h = 1e-5;
    let slope = (strategy_mean(QubitModel::M3, strategy, theta + h)? - strategy_mean(QubitModel::M3, strategy, theta - h)?) / (2.0 * h);
    let meas = strategy.measurement();
    let values: Vec<f64> = (0..meas.outcomes()).map(|o| if o == 0 { 1.0 } else { 0.0 }).collect();
    let iso = QubitModel::M3.isometry(theta)?;
    let p = analyze(&iso.blocked(strategy.block()), ErgodicTol::default())?;
    let q = meas.observable(&values)?;
    let q = qmc::statmodel::LocalObservable::new(iso.k().pow(strategy.block() as u32), 1, q.matrix().clone())?;
    let v = asymptotic_variance(&p, &q)?;
    Ok(slope * slope / strategy.block() as f64 / v.sigma2)
}

fn main() -> qmc::Result<()> {
    println!("   θ     single SNR   pair SNR    radius    (1-2sin²θ)²");
    for theta in [0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7] {
        let d = snr_spectral_data(theta)?;
        println!(
            "{theta:5.2}  {:10.3e}  {:10.3e}  {:8.5}  {:8.5}{}",
            snr(Strategy::Counting, theta)?,
            snr(Strategy::PairProjector, theta)?,
            d.spectral_radius,
            d.z_branch,
            if d.z_branch_dominant { "" } else { "  (another eigenvalue dominates)" }
        );
    }
    Ok(())
}
