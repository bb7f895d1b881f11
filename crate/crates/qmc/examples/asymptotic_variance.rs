//! Asymptotic variance of a local observable from the transfer operator,
//! compared with finite-window variances n·Var(Q̄_n).
//!
//! `cargo run --example asymptotic_variance`

use qmc::ergodic::{analyze, ErgodicTol};
use qmc::qubit_example::QubitModel;
use qmc::statmodel::{asymptotic_variance, finite_window_variances, stationary_mean};

fn main() -> qmc::Result<()> {
    for (model, t) in [(QubitModel::M1, 0.35), (QubitModel::M2, 0.2), (QubitModel::M3, 0.2)] {
        let p = analyze(&model.isometry(t)?, ErgodicTol::default())?;
        let q = model.standard_observable();
        let v = asymptotic_variance(&p, &q)?;
        println!(
            "{} at θ = {t}: mean {:.6} (closed form {:.6}), σ² = {:.6}",
            model.name(),
            stationary_mean(&p, &q)?,
            model.closed_form_mean(t)?,
            v.sigma2
        );
        let w = finite_window_variances(&p, &q, 1024)?;
        for n in [1usize, 4, 16, 64, 256, 1024] {
            println!("  n={n:4}  n·Var = {:.6}", w[n - 1]);
        }
    }
    Ok(())
}
