//! Quantum Fisher information of n outputs divided by n, approaching the rate
//! given by the identifiable tangent.
//!
//! `cargo run --release --example qfi_convergence`

use qmc::core::linalg::ket;
use qmc::ergodic::{analyze, ErgodicTol};
use qmc::qubit_example::QubitModel;
use qmc::statmodel::qfi_report;

fn main() -> qmc::Result<()> {
    let ns = [1usize, 2, 5, 10, 20, 50, 100, 200, 400];
    for model in [QubitModel::M1, QubitModel::M2, QubitModel::M3] {
        let t = model.reference_theta();
        let p = analyze(&model.isometry(t)?, ErgodicTol::default())?;
        let rep = qfi_report(&p, &model.tangent(t)?, &ket(2, 0), &ns)?;
        println!("{} at θ = {t}: rate {:.6}", model.name(), rep.rate);
        for ((n, f), res) in rep.n_values.iter().zip(&rep.f_n).zip(&rep.residuals) {
            println!("  n={n:4}  F_n/n={:10.6}  residual {res:+.2e}", f / *n as f64);
        }
    }
    Ok(())
}
