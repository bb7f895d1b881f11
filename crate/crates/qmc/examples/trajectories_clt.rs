//! Sampled measurement records: the spread of √N (Q̄ - m) over many trials
//! against the asymptotic variance.
//!
//! `cargo run --release --example trajectories_clt`

use qmc::qubit_example::QubitModel;
use qmc::trajectories::{fluctuation_stats, BlockMeasurement};

fn main() -> qmc::Result<()> {
    let iso = QubitModel::M1.isometry(0.35)?;
    let meas = BlockMeasurement::standard(2, 1);
    for n in [250usize, 1000, 4000] {
        let s = fluctuation_stats(&iso, &meas, &[1.0, 0.0], n, 2000, 42, None)?;
        println!(
            "N={n:5}: mean Q̄ {:.5} (target {:.5})  Var F {:.4} (σ² {:.4})  z {:+.2}",
            s.qbar_moments.mean,
            s.target_mean,
            s.fluctuation_moments.variance,
            s.target_variance,
            s.variance_z()
        );
    }
    Ok(())
}
