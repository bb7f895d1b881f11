//! Moment estimators from simulated records: how often the estimate leaves a
//! shrinking band around the true parameter.
//!
//! `cargo run --release --example localization`

use qmc::qubit_example::QubitModel;
use qmc::trajectories::{run_estimator, Strategy};

fn main() -> qmc::Result<()> {
    for (model, strategy, theta) in [
        (QubitModel::M1, Strategy::Counting, 0.35),
        (QubitModel::M2, Strategy::PlusMinus, 0.2),
        (QubitModel::M3, Strategy::PairProjector, 0.2),
    ] {
        for n in [500usize, 2000, 8000] {
            let run = run_estimator(model, strategy, theta, n, 400, 3, 0.1)?;
            println!(
                "{} {:?} n={n:5}: rmse {:.4}  band {:.4}  miss rate {:.3}",
                run.model, strategy, run.rmse, run.band, run.miss_rate
            );
        }
    }
    Ok(())
}
