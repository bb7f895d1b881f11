//! The three qubit families: parameter intervals, periods, closed-form means
//! and the worked tangent matrices.
//!
//! `cargo run --example qubit_models`

use qmc::qubit_example::{compare_golden, golden_tangent, model_profile, verify_local_region, QubitModel};
use qmc::statmodel::stationary_mean;

fn main() -> qmc::Result<()> {
    for model in [QubitModel::M1, QubitModel::M2, QubitModel::M3] {
        let iv = model.interval();
        let t = model.reference_theta();
        let p = model_profile(model, t)?;
        let q = model.standard_observable();
        println!(
            "{}: θ in {:?}, reference {t}, period {}, mean {:.6} (closed form {:.6})",
            model.name(),
            iv,
            p.period(),
            stationary_mean(&p, &q)?,
            model.closed_form_mean(t)?
        );
        let reg = verify_local_region(model, iv.lo, t, 25)?;
        println!(
            "  region check: irreducible {}, monotone mean {}, periods {:?}",
            reg.all_irreducible, reg.mean_strictly_monotone, reg.periods.iter().collect::<std::collections::BTreeSet<_>>()
        );
        let g = compare_golden(&golden_tangent(model, if model == QubitModel::M1 { t } else { 0.0 })?)?;
        println!(
            "  worked tangent: velocity error {:.1e}, a_id error {:.1e}, displayed ‖V*A‖ {:.1e}",
            g.velocity_error, g.a_id_error, g.displayed_identifiability_defect
        );
    }
    Ok(())
}
