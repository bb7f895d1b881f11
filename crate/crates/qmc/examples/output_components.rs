//! Finite-n overlaps of stationary output components on the shift, against
//! their predicted limits along each residue class of n.
//!
//! `cargo run --release --example output_components`

use qmc::core::linalg::*;
use qmc::core::random;
use qmc::ergodic::{analyze, ErgodicTol};
use qmc::gauge::tangent_inner;
use qmc::gaussian::{component_consistency, predicted_component_limit, ModePoint};
use qmc::qubit_example::QubitModel;
use qmc::statmodel::{component_inner, retract};

fn main() -> qmc::Result<()> {
    let iso = QubitModel::parse("shift")?.isometry(0.0)?;
    let p = analyze(&iso, ErgodicTol::default())?;
    let v = iso.matrix().clone();
    let pick = |seed: u64| -> qmc::Result<ComplexMatrix> {
        let g = random::gaussian_matrix(4, 2, &mut random::rng(seed, 0));
        let a = &g - &v * (v.adjoint() * &g);
        let n = tangent_inner(&p, &a, &a)?.re.sqrt();
        Ok(a * cr(0.1 / n))
    };
    let (xa, ya) = (pick(1)?, pick(2)?);
    let x = ModePoint::from_identifiable(&p, xa.clone())?;
    let y = ModePoint::from_identifiable(&p, ya.clone())?;

    for l in [5usize, 10, 20, 40, 80] {
        for r in 0..2 {
            let n = 2 * l + r;
            let t = 1.0 / (n as f64).sqrt();
            let vx = retract(&iso, &xa, t)?;
            let vy = retract(&iso, &ya, t)?;
            let got = component_inner(&vx, &vy, &p, (0, 0), (1, 0), n)?;
            let want = predicted_component_limit(&p, 0, 1, 0, 0, r, &x, &y)?;
            println!("n={n:3} (r={r})  <0|1> = {got:.6}  limit {want:.6}  error {:.2e}", (got - want).norm());
        }
    }
    let c = component_consistency(&p, 0, 1, 0, 0, 1, &x, &y)?;
    println!("limit vs Gram model: residual {:.1e}, prefactor ratio {}", c.residual, c.literature_prefactor_ratio);
    Ok(())
}
