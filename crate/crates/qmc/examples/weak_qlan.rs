//! Overlaps of n outputs at θ0 + x/√n and θ0 + y/√n against the Gaussian
//! prediction, with the fitted log-log slope of the error.
//!
//! `cargo run --release --example weak_qlan`

use qmc::core::linalg::*;
use qmc::core::random;
use qmc::ergodic::{analyze, ErgodicTol};
use qmc::gauge::{tangent_inner, TangentVector};
use qmc::qubit_example::QubitModel;
use qmc::statmodel::{loglog_slope, weak_qlan_error};

fn main() -> qmc::Result<()> {
    let iso = QubitModel::M1.isometry(0.3)?;
    let p = analyze(&iso, ErgodicTol::default())?;
    let mut r = random::rng(1, 0);
    let v = iso.matrix().clone();
    // identifiable directions of unit Fisher norm; gauge components would add
    // a second-order phase that the √n phase correction does not remove
    let mut pick = || -> qmc::Result<TangentVector> {
        let g = random::gaussian_matrix(4, 2, &mut r);
        let a = &g - &v * (v.adjoint() * &g);
        let n = tangent_inner(&p, &a, &a)?.re.sqrt();
        TangentVector::new(&iso, a / cr(n))
    };
    let x = pick()?;
    let y = pick()?;
    let phi = ket(2, 0);
    let (mut ns, mut errs) = (Vec::new(), Vec::new());
    for e in 6..=12 {
        let pt = weak_qlan_error(&p, &x, &y, 1 << e, &phi, true)?;
        println!(
            "n={:5}  overlap {:+.6}{:+.6}i  prediction {:+.6}{:+.6}i  error {:.2e}",
            pt.n, pt.overlap[0], pt.overlap[1], pt.prediction[0], pt.prediction[1], pt.error
        );
        ns.push(pt.n as f64);
        errs.push(pt.error);
    }
    println!("log-log slope {:.3}", loglog_slope(&ns, &errs));
    Ok(())
}
