//! The Gaussian limit model on the period-two shift: mode overlaps, the
//! mixture Gram matrix and trace distances between limit states.
//!
//! `cargo run --example limit_model`

use qmc::core::linalg::*;
use qmc::core::random;
use qmc::ergodic::{analyze, ErgodicTol};
use qmc::gauge::tangent_inner;
use qmc::gaussian::*;
use qmc::qubit_example::QubitModel;

fn main() -> qmc::Result<()> {
    let iso = QubitModel::parse("shift")?.isometry(0.0)?;
    let p = analyze(&iso, ErgodicTol::default())?;
    let v = iso.matrix().clone();
    let unit = |seed: u64| -> qmc::Result<ComplexMatrix> {
        let g = random::gaussian_matrix(4, 2, &mut random::rng(seed, 0));
        let a = &g - &v * (v.adjoint() * &g);
        let n = tangent_inner(&p, &a, &a)?.re.sqrt();
        Ok(a / cr(n))
    };
    let x = ModePoint::from_identifiable(&p, unit(1)?)?;
    let y = ModePoint::from_identifiable(&p, unit(2)?)?;

    for s in [0.25, 0.5, 1.0, 2.0] {
        let (xs, ys) = (x.scaled(s), y.scaled(s));
        let l = lambda_k(&p, &xs, &ys)?;
        let ux = xs.rotated(&p, 1);
        println!(
            "scale {s}: λ = [{:.4}, {:.4}]  coherent {:.4}  d(x,y) {:.4}  d(x,Ux) {:.1e}  orbit {:.4}",
            l[0],
            l[1],
            coherent_overlap(&p, &xs, &ys)?,
            mixture_trace_distance(&p, &xs, &ys)?,
            mixture_trace_distance(&p, &xs, &ux)?,
            orbit_distance(&p, &xs, &ys)?
        );
    }
    let g = mixture_gram(&p, &[x.clone(), y.clone()])?;
    println!("mixture Gram: {} vectors, smallest eigenvalue {:.3e}", g.labels.len(), g.min_eigenvalue());
    println!("η̂(x,y) = {:?}", eta_hat(&p, &x, &y)?);
    println!("ζ(x,y)  = {:?}", zeta_gram(&p, &x, &y)?);
    Ok(())
}
