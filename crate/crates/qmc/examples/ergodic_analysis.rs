//! Spectral profile of a few channels: period, stationary state, peripheral
//! modes and the residuals of the defining identities.
//!
//! `cargo run --example ergodic_analysis`

use qmc::core::linalg::*;
use qmc::core::{random, DensityMatrix, Isometry};
use qmc::ergodic::{analyze, ergodic_projection, ErgodicTol};
use qmc::qubit_example::QubitModel;

fn show(name: &str, iso: &Isometry) -> qmc::Result<()> {
    let p = analyze(iso, ErgodicTol::default())?;
    println!("{name}: d={} k={} period={} primitive={}", p.d(), p.k(), p.period(), p.is_primitive());
    println!("  min eig of rho_ss  {:.4}", p.min_stationary_eigenvalue());
    println!("  subleading |λ|     {:.4}", p.subleading_modulus());
    for m in p.peripheral() {
        println!("  peripheral λ = {:.6}", m.eigenvalue);
    }
    println!("  block dims {:?}, max residual {:.1e}", p.block_dims(), p.residuals().max());
    Ok(())
}

fn main() -> qmc::Result<()> {
    show("shift", &QubitModel::parse("shift")?.isometry(0.0)?)?;
    show("m1(0.3)", &QubitModel::M1.isometry(0.3)?)?;
    show("m3(0.2)", &QubitModel::M3.isometry(0.2)?)?;
    let v = random::random_isometry(4, 2, &mut random::rng(1, 0));
    show("random(4,2)", &v)?;

    // any initial state relaxes, in Cesàro mean, to its ergodic projection
    let shift = QubitModel::parse("shift")?.isometry(0.0)?;
    let p = analyze(&shift, ErgodicTol::default())?;
    let rho = DensityMatrix::new(ket(2, 0) * ket(2, 0).adjoint())?;
    let e = ergodic_projection(&p, &rho);
    println!("ergodic projection of |0><0| under shift:\n{}", e.matrix());

    // a diagonal channel leaves every basis state invariant
    let k0 = real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let k1 = real_matrix(2, 2, &[0.0, 0.0, 0.0, 1.0]);
    match analyze(&Isometry::from_kraus(vec![k0, k1])?, ErgodicTol::default()) {
        Err(e) => println!("diagonal channel rejected: {} ({})", e.kind(), e),
        Ok(_) => println!("diagonal channel unexpectedly accepted"),
    }
    Ok(())
}
