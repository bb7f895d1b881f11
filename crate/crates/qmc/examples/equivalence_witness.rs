//! Output equivalence: two isometries give the same stationary outputs exactly
//! when they differ by a phase and a unitary on the system.
//!
//! `cargo run --example equivalence_witness`

use qmc::core::random;
use qmc::ergodic::{analyze, output_state, ErgodicTol};
use qmc::gauge::{act, equivalence_witness, stabiliser, GaugeElement};
use qmc::qubit_example::QubitModel;

fn main() -> qmc::Result<()> {
    let mut r = random::rng(5, 0);
    let v = random::random_isometry(3, 2, &mut r);
    let g = GaugeElement::random(3, &mut r);
    let w = act(&g, &v)?;
    let other = random::random_isometry(3, 2, &mut r);

    match equivalence_witness(&v, &w, 1e-8)? {
        Some(wit) => println!("gauge copy: equivalent, phase {:.6}, residual {:.1e}", wit.phase, wit.residual),
        None => println!("gauge copy: not equivalent"),
    }
    println!("independent draw: equivalent = {}", equivalence_witness(&v, &other, 1e-8)?.is_some());

    let pv = analyze(&v, ErgodicTol::default())?;
    let pw = analyze(&w, ErgodicTol::default())?;
    for n in 1..=5 {
        let a = output_state(&v, pv.rho(), n, 4096)?;
        let b = output_state(&w, pw.rho(), n, 4096)?;
        println!("n={n}: trace distance of outputs {:.1e}", a.trace_distance(&b));
    }

    // the third qubit family is symmetric under θ -> π - θ and θ -> -θ
    let m3 = QubitModel::M3;
    for (a, b) in [(0.4, std::f64::consts::PI - 0.4), (0.4, -0.4), (0.4, 0.5)] {
        let eq = equivalence_witness(&m3.isometry_any(a)?, &m3.isometry_any(b)?, 1e-8)?.is_some();
        println!("m3({a:.3}) ~ m3({b:.3}): {eq}");
    }

    let s = stabiliser(&analyze(&QubitModel::parse("shift")?.isometry(0.0)?, ErgodicTol::default())?);
    println!("stabiliser of the shift: order {}, residual {:.1e}", s.order, s.residual);
    Ok(())
}
