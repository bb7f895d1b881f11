//! Split a tangent vector into its gauge part and its identifiable part, then
//! decompose the identifiable part into peripheral modes.
//!
//! `cargo run --example tangent_split -- m1 0.3`

use qmc::ergodic::{analyze, ErgodicTol};
use qmc::gauge::{mode_decompose, singular_dimension, split, tangent_inner, tangent_ranks};
use qmc::qubit_example::QubitModel;

fn main() -> qmc::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let model = QubitModel::parse(args.first().map(String::as_str).unwrap_or("m1"))?;
    let theta = match args.get(1) {
        Some(t) => t.parse().map_err(|_| qmc::QmcError::InvalidInput(format!("bad theta '{t}'")))?,
        None => model.reference_theta(),
    };
    let iso = model.isometry(theta)?;
    let p = analyze(&iso, ErgodicTol::default())?;
    let a = model.tangent(theta)?;
    let s = split(&iso, &p, &a)?;

    println!("{} at θ = {theta}, period {}", model.name(), p.period());
    println!("gauge generator K (θ = {:.6}):\n{}", s.theta, s.kgen);
    println!("identifiable part:\n{}", s.a_id);
    println!("‖V* a_id‖ = {:.1e}, reconstruction {:.1e}", s.identifiability_residual, s.reconstruction_residual);
    println!("Fisher norm of a_id: {:.6}", tangent_inner(&p, &s.a_id, &s.a_id)?.re);

    for (m, part) in mode_decompose(&p, &s.a_id).iter().enumerate() {
        println!("mode {m}: Frobenius norm {:.6}", part.norm());
    }
    let r = tangent_ranks(&p)?;
    let sd = singular_dimension(&p);
    println!("real ranks: tangent {}, identifiable {}, gauge {}", r.tangent, r.identifiable, r.gauge);
    println!("identifiable {} = non-identifiable {} + l {}", sd.d_id, sd.d_nonid, sd.l);
    Ok(())
}
