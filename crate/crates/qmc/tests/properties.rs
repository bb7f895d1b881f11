//! Randomised properties of the library, seeded through proptest.

use proptest::prelude::*;

use qmc::core::isometry::word_operators;
use qmc::core::json::{IsometryJson, MatrixJson};
use qmc::core::linalg::*;
use qmc::core::{channel, matrix_sqrt_psd, random, DensityMatrix, Isometry, Picture};
use qmc::ergodic::{analyze, ergodic_projection, output_state, ErgodicTol};
use qmc::gauge::{act, equivalence_witness, split, tangent_inner, GaugeElement, TangentVector};
use qmc::gaussian::{coherent_overlap, lambda_k, mixture_trace_distance, predicted_component_limit, ModePoint};
use qmc::qubit_example::QubitModel;
use qmc::statmodel::{
    asymptotic_variance, component_inner, joint_overlap, qfi_finite, qfi_rate, retract, stationary_mean, LocalObservable,
};
use qmc::trajectories::{block_averages, block_instrument, born_probabilities, sample_trial, BlockMeasurement};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn iso_from(seed: u64, d: usize, k: usize) -> Isometry {
    random::random_isometry(d, k, &mut random::rng(seed, 0))
}

fn unit_identifiable(iso: &Isometry, seed: u64) -> ComplexMatrix {
    let p = analyze(iso, ErgodicTol::default()).unwrap();
    let v = iso.matrix();
    let g = random::gaussian_matrix(v.nrows(), v.ncols(), &mut random::rng(seed, 1));
    let a = &g - &v * (v.adjoint() * &g);
    let n = tangent_inner(&p, &a, &a).unwrap().re.sqrt();
    a / cr(n)
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn constructed_isometries_are_isometries(seed in any::<u64>(), d in 1usize..5, k in 1usize..4) {
        let v = iso_from(seed, d, k);
        prop_assert!(v.residual() <= 1e-10);
    }

    #[test]
    fn pictures_are_adjoint(seed in any::<u64>()) {
        let mut r = random::rng(seed, 2);
        let v = random::random_isometry(3, 2, &mut r);
        let rho = random::random_density(3, &mut r);
        let x = random::gaussian_matrix(3, 3, &mut r);
        let lhs = trace_product(&channel(&v, Picture::Schrodinger).apply(&rho), &x);
        let rhs = trace_product(&rho, &channel(&v, Picture::Heisenberg).apply(&x));
        prop_assert!((lhs - rhs).norm() <= 1e-10);
    }

    #[test]
    fn sqrt_is_holder_continuous(seed in any::<u64>()) {
        let mut r = random::rng(seed, 3);
        let a = random::random_density(3, &mut r) * cr(2.0);
        let b = &a + random::random_hermitian(3, &mut r) * cr(1e-3);
        let b = hermitian_function(&b, |x| x.max(0.0));
        let lhs = op_norm(&(matrix_sqrt_psd(&a).unwrap() - matrix_sqrt_psd(&b).unwrap()));
        prop_assert!(lhs <= op_norm(&(&a - &b)).sqrt() + 1e-8);
    }

    #[test]
    fn json_round_trip_is_exact(seed in any::<u64>(), d in 1usize..4, k in 1usize..4) {
        let v = iso_from(seed, d, k);
        let text = serde_json::to_string(&IsometryJson::from_isometry(&v)).unwrap();
        let back: IsometryJson = serde_json::from_str(&text).unwrap();
        let w = back.to_isometry().unwrap();
        prop_assert_eq!(v.matrix(), w.matrix());
        let m = random::gaussian_matrix(d, k + 1, &mut random::rng(seed, 4));
        let mj: MatrixJson = serde_json::from_str(&serde_json::to_string(&MatrixJson::from_matrix(&m)).unwrap()).unwrap();
        prop_assert_eq!(mj.to_matrix().unwrap(), m);
    }
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn periodic_structure_identities(seed in any::<u64>(), d1 in 1usize..3, d2 in 1usize..3) {
        // a random chain with a cyclic block structure of period 2
        let mut r = random::rng(seed, 5);
        let d = d1 + d2;
        let mut k0 = zeros(d, d);
        let mut k1 = zeros(d, d);
        let b01 = random::haar_isometry_matrix(2 * d1, d2, &mut r);
        let b10 = random::haar_isometry_matrix(2 * d2, d1, &mut r);
        for i in 0..d1 {
            for j in 0..d2 {
                k0[(i, d1 + j)] = b01[(i, j)];
                k1[(i, d1 + j)] = b01[(d1 + i, j)];
            }
        }
        for i in 0..d2 {
            for j in 0..d1 {
                k0[(d1 + i, j)] = b10[(i, j)];
                k1[(d1 + i, j)] = b10[(d2 + i, j)];
            }
        }
        let v = Isometry::from_kraus(vec![k0, k1]).unwrap();
        let Ok(p) = analyze(&v, ErgodicTol::default()) else { return Ok(()) };
        let per = p.period();
        prop_assert!(per % 2 == 0);
        prop_assert!(p.residuals().max() <= 1e-9);
        for m in p.peripheral() {
            let target = qmc::ergodic::root_of_unity(per, m.index as i64);
            prop_assert!((m.eigenvalue - target).norm() <= 1e-8);
        }
        let sum: ComplexMatrix = p.projections().iter().fold(zeros(d, d), |acc, x| acc + x);
        prop_assert!(max_abs(&(sum - identity(d))) <= 1e-9);
        for a in 0..per as i64 {
            let t = v.heisenberg(p.projection(a + 1));
            prop_assert!(max_abs(&(t - p.projection(a))) <= 1e-9);
            let s = v.schrodinger(&p.rho_block(a));
            prop_assert!(max_abs(&(s - p.rho_block(a + 1))) <= 1e-9);
            prop_assert!((p.rho_block(a).trace().re - 1.0 / per as f64).abs() <= 1e-9);
        }
        let rho = DensityMatrix::new(random::random_density(d, &mut r)).unwrap();
        let e = ergodic_projection(&p, &rho);
        prop_assert!(max_abs(&(ergodic_projection(&p, &e).matrix() - e.matrix())) <= 1e-9);
        let mut tp = rho.matrix().clone();
        for _ in 0..per {
            tp = v.schrodinger(&tp);
        }
        let after = ergodic_projection(&p, &DensityMatrix::new(hermitian_part(&tp)).unwrap());
        prop_assert!(max_abs(&(after.matrix() - e.matrix())) <= 1e-9);
    }

    #[test]
    fn joint_overlap_matches_brute_force(seed in any::<u64>(), n in 1usize..6) {
        let v1 = iso_from(seed, 2, 2);
        let v2 = iso_from(seed ^ 0x9e37, 2, 2);
        let phi = random::random_unit_vector(2, &mut random::rng(seed, 6));
        let fast = joint_overlap(&v1, &v2, &phi, n).unwrap();
        let w1 = word_operators(v1.kraus(), n);
        let w2 = word_operators(v2.kraus(), n);
        let brute: C64 = w1.iter().zip(&w2).map(|(a, b)| (a * &phi).dotc(&(b * &phi))).sum();
        prop_assert!((fast - brute).norm() <= 1e-10, "{} vs {}", fast, brute);
    }

    #[test]
    fn statistics_are_gauge_invariant(seed in any::<u64>()) {
        let mut r = random::rng(seed, 7);
        let v = random::random_isometry(2, 2, &mut r);
        let g = GaugeElement::random(2, &mut r);
        let gv = act(&g, &v).unwrap();
        let p = analyze(&v, ErgodicTol::default()).unwrap();
        let pg = analyze(&gv, ErgodicTol::default()).unwrap();
        let q = LocalObservable::new(2, 2, random::random_hermitian(4, &mut r)).unwrap();
        let (a, b) = (asymptotic_variance(&p, &q).unwrap(), asymptotic_variance(&pg, &q).unwrap());
        prop_assert!((stationary_mean(&p, &q).unwrap() - stationary_mean(&pg, &q).unwrap()).abs() <= 1e-9);
        prop_assert!((a.sigma2 - b.sigma2).abs() <= 1e-9 * a.sigma2.abs().max(1.0));
        let shifted = asymptotic_variance(&p, &q.shifted(2.5)).unwrap();
        prop_assert!((shifted.sigma2 - a.sigma2).abs() <= 1e-9 * a.sigma2.abs().max(1.0));
    }

    #[test]
    fn witness_maps_outputs(seed in any::<u64>()) {
        let mut r = random::rng(seed, 8);
        let v = random::random_isometry(3, 2, &mut r);
        let g = GaugeElement::random(3, &mut r);
        let gv = act(&g, &v).unwrap();
        let w = equivalence_witness(&v, &gv, 1e-8).unwrap().expect("gauge copies are equivalent");
        let wv = act(&w.gauge_element(), &v).unwrap();
        prop_assert!(max_abs(&(wv.matrix() - gv.matrix())) <= 1e-8);
        let rho = analyze(&v, ErgodicTol::default()).unwrap().rho().clone();
        let rho_g = analyze(&gv, ErgodicTol::default()).unwrap().rho().clone();
        for n in 1..=4 {
            let a = output_state(&v, &rho, n, 4096).unwrap();
            let b = output_state(&gv, &rho_g, n, 4096).unwrap();
            prop_assert!(2.0 * a.trace_distance(&b) <= 1e-9);
        }
    }

    #[test]
    fn split_is_gauge_covariant(seed in any::<u64>()) {
        let mut r = random::rng(seed, 9);
        let v = random::random_isometry(2, 2, &mut r);
        let g = GaugeElement::random(2, &mut r);
        let gv = act(&g, &v).unwrap();
        let p = analyze(&v, ErgodicTol::default()).unwrap();
        let pg = analyze(&gv, ErgodicTol::default()).unwrap();
        let raw = random::gaussian_matrix(4, 2, &mut r);
        let h = v.adjoint_times(&raw);
        let a = &raw - v.matrix() * ((&h - h.adjoint()) * cr(0.5));
        let s = split(&v, &p, &TangentVector::new(&v, a.clone()).unwrap()).unwrap();
        let ta = g.transport_tangent(&a, 2);
        let sg = split(&gv, &pg, &TangentVector::new(&gv, ta).unwrap()).unwrap();
        prop_assert!(max_abs(&(sg.a_id - g.transport_tangent(&s.a_id, 2))) <= 1e-8);
        let again = split(&v, &p, &TangentVector::new(&v, s.a_id.clone()).unwrap()).unwrap();
        prop_assert!(max_abs(&(again.a_id - &s.a_id)) <= 1e-9);
        prop_assert!(max_abs(&again.a_gauge) <= 1e-9);
    }

    #[test]
    fn mixture_distance_is_a_metric(seed in any::<u64>()) {
        let s = QubitModel::parse("shift").unwrap().isometry(0.0).unwrap();
        let p = analyze(&s, ErgodicTol::default()).unwrap();
        let pts: Vec<ModePoint> = (0..3)
            .map(|i| ModePoint::from_identifiable(&p, unit_identifiable(&s, seed.wrapping_add(i)) * cr(0.5 + i as f64 * 0.3)).unwrap())
            .collect();
        let d = |a: &ModePoint, b: &ModePoint| mixture_trace_distance(&p, a, b).unwrap();
        prop_assert!((d(&pts[0], &pts[1]) - d(&pts[1], &pts[0])).abs() <= 1e-10);
        prop_assert!(d(&pts[0], &pts[2]) <= d(&pts[0], &pts[1]) + d(&pts[1], &pts[2]) + 1e-10);
        prop_assert!(d(&pts[0], &pts[0].rotated(&p, 1)) <= 1e-9);
    }

    #[test]
    fn lambda_zero_is_the_coherent_overlap(seed in any::<u64>()) {
        let s = QubitModel::parse("shift").unwrap().isometry(0.0).unwrap();
        let p = analyze(&s, ErgodicTol::default()).unwrap();
        let x = ModePoint::from_identifiable(&p, unit_identifiable(&s, seed)).unwrap();
        let y = ModePoint::from_identifiable(&p, unit_identifiable(&s, seed ^ 1)).unwrap();
        let x0 = ModePoint::from_identifiable(&p, x.modes()[0].clone()).unwrap();
        let y0 = ModePoint::from_identifiable(&p, y.modes()[0].clone()).unwrap();
        let l = lambda_k(&p, &x0, &y0).unwrap();
        prop_assert!((l[0].exp() - coherent_overlap(&p, &x0, &y0).unwrap()).norm() <= 1e-12);
    }
}

#[test]
fn sampler_matches_born_probabilities() {
    let fixtures = [
        QubitModel::M1.isometry(0.3).unwrap(),
        QubitModel::M3.isometry(0.4).unwrap(),
        iso_from(11, 2, 2),
    ];
    let n = 3;
    let trials = 20_000u64;
    for v in &fixtures {
        let rho = analyze(v, ErgodicTol::default()).unwrap().rho().clone();
        let born = born_probabilities(v, &rho, n, 4096).unwrap();
        let meas = BlockMeasurement::standard(2, 1);
        let mut counts = vec![0usize; born.len()];
        for t in 0..trials {
            let rec = sample_trial(v, &rho, n, &meas, 99, t).unwrap();
            let idx = rec.outcomes.iter().fold(0usize, |acc, &o| acc * 2 + o as usize);
            counts[idx] += 1;
        }
        for (c, p) in counts.iter().zip(&born) {
            let sd = (p * (1.0 - p) / trials as f64).sqrt();
            let f = *c as f64 / trials as f64;
            assert!((f - p).abs() <= 4.0 * sd + 1e-12, "frequency {f} vs Born {p}");
        }
    }
}

#[test]
fn povm_sampler_matches_born_probabilities() {
    let v = iso_from(12, 2, 2);
    let rho = analyze(&v, ErgodicTol::default()).unwrap().rho().clone();
    let e0 = real_matrix(2, 2, &[0.7, 0.1, 0.1, 0.3]);
    let e1 = identity(2) - &e0;
    let meas = BlockMeasurement::povm(2, 1, vec![e0.clone(), e1.clone()]).unwrap();
    let out = output_state(&v, &rho, 2, 4096).unwrap();
    let effects = [e0, e1];
    let trials = 20_000u64;
    let mut counts = [0usize; 4];
    for t in 0..trials {
        let rec = sample_trial(&v, &rho, 2, &meas, 5, t).unwrap();
        counts[rec.outcomes[0] as usize * 2 + rec.outcomes[1] as usize] += 1;
    }
    for i in 0..2 {
        for j in 0..2 {
            let p = trace_product(out.matrix(), &kron(&effects[i], &effects[j])).re;
            let f = counts[2 * i + j] as f64 / trials as f64;
            let sd = (p * (1.0 - p) / trials as f64).sqrt();
            assert!((f - p).abs() <= 4.0 * sd, "({i},{j}) frequency {f} vs Born {p}");
        }
    }
}

#[test]
fn instruments_conserve_probability() {
    for (seed, b) in [(1u64, 1usize), (2, 2), (3, 3)] {
        let v = iso_from(seed, 3, 2);
        let ops = block_instrument(&v, &BlockMeasurement::standard(2, b)).unwrap();
        let sum = ops.iter().flatten().fold(zeros(3, 3), |acc, k| acc + k.adjoint() * k);
        assert!(max_abs(&(sum - identity(3))) <= 1e-10);
    }
}

#[test]
fn trial_parallelism_is_deterministic() {
    let v = QubitModel::M1.isometry(0.35).unwrap();
    let rho = analyze(&v, ErgodicTol::default()).unwrap().rho().clone();
    let meas = BlockMeasurement::standard(2, 1);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| block_averages(&v, &rho, &meas, &[1.0, 0.0], 500, 64, 21).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(3));
}

#[test]
fn closed_form_means_and_periods_on_grids() {
    for model in [QubitModel::M1, QubitModel::M2, QubitModel::M3] {
        let q = model.standard_observable();
        for t in model.interval().grid(50) {
            let p = analyze(&model.isometry(t).unwrap(), ErgodicTol::default()).unwrap();
            let m = stationary_mean(&p, &q).unwrap();
            assert!((m - model.closed_form_mean(t).unwrap()).abs() <= 1e-10, "{} at {t}", model.name());
            let expected = if model == QubitModel::M1 { 2 } else { 1 };
            assert_eq!(p.period(), expected, "{} at {t}", model.name());
        }
        if model != QubitModel::M1 {
            let p = analyze(&model.isometry(0.0).unwrap(), ErgodicTol::default()).unwrap();
            assert_eq!(p.period(), 2);
        }
    }
}

#[test]
fn m3_reflections_are_output_equivalent() {
    for t in [0.1, 0.4, 0.9, 1.3] {
        let v = QubitModel::M3.isometry(t).unwrap();
        for other in [std::f64::consts::PI - t, -t] {
            let w = QubitModel::M3.isometry_any(other).unwrap();
            assert!(equivalence_witness(&v, &w, 1e-8).unwrap().is_some(), "θ = {t}, {other}");
        }
    }
}

#[test]
fn qfi_residual_shrinks_on_the_families() {
    let phi = ket(2, 0);
    for model in [QubitModel::M1, QubitModel::M2, QubitModel::M3] {
        let t = model.reference_theta();
        let p = analyze(&model.isometry(t).unwrap(), ErgodicTol::default()).unwrap();
        let a = model.tangent(t).unwrap();
        let rate = qfi_rate(&p, &a, &a).unwrap();
        let res: Vec<f64> = [10usize, 20, 40, 80, 160]
            .iter()
            .map(|&n| (qfi_finite(&a, &phi, n).unwrap() / n as f64 - rate).abs())
            .collect();
        assert!(res.windows(2).all(|w| w[1] <= w[0] + 1e-9), "{}: {res:?}", model.name());
    }
}

#[test]
fn component_limits_on_periodic_fixtures() {
    // m3 at 0 mixes slowly (subleading eigenvalue near 0.986), so its
    // errors only start falling once n is well past the correlation length
    for (model, lengths) in [(QubitModel::M2, [5usize, 10, 20, 40]), (QubitModel::M3, [160, 320, 640, 1280])] {
        let v = model.isometry(0.0).unwrap();
        let p = analyze(&v, ErgodicTol::default()).unwrap();
        let xa = unit_identifiable(&v, 3) * cr(0.2);
        let ya = unit_identifiable(&v, 4) * cr(0.2);
        let x = ModePoint::from_identifiable(&p, xa.clone()).unwrap();
        let y = ModePoint::from_identifiable(&p, ya.clone()).unwrap();
        let errs: Vec<f64> = lengths
            .iter()
            .map(|&l| {
                let mut worst: f64 = 0.0;
                for r in 0..2 {
                    let n = 2 * l + r;
                    let t = 1.0 / (n as f64).sqrt();
                    let vx = retract(&v, &xa, t).unwrap();
                    let vy = retract(&v, &ya, t).unwrap();
                    for a in 0..2 {
                        for b in 0..2 {
                            let got = component_inner(&vx, &vy, &p, (a, 0), (b, 0), n).unwrap();
                            let want = predicted_component_limit(&p, a, b, 0, 0, r, &x, &y).unwrap();
                            worst = worst.max((got - want).norm());
                        }
                    }
                }
                worst
            })
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{}: {errs:?}", model.name());
    }
}
