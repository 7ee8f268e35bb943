use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eigencond::conditioning::{condition_report, condition_report_diagonal, ConditionReport};
use eigencond::extremal::{separation_functional, Exponent};
use eigencond::io::{read_configuration, write_configuration};
use eigencond::lattice::first_n_lattice_points;
use eigencond::linalg::random::{ginibre, random_unitary};
use eigencond::linalg::Tolerances;

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn distance(a: &ConditionReport, b: &ConditionReport) -> f64 {
    let mut worst = [
        rel(a.kappa_max_frob, b.kappa_max_frob),
        rel(a.kappa_max_op, b.kappa_max_op),
        rel(a.norm_frob, b.norm_frob),
        rel(a.norm_op, b.norm_op),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    for e in &a.per_eigenpair {
        let m = b
            .per_eigenpair
            .iter()
            .min_by(|x, y| (x.lambda - e.lambda).norm().total_cmp(&(y.lambda - e.lambda).norm()))
            .unwrap();
        worst = worst
            .max((m.lambda - e.lambda).norm() / a.norm_frob)
            .max(rel(e.kappa_lambda, m.kappa_lambda))
            .max(rel(e.kappa_x, m.kappa_x));
    }
    worst
}

#[test]
fn unitary_invariance_on_general_matrices() {
    let tol = Tolerances::default();
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=8);
        let a = ginibre(n, n, &mut rng);
        let u = random_unitary(n, &mut rng);
        let b = u.adjoint().matmul(&a).matmul(&u);
        let ra = condition_report(&a, &tol).unwrap();
        let rb = condition_report(&b, &tol).unwrap();
        assert_eq!(ra.per_eigenpair.len(), n);
        let d = distance(&ra, &rb);
        assert!(d <= 1e-8, "seed {seed}: {d:e}");
    }
}

#[test]
fn lattice_csv_pipeline() {
    let c = first_n_lattice_points(200).unwrap();
    let mut buf = Vec::new();
    write_configuration(&c, &mut buf).unwrap();
    let back = read_configuration(buf.as_slice()).unwrap();
    assert_eq!(back.points(), c.points());
    let r = condition_report_diagonal(&back).unwrap();
    let s2 = separation_functional(&back, Exponent::Finite(2.0)).unwrap();
    let sinf = separation_functional(&back, Exponent::Infinity).unwrap();
    assert_eq!(r.kappa_max_frob, s2);
    assert_eq!(r.kappa_max_op, sinf);
}
