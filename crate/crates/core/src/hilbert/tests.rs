use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector};

use super::*;
use crate::random;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn mat(d: usize, rows: &[f64]) -> DMatrix<C64> {
    DMatrix::from_row_iterator(d, d, rows.iter().map(|&x| c(x, 0.0)))
}

fn shift() -> DMatrix<C64> {
    mat(2, &[0.0, 1.0, 0.0, 0.0])
}

fn shift_pair() -> OperatorTuple {
    OperatorTuple::new(vec![shift(), shift().transpose()], Exponent::TWO).unwrap()
}

fn identity_pair() -> OperatorTuple {
    OperatorTuple::new(vec![DMatrix::identity(2, 2), DMatrix::identity(2, 2)], Exponent::TWO).unwrap()
}

fn e(d: usize, k: usize) -> DVector<C64> {
    let mut v = DVector::zeros(d);
    v[k] = c(1.0, 0.0);
    v
}

fn random_tuple(rng: &mut random::SeededRng, d: usize, n: usize, p: Exponent) -> OperatorTuple {
    OperatorTuple::new((0..n).map(|_| random::gaussian_matrix(rng, d)).collect(), p).unwrap()
}

fn opts() -> SearchOptions {
    SearchOptions { restarts: 12, samples: 64, iterations: 400, ..SearchOptions::default() }
}

#[test]
fn construction_checks() {
    assert_eq!(OperatorTuple::new(vec![], Exponent::TWO).unwrap_err(), Error::EmptySequence);
    assert!(matches!(OperatorTuple::new(vec![shift()], Exponent::ONE), Err(Error::ExponentOutOfRange(_))));
    assert!(matches!(OperatorTuple::new(vec![shift()], Exponent::INFINITY), Err(Error::ExponentOutOfRange(_))));
    assert!(OperatorTuple::new(vec![shift(), DMatrix::identity(3, 3)], Exponent::TWO).is_err());
}

#[test]
fn pair_sequence_examples() {
    let id = OperatorTuple::new(vec![DMatrix::identity(3, 3)], Exponent::TWO).unwrap();
    let x = DVector::from_vec(vec![c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.5)]);
    let s = pair_sequence(&id, &x, &x).unwrap();
    assert!((s.entries()[0] - c(1.0, 0.0)).norm() < 1e-15);

    let n = OperatorTuple::new(vec![shift()], Exponent::TWO).unwrap();
    assert_eq!(pair_sequence(&n, &e(2, 1), &e(2, 0)).unwrap().entries(), &[c(1.0, 0.0)]);
    assert_eq!(pair_sequence(&n, &DVector::zeros(2), &e(2, 0)).unwrap_err(), Error::ZeroVector);
    assert!(matches!(pair_sequence(&n, &e(3, 0), &e(2, 0)), Err(Error::DimensionMismatch { .. })));

    let mut rng = random::rng(1);
    let t = random_tuple(&mut rng, 4, 5, Exponent::TWO);
    for _ in 0..100 {
        let x = DVector::from_vec(random::gaussian_vec(&mut rng, 4));
        let y = DVector::from_vec(random::gaussian_vec(&mut rng, 4));
        let beta = ScalarSeq::new(random::gaussian_vec(&mut rng, 5));
        let scale = x.norm() * y.norm() * beta.p_norm(Exponent::ONE) * 10.0;
        assert!(pairing_residual(&t, &x, &y, &beta).unwrap() <= 1e-12 * scale);
    }
}

#[test]
fn single_radius_examples() {
    let r = single_numerical_radius(&mat(2, &[1.0, 0.0, 0.0, -2.0]));
    assert!((r.value - 2.0).abs() < 1e-12);
    assert!((r.norm - 2.0).abs() < 1e-12);
    assert_eq!(single_numerical_radius(&DMatrix::zeros(3, 3)).value, 0.0);

    let r = single_numerical_radius(&shift());
    assert!((r.value - 0.5).abs() < 1e-6);
    assert!((r.norm - 1.0).abs() < 1e-12);
    let x = &r.witness;
    assert!((x.dotc(&(shift() * x)).norm() - 0.5).abs() < 1e-9);
    assert!(x[0].im.abs() < 1e-15 && x[0].re >= 0.0);

    let mut rng = random::rng(8);
    for _ in 0..10 {
        let g = random::gaussian_matrix(&mut rng, 4);
        let h = (&g + g.adjoint()) * c(0.5, 0.0);
        let rho = h.clone().symmetric_eigen().eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let r = single_numerical_radius(&h);
        assert!((r.value - rho).abs() < 1e-6 * rho);
        let w = joint_numerical_radius(&OperatorTuple::new(vec![h], Exponent::TWO).unwrap(), &opts());
        assert!((w.value - rho).abs() < 1e-6 * rho);
    }
}

#[test]
fn joint_radius_examples() {
    let z = DMatrix::zeros(2, 2);
    for p in ["4/3", "2", "3"] {
        let t = OperatorTuple::new(vec![DMatrix::identity(2, 2), z.clone(), z.clone()], p.parse().unwrap()).unwrap();
        assert!((joint_numerical_radius(&t, &opts()).value - 1.0).abs() < 1e-12);
    }
    assert!((joint_numerical_radius(&identity_pair(), &opts()).value - SQRT_2).abs() < 1e-12);
    let w = joint_numerical_radius(&shift_pair(), &opts());
    assert!((w.value - 1.0 / SQRT_2).abs() < 1e-9);
    assert!((w.witness.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn tuple_norm_examples() {
    let id = OperatorTuple::new(vec![DMatrix::identity(3, 3)], "3".parse().unwrap()).unwrap();
    assert!((operator_tuple_norm(&id, &opts()).value - 1.0).abs() < 1e-12);
    assert!((operator_tuple_norm(&identity_pair(), &opts()).value - SQRT_2).abs() < 1e-12);
    let n = operator_tuple_norm(&shift_pair(), &opts());
    assert!((n.value - 1.0).abs() < 1e-9);
    let pair = t_pair(&shift_pair(), &n.x, &n.y);
    assert!((pair - n.value).abs() < 1e-12);
}

fn t_pair(t: &OperatorTuple, x: &DVector<C64>, y: &DVector<C64>) -> f64 {
    t.pair_raw(x, y).unwrap().p_norm(t.exponent())
}

#[test]
fn polarization_examples() {
    let mut rng = random::rng(3);
    let t = random_tuple(&mut rng, 4, 5, Exponent::TWO);
    let zero = polarization_check(&t, &DVector::zeros(4), &DVector::zeros(4)).unwrap();
    assert_eq!(zero.residual, 0.0);
    for _ in 0..50 {
        let x = DVector::from_vec(random::gaussian_vec(&mut rng, 4));
        let y = DVector::from_vec(random::gaussian_vec(&mut rng, 4));
        let r = polarization_check(&t, &x, &y).unwrap();
        assert!(r.residual <= 1e-12 * r.scale, "{r:?}");
    }
    let id = OperatorTuple::new(vec![DMatrix::identity(2, 2)], Exponent::TWO).unwrap();
    let r = polarization_check(&id, &e(2, 0), &e(2, 1)).unwrap();
    assert!(r.residual < 1e-15);
}

#[test]
fn duality_examples() {
    let id = OperatorTuple::new(vec![DMatrix::identity(2, 2)], Exponent::TWO).unwrap();
    let r = radius_duality_check(&id, &opts());
    assert!((r.omega - 1.0).abs() < 1e-12 && (r.sup_w_beta - 1.0).abs() < 1e-12);

    let r = radius_duality_check(&identity_pair(), &opts());
    assert!((r.sup_w_beta - SQRT_2).abs() < 1e-9);
    assert!(r.gap <= 1e-9);

    let r = radius_duality_check(&shift_pair(), &opts());
    assert!((r.sup_w_beta - 1.0 / SQRT_2).abs() < 1e-3);
    assert!((r.beta.p_norm(Exponent::TWO) - 1.0).abs() < 1e-12);
}

#[test]
fn range_sample_examples() {
    let t = OperatorTuple::new(vec![DMatrix::identity(3, 3), DMatrix::zeros(3, 3)], Exponent::TWO).unwrap();
    let s = numerical_range_sample(&t, 50, 9);
    for (u, x) in s.points.iter().zip(&s.witnesses) {
        assert!((u.entries()[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(u.entries()[1], c(0.0, 0.0));
        assert!((x.norm() - 1.0).abs() < 1e-12);
    }
    assert_eq!(s, numerical_range_sample(&t, 50, 9));

    let mut rng = random::rng(4);
    let g = random::gaussian_matrix(&mut rng, 3);
    let h = (&g + g.adjoint()) * c(0.5, 0.0);
    let eig = h.clone().symmetric_eigen().eigenvalues;
    let (lo, hi) = (eig.min(), eig.max());
    let t = OperatorTuple::new(vec![h], Exponent::TWO).unwrap();
    for u in numerical_range_sample(&t, 200, 1).points {
        let v = u.entries()[0];
        assert!(v.im.abs() < 1e-12 && v.re >= lo - 1e-12 && v.re <= hi + 1e-12);
    }

    let nil = OperatorTuple::new(vec![shift()], Exponent::TWO).unwrap();
    let s = numerical_range_sample(&nil, 500, 2);
    assert!(s.points.iter().all(|u| u.entries()[0].norm() <= 0.5 + 1e-12));
    assert_eq!(s.header().len(), 1 + 2 + 4);
    assert_eq!(s.rows()[3].len(), 7);
    assert_eq!(pair_sample(&nil, 5, 2).header().len(), 1 + 2 + 8);
}

#[test]
fn ascent_direction_matches_finite_differences() {
    let mut rng = random::rng(12);
    for p in ["4/3", "2", "3"] {
        let p: Exponent = p.parse().unwrap();
        let t = random_tuple(&mut rng, 3, 4, p);
        let x = random::unit_vector(&mut rng, 3);
        let g = ascent_direction(&t, &x);
        let f = |v: &DVector<C64>| joint_objective(&t, &v.unscale(v.norm())).0;
        let h = 1e-6;
        for k in 0..6 {
            let mut dir = DVector::<C64>::zeros(3);
            dir[k / 2] = if k % 2 == 0 { c(1.0, 0.0) } else { c(0.0, 1.0) };
            let fd = (f(&(&x + &dir * c(h, 0.0))) - f(&(&x - &dir * c(h, 0.0)))) / (2.0 * h);
            let exact = if k % 2 == 0 { g[k / 2].re } else { g[k / 2].im };
            assert!((fd - exact).abs() <= 1e-6 * g.norm(), "p={p} k={k}: {fd} vs {exact}");
        }
    }
}

#[test]
fn sandwich_and_sup_swap() {
    let mut rng = random::rng(21);
    for (d, n, p) in [(2, 3, "2"), (3, 2, "4/3"), (3, 4, "3")] {
        let t = random_tuple(&mut rng, d, n, p.parse().unwrap());
        let r = analyze(&t, &opts(), 64, &[0.5]).unwrap();
        assert!(r.sandwich.holds, "{:?}", r.sandwich);
        assert!(r.sup_swap_gap < 2e-3, "{} vs {}", r.tuple_norm.value, r.dual_ball_norm);
        assert!(r.duality.gap < 2e-3, "{:?}", r.duality);
        for s in &r.single_radii {
            assert!(s.value >= 0.5 * s.norm - 1e-9 && s.value <= s.norm + 1e-9);
        }
        assert!(r.tails.is_some());
        assert_eq!(r.sample_points, 64);
    }
}

#[test]
fn input_round_trip() {
    let t = shift_pair();
    let json = serde_json::to_string(&TupleInput::from_tuple(&t)).unwrap();
    let back: TupleInput = serde_json::from_str(&json).unwrap();
    assert_eq!(back.build(None).unwrap(), t);
    let raw = r#"{"d": 2, "operators": [[1, 0, 0, [0, 1]]]}"#;
    let t: TupleInput = serde_json::from_str(raw).unwrap();
    assert_eq!(t.build(None).unwrap().operators()[0][(1, 1)], c(0.0, 1.0));
    let bad: TupleInput = serde_json::from_str(r#"{"d": 2, "operators": [[1, 0, 0]]}"#).unwrap();
    assert!(matches!(bad.build(None), Err(Error::DimensionMismatch { .. })));
}
