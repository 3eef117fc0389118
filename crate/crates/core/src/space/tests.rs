use nalgebra::DMatrix;

use super::*;
use crate::random;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn grid3() -> GridFunctions {
    GridFunctions::new((0..3).map(|k| GridPoint::new(format!("s{k}"), vec![k as f64 / 2.0])).collect())
}

#[test]
fn norm_examples() {
    let cn = ComplexLr::new(2, Exponent::TWO);
    assert_eq!(cn.norm(&vec![c(3.0, 0.0), c(4.0, 0.0)]).unwrap(), 5.0);

    let g = grid3();
    assert_eq!(g.norm(&vec![c(1.0, 0.0), c(-2.0, 0.0), c(0.5, 0.0)]).unwrap(), 2.0);

    let m = MatrixSpace::new(2);
    let nil = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    assert!((m.norm(&nil).unwrap() - 1.0).abs() < 1e-14);

    assert!(matches!(cn.norm(&vec![c(1.0, 0.0)]), Err(crate::Error::DimensionMismatch { .. })));
    assert!(m.norm(&DMatrix::zeros(3, 3)).is_err());
}

#[test]
fn dual_apply_examples() {
    let g = grid3();
    let f = vec![c(1.0, 0.0), c(-2.0, 1.0), c(0.5, 0.0)];
    assert_eq!(g.dual_apply(&AtomicMeasure::point_mass(1, c(1.0, 0.0)), &f).unwrap(), f[1]);

    let m = MatrixSpace::new(2);
    let t = DMatrix::from_row_slice(2, 2, &[c(5.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(7.0, 0.0)]);
    let e1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
    let phi = MatrixFunctional::RankOne { x: e1.clone(), y: e1 };
    assert_eq!(m.dual_apply(&phi, &t).unwrap(), c(5.0, 0.0));

    let cn = ComplexLr::new(2, Exponent::TWO);
    let s = 1.0 / 2f64.sqrt();
    let v = cn.dual_apply(&vec![c(s, 0.0), c(s, 0.0)], &vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
    assert!(v.norm() < 1e-15);
}

#[test]
fn zero_functional_and_linearity() {
    let m = MatrixSpace::new(3);
    let mut rng = random::rng(3);
    let a = m.random_element(&mut rng);
    let b = m.random_element(&mut rng);
    let phi = m.random_functional(&mut rng);
    assert_eq!(m.dual_apply(&m.zero_functional(), &a).unwrap(), c(0.0, 0.0));
    let lam = c(0.3, -1.2);
    let lhs = m.dual_apply(&phi, &m.combine(&[lam, c(1.0, 0.0)], &[a.clone(), b.clone()])).unwrap();
    let rhs = lam * m.dual_apply(&phi, &a).unwrap() + m.dual_apply(&phi, &b).unwrap();
    assert!((lhs - rhs).norm() < 1e-12);
}

fn check_containment<S: TargetSpace>(space: &S, seed: u64) {
    let phis = sample_dual_ball(space, 64, seed);
    assert_eq!(phis.len(), 64);
    let mut rng = random::rng(seed ^ 0xabc);
    for phi in &phis {
        assert!(space.dual_norm(phi) <= 1.0 + 1e-12);
    }
    for _ in 0..1000 {
        let a = space.random_element(&mut rng);
        let n = space.norm(&a).unwrap();
        for phi in phis.iter().step_by(7) {
            assert!(space.dual_apply(phi, &a).unwrap().norm() <= n + 1e-10);
        }
        let nf = space.norming_functional(&a);
        assert!(space.dual_norm(&nf) <= 1.0 + 1e-12);
        assert!((space.dual_apply(&nf, &a).unwrap() - C64::new(n, 0.0)).norm() <= 1e-10 * n.max(1.0));
    }
}

#[test]
fn dual_ball_containment() {
    for r in ["1", "2", "3", "inf"] {
        check_containment(&ComplexLr::new(4, r.parse().unwrap()), 1);
    }
    check_containment(&grid3(), 2);
    check_containment(&MatrixSpace::new(3), 3);
}

#[test]
fn sampling_is_deterministic_and_includes_slate() {
    let g = grid3();
    let a = sample_dual_ball(&g, 10, 42);
    let b = sample_dual_ball(&g, 10, 42);
    assert_eq!(a, b);
    assert_eq!(a[0], AtomicMeasure::point_mass(0, c(1.0, 0.0)));
    for phi in &a {
        assert!(phi.total_variation() <= 1.0 + 1e-12);
    }

    let cn = ComplexLr::new(4, Exponent::TWO);
    let one = sample_dual_ball(&cn, 1, 0);
    assert_eq!(one.len(), 1);
    assert!((cn.dual_norm(&one[0]) - 1.0).abs() < 1e-15);
}

#[test]
fn maximize_examples() {
    let opts = SearchOptions::default();
    let cn = ComplexLr::new(3, Exponent::TWO);
    let (_, v) = dual_ball_maximize(&cn, |_| 0.0, &[], &opts);
    assert_eq!(v, 0.0);

    let c1 = ComplexLr::new(1, Exponent::TWO);
    let one = vec![c(1.0, 0.0)];
    let (phi, v) = dual_ball_maximize(&c1, |phi| c1.dual_apply(phi, &one).unwrap().norm(), &[], &opts);
    assert!((v - 1.0).abs() < 1e-12);
    assert!((c1.dual_norm(&phi) - 1.0).abs() < 1e-12);

    let m = MatrixSpace::new(2);
    let nil = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let (_, v) = dual_ball_maximize(&m, |phi| m.dual_apply(phi, &nil).unwrap().norm(), &[], &opts);
    assert!((v - 1.0).abs() < 1e-9);
}

#[test]
fn rank_one_sup_recovers_spectral_norm() {
    let m = MatrixSpace::new(3);
    let mut rng = random::rng(9);
    let opts = SearchOptions { samples: 64, restarts: 8, ..SearchOptions::default() };
    for _ in 0..5 {
        let t = m.random_element(&mut rng);
        let rank_one_only = |phi: &MatrixFunctional| match phi {
            MatrixFunctional::RankOne { .. } => m.dual_apply(phi, &t).unwrap().norm(),
            MatrixFunctional::Trace { .. } => 0.0,
        };
        let (_, v) = dual_ball_maximize(&m, rank_one_only, &[], &opts);
        let n = m.norm(&t).unwrap();
        assert!(v <= n + 1e-10);
        assert!((v - n).abs() < 1e-6 * n, "{v} vs {n}");
    }
}

#[test]
fn maximizer_dominates_fresh_samples() {
    let m = MatrixSpace::new(2);
    let mut rng = random::rng(5);
    let terms: Vec<_> = (0..3).map(|_| m.random_element(&mut rng)).collect();
    let objective = |phi: &MatrixFunctional| {
        let v: Vec<C64> = terms.iter().map(|t| m.dual_apply(phi, t).unwrap()).collect();
        crate::seq::p_norm_of(&v, Exponent::TWO)
    };
    let (_, best) = dual_ball_maximize(&m, objective, &[], &SearchOptions::default());
    for phi in sample_dual_ball(&m, 2000, 777) {
        assert!(objective(&phi) <= best + 1e-9);
    }
}

#[test]
fn descriptor_json() {
    let d: SpaceDescriptor = serde_json::from_str(r#"{"space":"cn","n":3,"r":"inf"}"#).unwrap();
    assert_eq!(d, SpaceDescriptor::Cn { n: 3, r: Exponent::Infinity });
    let d: SpaceDescriptor = serde_json::from_str(r#"{"space":"cgrid","points":[0.0, 0.5, {"label":"end","coords":[1.0]}]}"#).unwrap();
    match d {
        SpaceDescriptor::Cgrid { points } => {
            assert_eq!(points.len(), 3);
            assert_eq!(points[2].label, "end");
            assert_eq!(points[1].coords, vec![0.5]);
        }
        other => panic!("unexpected {other:?}"),
    }
    let d: SpaceDescriptor = serde_json::from_str(r#"{"space":"mat","d":2}"#).unwrap();
    assert_eq!(d, SpaceDescriptor::Mat { d: 2 });
}
