use nalgebra::DMatrix;

use super::*;
use crate::space::{AtomicMeasure, ComplexLr, GridFunctions, GridPoint, MatrixSpace};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn scalar_seq(values: &[f64], p: Exponent) -> OperatorSeq<ComplexLr> {
    OperatorSeq::new(ComplexLr::new(1, Exponent::TWO), values.iter().map(|&v| vec![c(v)]).collect(), p).unwrap()
}

fn basis_seq(n: usize, weight: impl Fn(usize) -> f64, p: Exponent) -> OperatorSeq<ComplexLr> {
    let terms = (0..n)
        .map(|i| {
            let mut v = vec![c(0.0); n];
            v[i] = c(weight(i + 1));
            v
        })
        .collect();
    OperatorSeq::new(ComplexLr::new(n, Exponent::TWO), terms, p).unwrap()
}

fn fast() -> SearchOptions {
    SearchOptions { restarts: 8, samples: 64, iterations: 200, ..SearchOptions::default() }
}

#[test]
fn apply_examples() {
    let a = scalar_seq(&[1.0, 0.5, 1.0 / 3.0], Exponent::TWO);
    let v = a.apply(&ScalarSeq::from_reals([1.0, 1.0, 1.0]));
    assert!((v[0].re - 11.0 / 6.0).abs() < 1e-15);
    assert_eq!(a.apply(&ScalarSeq::zeros(3)), vec![c(0.0)]);
    assert_eq!(a.apply(&ScalarSeq::basis(2)), vec![c(0.5)]);
    // entries beyond N meet zero terms
    assert_eq!(a.apply(&ScalarSeq::basis(7)), vec![c(0.0)]);
    assert!(OperatorSeq::new(ComplexLr::new(2, Exponent::TWO), vec![vec![c(1.0)]], Exponent::TWO).is_err());
}

#[test]
fn triple_norm_examples() {
    for p in ["4/3", "2", "3", "inf"] {
        let p: Exponent = p.parse().unwrap();
        let a = scalar_seq(&[3.0, -4.0, 1.0], p);
        let t = triple_norm(&a, &fast()).unwrap();
        let exact = p_norm_of_reals(&[3.0, 4.0, 1.0], p);
        assert!((t.value - exact).abs() < 1e-9 * exact, "{p}: {} vs {exact}", t.value);
    }
    let a = basis_seq(6, |i| 1.0 / (i as f64).sqrt(), Exponent::TWO);
    assert!((triple_norm(&a, &fast()).unwrap().value - 1.0).abs() < 1e-9);
    let a = basis_seq(6, |_| 1.0, Exponent::TWO);
    assert!((triple_norm(&a, &fast()).unwrap().value - 1.0).abs() < 1e-9);

    let empty = OperatorSeq::new(ComplexLr::new(1, Exponent::TWO), vec![], Exponent::TWO).unwrap();
    assert_eq!(triple_norm(&empty, &fast()).unwrap_err(), Error::EmptySequence);
    assert_eq!(operator_norm(&empty, &fast()).unwrap_err(), Error::EmptySequence);
}

#[test]
fn infinite_exponent_triple_norm_is_max_term() {
    let m = MatrixSpace::new(2);
    let mut rng = random::rng(11);
    let terms: Vec<_> = (0..4).map(|_| m.random_element(&mut rng)).collect();
    let a = OperatorSeq::new(m, terms, Exponent::INFINITY).unwrap();
    let t = triple_norm(&a, &fast()).unwrap();
    let max = a.term_norms().into_iter().fold(0.0, f64::max);
    assert_eq!(t.value, max);
    assert!((a.shadow_norm(&t.witness) - max).abs() < 1e-12);
}

#[test]
fn operator_norm_examples() {
    let a = scalar_seq(&[3.0, 4.0], Exponent::TWO);
    assert!((operator_norm(&a, &fast()).unwrap().value - 5.0).abs() < 1e-9);

    let m = MatrixSpace::new(2);
    let mut rng = random::rng(4);
    let single = OperatorSeq::new(m.clone(), vec![m.random_element(&mut rng)], "3".parse().unwrap()).unwrap();
    let n = single.term_norms()[0];
    assert!((operator_norm(&single, &fast()).unwrap().value - n).abs() < 1e-9 * n);

    let zero = SearchOptions { restarts: 0, ..fast() };
    assert_eq!(operator_norm(&a, &zero).unwrap().value, 0.0);
}

fn check_equality<S: TargetSpace>(a: &OperatorSeq<S>, label: &str) {
    let opts = SearchOptions::default();
    let t = triple_norm(a, &opts).unwrap().value;
    let o = operator_norm(a, &opts).unwrap().value;
    assert!((o - t).abs() <= 1e-3 * t.max(1.0), "{label} p={}: operator {o} triple {t}", a.exponent());
    assert!(t <= a.strong_norm() + 1e-12);
}

#[test]
fn norm_equality_across_spaces() {
    let mut rng = random::rng(2024);
    for p in ["4/3", "2", "3", "inf"] {
        let p: Exponent = p.parse().unwrap();

        let cn = ComplexLr::new(3, "3".parse().unwrap());
        let terms: Vec<_> = (0..3).map(|_| cn.random_element(&mut rng)).collect();
        check_equality(&OperatorSeq::new(cn, terms, p).unwrap(), "C^3 l^3");

        let grid = GridFunctions::new((0..4).map(|k| GridPoint::new(format!("{k}"), vec![k as f64])).collect());
        let terms: Vec<_> = (0..3).map(|_| grid.random_element(&mut rng)).collect();
        check_equality(&OperatorSeq::new(grid, terms, p).unwrap(), "C(grid)");

        let m = MatrixSpace::new(2);
        let terms: Vec<_> = (0..3).map(|_| m.random_element(&mut rng)).collect();
        check_equality(&OperatorSeq::new(m, terms, p).unwrap(), "M_2");
    }
}

#[test]
fn dual_pair_identity_and_holder_domination() {
    let m = MatrixSpace::new(3);
    let mut rng = random::rng(77);
    let p: Exponent = "3".parse().unwrap();
    let terms: Vec<_> = (0..5).map(|_| m.random_element(&mut rng)).collect();
    let a = OperatorSeq::new(m.clone(), terms, p).unwrap();
    for phi in sample_dual_ball(&m, 200, 5) {
        let shadow = a.dual_map(&phi).unwrap();
        let beta = ScalarSeq::new(random::gaussian_vec(&mut rng, 5));
        let lhs = beta.pair(&shadow);
        let rhs = m.dual_apply(&phi, &a.apply(&beta)).unwrap();
        assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        let bound = shadow.p_norm(p) * beta.p_norm(p.conjugate());
        assert!(rhs.norm() <= bound + 1e-10);
    }
    assert!(a.dual_map(&m.zero_functional()).unwrap().is_zero());
}

#[test]
fn point_mass_shadow_is_evaluation() {
    let grid = GridFunctions::new((0..3).map(|k| GridPoint::new(format!("{k}"), vec![k as f64])).collect());
    let f = vec![vec![c(1.0), c(2.0), c(3.0)], vec![c(-1.0), c(0.5), c(0.0)]];
    let a = OperatorSeq::new(grid, f, Exponent::TWO).unwrap();
    let s = a.dual_map(&AtomicMeasure::point_mass(1, c(1.0))).unwrap();
    assert_eq!(s.entries(), &[c(2.0), c(0.5)]);
}

#[test]
fn classify_examples() {
    let eps = [0.5, 0.2];
    let basis = classify(&basis_seq(20, |_| 1.0, Exponent::TWO), &eps, &fast()).unwrap();
    assert!(!basis.in_lpc);
    assert!(!basis.in_lp);
    assert!(basis.in_lpb);
    assert_eq!(basis.domain, "l^q");

    let harmonic = classify(&basis_seq(100, |i| 1.0 / (i as f64).sqrt(), Exponent::TWO), &eps, &fast()).unwrap();
    assert!(harmonic.in_lpc);
    assert!(!harmonic.in_lp);
    // m(eps) is the least m with 1/sqrt(m+1) < eps
    let ms: Vec<usize> = harmonic.certificates.iter().map(|c| c.cutoff_m).collect();
    assert_eq!(ms, vec![4, 25]);
    assert!(harmonic.triple_norm <= harmonic.strong_norm);
    assert!(harmonic.holder_chain_consistent);
    let growth: Vec<f64> = harmonic.strong_partial_norms.iter().map(|q| q.value).collect();
    assert!(growth.windows(2).all(|w| w[1] > w[0]));

    let single = classify(&scalar_seq(&[2.0], Exponent::ONE), &eps, &fast()).unwrap();
    assert!(single.in_lp && single.in_lpb && single.in_lpc);
    assert_eq!(single.domain, "c0");

    let json = serde_json::to_value(&harmonic).unwrap();
    assert!(json["criteria"].as_str().unwrap().contains("truncation"));
}

#[test]
fn classify_infinite_uses_term_nets() {
    let basis = classify(&basis_seq(8, |_| 1.0, Exponent::INFINITY), &[0.5], &fast()).unwrap();
    assert!(!basis.in_lpc);
    assert!(basis.in_lp);
    assert_eq!(basis.term_nets[0].size, 8);

    let constant = OperatorSeq::new(ComplexLr::new(1, Exponent::TWO), vec![vec![c(1.0)]; 8], Exponent::INFINITY).unwrap();
    let r = classify(&constant, &[0.5], &fast()).unwrap();
    assert!(r.in_lpc);
    assert_eq!(r.term_nets[0].size, 1);
}

#[test]
fn truncation_convergence_examples() {
    let n = 12;
    let opts = fast();
    let harmonic = basis_seq(n, |i| 1.0 / (i as f64).sqrt(), Exponent::TWO);
    let cutoffs: Vec<usize> = (0..=n).collect();
    let pts = truncation_convergence(&harmonic, &cutoffs, &opts).unwrap();
    for pt in &pts {
        let expected = if pt.n == n { 0.0 } else { 1.0 / ((pt.n + 1) as f64).sqrt() };
        assert!((pt.distance - expected).abs() < 1e-9, "{pt:?}");
    }
    assert!(pts.windows(2).all(|w| w[1].distance <= w[0].distance));

    let basis = basis_seq(n, |_| 1.0, Exponent::TWO);
    let pts = truncation_convergence(&basis, &[0, 5, 11, 12], &opts).unwrap();
    let d: Vec<f64> = pts.iter().map(|q| q.distance).collect();
    for v in &d[..3] {
        assert!((v - 1.0).abs() < 1e-9);
    }
    assert_eq!(d[3], 0.0);

    assert!(truncation_convergence(&basis_seq(3, |_| 1.0, Exponent::INFINITY), &[1], &opts).is_err());
}

#[test]
fn c0_decay_examples() {
    let constant = scalar_seq(&[0.7; 10], Exponent::INFINITY);
    let r = c0_decay_check(&constant, &[0.5, 0.1]);
    assert!(!r.decays);
    assert_eq!(r.points[0].cutoff, None);

    let units = basis_seq(10, |_| 1.0, Exponent::INFINITY);
    assert!(!c0_decay_check(&units, &[0.5]).decays);

    let m = MatrixSpace::new(2);
    let base = DMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(0.0), c(-1.0)]);
    let norm = m.norm(&base).unwrap();
    let terms: Vec<_> = (1..=30).map(|i| base.scale(0.5f64.powi(i))).collect();
    let geometric = OperatorSeq::new(m, terms, Exponent::INFINITY).unwrap();
    let eps = [0.5, 0.1, 1e-3];
    let r = c0_decay_check(&geometric, &eps);
    assert!(r.decays);
    for pt in &r.points {
        // least n with norm * 2^-(n+1) < eps
        let expected = (0..).find(|&k| norm * 0.5f64.powi(k + 1) < pt.epsilon).unwrap() as usize;
        assert_eq!(pt.cutoff, Some(expected));
    }
}

#[test]
fn sequence_input_builds_each_space() {
    let raw = r#"{"space": "cn", "n": 2, "r": "inf", "p": 3, "terms": [[1, 0], [[0, 1], 2]]}"#;
    let input: SequenceInput = serde_json::from_str(raw).unwrap();
    let AnySeq::Cn(a) = input.build(None).unwrap() else { panic!("expected C^n") };
    assert_eq!(a.len(), 2);
    assert_eq!(a.exponent(), "3".parse().unwrap());
    assert_eq!(a.terms()[1], vec![C64::new(0.0, 1.0), c(2.0)]);

    let raw = r#"{"space": "mat", "d": 2, "terms": [[1, 0, 0, 1], [0, 1, 0]]}"#;
    let input: SequenceInput = serde_json::from_str(raw).unwrap();
    assert_eq!(input.build(None).unwrap_err(), Error::DimensionMismatch { expected: 4, found: 3 });

    let raw = r#"{"space": "cgrid", "points": [0, 0.5, 1], "terms": [[1, 2, 3]]}"#;
    let input: SequenceInput = serde_json::from_str(raw).unwrap();
    let AnySeq::Grid(g) = input.build(Some(Exponent::INFINITY)).unwrap() else { panic!("expected C(grid)") };
    assert_eq!(g.exponent(), Exponent::INFINITY);
    assert_eq!(g.term_norms(), vec![3.0]);

    let back: SequenceInput = serde_json::from_str(&serde_json::to_string(&input).unwrap()).unwrap();
    assert_eq!(back.space, input.space);
}
