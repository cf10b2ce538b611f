use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::*;
use crate::groups::{GroupElem, GroupSpec};

fn unipotent(p: u64) -> (GroupSpec, Vec<GroupElem>) {
    let g = GroupSpec::over_integers_mod(p, 2).unwrap();
    let a = g.mat2(1, 1, 0, 1).unwrap();
    let b = g.mat2(1, 0, 1, 1).unwrap();
    let s = vec![a.clone(), g.inv(&a), b.clone(), g.inv(&b)];
    (g, s)
}

fn cycle(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|x| vec![(x + 1) % n, (x + n - 1) % n]).collect()
}

fn complete(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|x| (0..n).filter(|&y| y != x).collect()).collect()
}

#[test]
fn circulant_spectrum() {
    let op = CayleyOperator::<f64>::from_table(&cycle(4), OperatorMode::Dense).unwrap();
    let ev = dense_spectrum(&op).unwrap();
    for (got, want) in ev.iter().zip([1.0, 0.0, 0.0, -1.0]) {
        assert!((got - want).abs() < 1e-12, "{ev:?}");
    }
}

#[test]
fn complete_graph_lambda2() {
    let op = CayleyOperator::<f64>::from_table(&complete(6), OperatorMode::Dense).unwrap();
    for method in [Method::Dense, Method::Iterative] {
        let r = spectrum_top2(&op, method, &IterativeOptions::default()).unwrap();
        assert!((r.lambda2 + 0.2).abs() < 1e-9, "{method}: {}", r.lambda2);
    }
}

#[test]
fn operator_is_doubly_stochastic() {
    let (g, s) = unipotent(3);
    let op = CayleyOperator::<f64>::build(&g, &s, OperatorMode::Dense, 1 << 20).unwrap();
    let m = op.to_dense().unwrap();
    assert_eq!(m.nrows(), 24);
    for i in 0..24 {
        assert!((m.row(i).sum() - 1.0).abs() < 1e-12);
        assert!((m.column(i).sum() - 1.0).abs() < 1e-12);
    }
    assert_eq!(m, m.transpose());
}

#[test]
fn rejects_bad_generators() {
    let (g, s) = unipotent(5);
    let err = CayleyOperator::<f64>::build(&g, &s[..3], OperatorMode::MatrixFree, 1 << 20);
    assert_eq!(err.unwrap_err(), SpectralError::NotSymmetric);
    let err = CayleyOperator::<f64>::build(&g, &[], OperatorMode::MatrixFree, 1 << 20);
    assert_eq!(err.unwrap_err(), SpectralError::EmptyGenerators);
    let (big, t) = unipotent(17);
    let err = CayleyOperator::<f64>::build(&big, &t, OperatorMode::Dense, 1 << 20);
    assert!(matches!(err, Err(SpectralError::TooLargeForDense(4896))));
}

#[test]
fn iterative_matches_dense() {
    for p in [3, 5, 7, 11] {
        let (g, s) = unipotent(p);
        let op = CayleyOperator::<f64>::build(&g, &s, OperatorMode::Dense, 1 << 20).unwrap();
        let opts = IterativeOptions::default();
        let d = spectrum_top2(&op, Method::Dense, &opts).unwrap();
        let i = spectrum_top2(&op, Method::Iterative, &opts).unwrap();
        assert!((d.lambda2 - i.lambda2).abs() < 1e-6, "p={p}");
        assert!(i.residual <= 1e-9);
        assert!((d.lambda1 - 1.0).abs() < 1e-9);
    }
}

#[test]
fn single_precision_iterative() {
    let (g, s) = unipotent(7);
    let op = CayleyOperator::<f32>::build(&g, &s, OperatorMode::MatrixFree, 1 << 20).unwrap();
    let r = spectrum_top2(&op, Method::Iterative, &IterativeOptions::default()).unwrap();
    assert!((r.lambda2 as f64 - 0.853_553_390_593_273_7).abs() < 1e-4);
}

#[test]
fn disconnected_graph_reports_one() {
    let (g, s) = unipotent(5);
    let op = CayleyOperator::<f64>::build(&g, &s[..2], OperatorMode::Dense, 1 << 20).unwrap();
    for method in [Method::Dense, Method::Iterative] {
        let r = spectrum_top2(&op, method, &IterativeOptions::default()).unwrap();
        assert!((r.lambda2 - 1.0).abs() < 1e-9);
        assert!(r.disconnected);
    }
}

#[test]
fn cheeger_small_graphs() {
    let c4 = CayleyOperator::<f64>::from_table(&cycle(4), OperatorMode::MatrixFree).unwrap();
    assert_eq!(cheeger_exhaustive(&c4).unwrap().value, 1.0);
    let k4 = CayleyOperator::<f64>::from_table(&complete(4), OperatorMode::MatrixFree).unwrap();
    assert_eq!(cheeger_exhaustive(&k4).unwrap().value, 2.0);
    let (g, s) = unipotent(5);
    let big = CayleyOperator::<f64>::build(&g, &s, OperatorMode::MatrixFree, 1 << 20).unwrap();
    assert!(matches!(cheeger_exhaustive(&big), Err(SpectralError::TooLarge(120))));
}

#[test]
fn cheeger_inequality_sl2_f3() {
    let (g, s) = unipotent(3);
    let op = CayleyOperator::<f64>::build(&g, &s, OperatorMode::Dense, 1 << 20).unwrap();
    let c = cheeger_exhaustive(&op).unwrap();
    let r = spectrum_top2(&op, Method::Dense, &IterativeOptions::default()).unwrap();
    assert!(c.value <= s.len() as f64);
    assert!(c.value + 1e-12 >= s.len() as f64 * (1.0 - r.lambda2) / 2.0);
}

#[test]
fn trace_moment_identities() {
    let (g, s) = unipotent(3);
    let t1 = trace_moment(&g, &s, 1).unwrap();
    assert_eq!(t1, BigRational::new(24.into(), 4.into()));
    let op = CayleyOperator::<f64>::build(&g, &s, OperatorMode::Dense, 1 << 20).unwrap();
    let ev = dense_spectrum(&op).unwrap();
    let sq: f64 = ev.iter().map(|x| x * x).sum();
    assert!((sq - t1.to_f64().unwrap()).abs() < 1e-10);
    let m = op.to_dense().unwrap();
    let m4 = &m * &m * &m * &m;
    let t2 = trace_moment(&g, &s, 2).unwrap().to_f64().unwrap();
    assert!((m4.trace() - t2).abs() < 1e-10);
}

#[test]
fn min_rep_dimension_values() {
    assert_eq!(min_rep_dimension(5, 1, 2), 2);
    assert_eq!(min_rep_dimension(13, 1, 2), 6);
    assert_eq!(min_rep_dimension(2, 2, 3), 15);
    assert_eq!(min_rep_dimension(2, 2, 2), 3);
    assert_eq!(min_rep_dimension(3, 1, 2), 1);
}

#[test]
fn eigenvalue_bound_holds() {
    for (p, k) in [(3, 2), (7, 3)] {
        let (g, s) = unipotent(p);
        let r = eigenvalue_bound_check::<f64>(&g, &s, k, None).unwrap();
        assert!(r.holds, "p={p}: {r:?}");
    }
    let g = GroupSpec::over_integers_mod(5, 2).unwrap();
    let m = g.minus_identity().unwrap();
    let r = eigenvalue_bound_check::<f64>(&g, &[m.clone(), m], 2, None).unwrap();
    assert!((r.lambda2 - 1.0).abs() < 1e-9);
    assert!(r.holds);
}

#[test]
fn lambda2_multiplicity_at_least_min_dimension() {
    for p in [5u64, 7, 11, 13] {
        let (g, s) = unipotent(p);
        let op = CayleyOperator::<f64>::build(&g, &s, OperatorMode::Dense, 1 << 20).unwrap();
        let ev = dense_spectrum(&op).unwrap();
        let mult = ev[1..].iter().filter(|x| (*x - ev[1]).abs() < 1e-8).count() as u64;
        assert!(mult >= min_rep_dimension(p, 1, 2), "p={p}: {mult}");
    }
}

#[test]
fn induced_spectrum_matches_dense() {
    for p in [5u64, 7] {
        let (g, s) = unipotent(p);
        let op = CayleyOperator::<f64>::build(&g, &s, OperatorMode::Dense, 1 << 20).unwrap();
        let dense = dense_spectrum(&op).unwrap();
        let induced = sl2_nontrivial_spectrum::<f64>(&g, &s).unwrap();
        assert!((dense[1] - induced[0]).abs() < 1e-10);
        assert!((dense.last().unwrap() - induced.last().unwrap()).abs() < 1e-10);
    }
    let g = GroupSpec::over_integers_mod(15, 2).unwrap();
    let s = vec![g.identity()];
    assert!(matches!(
        sl2_nontrivial_spectrum::<f64>(&g, &s),
        Err(SpectralError::Unsupported(_))
    ));
}
