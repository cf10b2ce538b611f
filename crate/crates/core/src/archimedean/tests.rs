use num_complex::Complex64;

use super::*;
use crate::algebra::NumberField;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
    (a - b).norm() < tol
}

fn integers() -> (ExactGroup, EmbeddingSet) {
    let k = NumberField::rationals();
    let emb = embed(&k, DEFAULT_PRECISION).unwrap();
    (ExactGroup::new(k, 2).unwrap(), emb)
}

fn sqrt2() -> (ExactGroup, EmbeddingSet) {
    let k = NumberField::new(&[-2, 0, 1]).unwrap();
    let emb = embed(&k, DEFAULT_PRECISION).unwrap();
    (ExactGroup::new(k, 2).unwrap(), emb)
}

fn diag2(t: Complex64) -> CMat {
    CMat::from_row_slice(2, 2, &[t, c(0.0, 0.0), c(0.0, 0.0), t.inv()])
}

#[test]
fn embeddings_of_quadratic_fields() {
    let (g, emb) = sqrt2();
    assert!((emb.roots[0] - c(2f64.sqrt(), 0.0)).norm() < 1e-12);
    assert!((emb.roots[1] + c(2f64.sqrt(), 0.0)).norm() < 1e-12);
    let u = g.from_coeffs(&[vec![1], vec![0, 1], vec![0], vec![1]]).unwrap();
    let s = emb.hat_sigma(&g, &u).unwrap();
    assert!((s[0][(0, 1)] - c(2f64.sqrt(), 0.0)).norm() < 1e-12);
    assert!((s[1][(0, 1)] + c(2f64.sqrt(), 0.0)).norm() < 1e-12);
    let r = g.mat2(2, 1, 1, 1).unwrap();
    let s = emb.hat_sigma(&g, &r).unwrap();
    assert!(close(&s[0], &s[1], 1e-14));

    let k = NumberField::new(&[1, 0, 1]).unwrap();
    let emb = embed(&k, DEFAULT_PRECISION).unwrap();
    let g = ExactGroup::new(k, 2).unwrap();
    let x = g.from_coeffs(&[vec![0, 1], vec![0], vec![0], vec![0, -1]]).unwrap();
    let s = emb.hat_sigma(&g, &x).unwrap();
    assert!(close(&s[0], &diag2(c(0.0, 1.0)), 1e-12));
    assert!(close(&s[1], &diag2(c(0.0, -1.0)), 1e-12));
}

#[test]
fn exact_inverse_and_determinant() {
    let k = NumberField::new(&[-2, 0, 1]).unwrap();
    let g = ExactGroup::new(k, 3).unwrap();
    let x = g
        .from_coeffs(&[
            vec![1],
            vec![0, 1],
            vec![2],
            vec![0],
            vec![1],
            vec![3, 1],
            vec![0],
            vec![0],
            vec![1],
        ])
        .unwrap();
    assert!(g.is_identity(&g.mul(&x, &g.inv(&x))));
    assert!(g.is_identity(&g.mul(&g.pow(&x, 3), &g.pow(&x, -3))));
    let bad = g.from_coeffs(&[vec![2], vec![0], vec![0], vec![0], vec![1], vec![0], vec![0], vec![0], vec![1]]);
    assert_eq!(bad.unwrap_err(), ArchimedeanError::NotSpecial);
}

#[test]
fn adjoint_examples() {
    let id = CMat::identity(2, 2);
    assert!(close(&adjoint(&id).unwrap(), &CMat::identity(3, 3), 1e-14));
    let t = c(3.0, 0.0);
    let ev = eigenvalues(&adjoint(&diag2(t)).unwrap()).unwrap();
    for (got, want) in ev.iter().zip([9.0, 1.0, 1.0 / 9.0]) {
        assert!((got - c(want, 0.0)).norm() < 1e-12, "{ev:?}");
    }
    let (g, emb) = sqrt2();
    let a = g.from_coeffs(&[vec![1, 1], vec![0], vec![0], vec![-1, 1]]).unwrap();
    let b = g.from_coeffs(&[vec![1], vec![0, 1], vec![0], vec![1]]).unwrap();
    for e in 0..2 {
        let sa = emb.sigma(&g, &a, e).unwrap();
        let sb = emb.sigma(&g, &b, e).unwrap();
        let lhs = adjoint(&(&sa * &sb)).unwrap();
        let rhs = adjoint(&sa).unwrap() * adjoint(&sb).unwrap();
        assert!(close(&lhs, &rhs, 1e-8));
    }
}

#[test]
fn proximality_examples() {
    let r = proximality(&adjoint(&diag2(c(2.0, 0.0))).unwrap()).unwrap();
    assert!(r.proximal);
    assert!((r.lambda_top - 4.0).abs() < 1e-12);
    assert_eq!(r.complement_dim, 2);
    // z is E_12, the first basis vector
    let z = r.z.unwrap();
    assert!((z[0].norm() - 1.0).abs() < 1e-12);
    assert!(!proximality(&CMat::identity(3, 3)).unwrap().proximal);
    let rot = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    assert!(!proximality(&adjoint(&rot).unwrap()).unwrap().proximal);
    let singular = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    assert_eq!(proximality(&singular).unwrap_err(), ArchimedeanError::IllConditioned);
}

#[test]
fn projective_distance_examples() {
    let x = CVec::from_vec(vec![c(1.0, 0.0), c(2.0, 1.0)]);
    assert!(projective_distance(&x, &(&x * c(0.0, 3.0))).unwrap() < 1e-12);
    let e1 = CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
    let e2 = CVec::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]);
    assert!((projective_distance(&e1, &e2).unwrap() - 1.0).abs() < 1e-15);
    let d = projective_distance(&e1, &(&e1 + &e2)).unwrap();
    assert!((d - 0.5f64.sqrt()).abs() < 1e-15);
    assert_eq!(projective_distance(&e1, &(&e1 * c(0.0, 0.0))).unwrap_err(), ArchimedeanError::ZeroVector);
}

#[test]
fn generic_conditions() {
    let (g, emb) = sqrt2();
    // diag(1 + θ, θ - 1) is hyperbolic in both embeddings
    let d = g.from_coeffs(&[vec![1, 1], vec![0], vec![0], vec![-1, 1]]).unwrap();
    let single = generic_check(&g, &emb, &[d.clone()], 0, 1, PREDICATE_TOL).unwrap();
    assert!(single.condition_i.holds && single.pass);
    let empty = generic_check(&g, &emb, &[], 0, 1, PREDICATE_TOL).unwrap();
    assert!(empty.pass && empty.condition_i.instances == 0);

    // conjugating by a Borel element keeps the attracting line
    let h = g.mat2(1, 1, 0, 1).unwrap();
    let conj = |x: &IntMat| g.mul(&g.mul(&h, x), &g.inv(&h));
    let a = vec![d.clone(), conj(&d), conj(&conj(&d))];
    let r = generic_check(&g, &emb, &a, 0, 1, PREDICATE_TOL).unwrap();
    assert!(!r.condition_ii.holds);
    assert!(!r.pass);

    let u = g.mat2(1, 1, 0, 1).unwrap();
    assert!(matches!(
        generic_check(&g, &emb, &[u], 0, 1, PREDICATE_TOL),
        Err(ArchimedeanError::NonProximalMember { letter: 0, .. })
    ));
}

#[test]
fn classical_pair_is_free() {
    let (g, emb) = integers();
    let a = vec![g.mat2(1, 2, 0, 1).unwrap(), g.mat2(1, 0, 2, 1).unwrap()];
    let cert = power_up(&g, &emb, &a, &[0], &PowerUpOptions::default()).unwrap();
    assert!(cert.free);
    assert_eq!(cert.m, 1);
    assert_eq!(cert.words_checked, 1 + 4 * (3usize.pow(8) - 1) / 2);
    assert!(cert.geometric_skipped.is_some());

    let single = power_up(&g, &emb, &a[..1], &[0], &PowerUpOptions::default()).unwrap();
    assert_eq!(single.words_checked, 17);

    let torsion = vec![g.mat2(0, -1, 1, 0).unwrap(), a[0].clone()];
    assert!(matches!(
        power_up(&g, &emb, &torsion, &[0], &PowerUpOptions::default()),
        Err(ArchimedeanError::FreenessUnverified { .. })
    ));
    // SL_2(Z) generators satisfy relations
    let rel = vec![g.mat2(1, 1, 0, 1).unwrap(), g.mat2(1, 0, -1, 1).unwrap()];
    assert!(exact_freeness(&g, &rel, 6).is_err());
}

#[test]
fn hyperbolic_pair_gets_geometric_certificate() {
    let (g, emb) = integers();
    let a = vec![g.mat2(2, 1, 1, 1).unwrap(), g.mat2(1, 1, 1, 2).unwrap()];
    let opts = PowerUpOptions {
        l_check: 4,
        samples: 300,
        ..PowerUpOptions::default()
    };
    let cert = power_up(&g, &emb, &a, &[0], &opts).unwrap();
    let geo = cert.margins.unwrap();
    assert!(geo.max_contraction < 1.0);
    assert!(geo.max_image_distance < geo.radius / 2.0);
    assert!(cert.m >= 1);
}

#[test]
fn norm_growth_examples() {
    let (g, emb) = integers();
    let id = norm_growth(&g, &emb, &[g.identity()], 4, 1 << 16).unwrap();
    assert!(id.rows.iter().all(|r| r.max_log_norm.abs() < 1e-12));
    let u = g.mat2(1, 1, 0, 1).unwrap();
    let uni = norm_growth(&g, &emb, &[u.clone(), g.inv(&u)], 8, 1 << 16).unwrap();
    assert!(uni.subadditive);
    let a = vec![g.mat2(1, 2, 0, 1).unwrap(), g.mat2(1, 0, 2, 1).unwrap()];
    let s: Vec<IntMat> = a.iter().flat_map(|x| [x.clone(), g.inv(x)]).collect();
    let free = norm_growth(&g, &emb, &s, 8, 1 << 16).unwrap();
    assert!(free.subadditive);
    assert!(free.slope > 0.5);
    // unipotent growth is logarithmic: increments shrink
    let inc = |k: usize| uni.rows[k].max_log_norm - uni.rows[k - 1].max_log_norm;
    assert!(inc(7) < inc(1) / 2.0);
    assert!(uni.slope < free.slope);
    assert_eq!(free.rows[7].size, 4 * 3usize.pow(7) + 4 * 3usize.pow(5) + 4 * 3usize.pow(3) + 4 * 3 + 1);
}

#[test]
fn membership_predicates() {
    let (g, emb) = sqrt2();
    let u = g.mat2(1, 1, 0, 1).unwrap();
    let ad = adjoint(&emb.sigma(&g, &u, 0).unwrap()).unwrap();
    let e12 = CMat::from_column_slice(3, 1, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    assert!(predicate_h_v(&ad, &e12, PREDICATE_TOL).holds);
    let e21 = CMat::from_column_slice(3, 1, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    assert!(!predicate_h_v(&ad, &e21, PREDICATE_TOL).holds);
    let id = CMat::identity(3, 3);
    assert!(predicate_h_v(&id, &e21, PREDICATE_TOL).holds);
    assert!(predicate_h_t(&id, &id, &ad, PREDICATE_TOL).holds);

    let h = g.from_coeffs(&[vec![1], vec![0, 1], vec![0], vec![1]]).unwrap();
    let a1 = adjoint(&emb.sigma(&g, &h, 0).unwrap()).unwrap();
    let a2 = adjoint(&emb.sigma(&g, &h, 1).unwrap()).unwrap();
    assert!(!predicate_h_t(&a1, &a2, &id, PREDICATE_TOL).holds);
}

#[test]
fn word_counts_and_letter_search() {
    let (g, emb) = sqrt2();
    let d = g.from_coeffs(&[vec![1, 1], vec![0], vec![0], vec![-1, 1]]).unwrap();
    let h = g.mat2(1, 1, 1, 2).unwrap();
    let a = vec![d.clone(), g.mul(&g.mul(&h, &d), &g.inv(&h))];
    let t = CMat::identity(3, 3);
    let search = first_letter_search(&g, &emb, &symmetrize(&g, &a), &t, 0, 1, 0.05).unwrap();
    assert!(search.letter.is_some());
    let rows = h_t_word_counts(&g, &emb, &a, &t, 0, 1, 6, PREDICATE_TOL).unwrap();
    assert_eq!(rows[0].count, 1);
    assert!(rows.iter().all(|r| r.holds));
    let counts: Vec<u64> = rows.iter().map(|r| r.count).collect();
    for k in 1..=6 {
        assert!(escape_upper_bound(2, k, &counts).unwrap() <= escape_reference(2, k));
    }
}
