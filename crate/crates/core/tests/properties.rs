use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use expander_core::algebra::{FiniteField, NumberField, ResidueRing};
use expander_core::archimedean::{adjoint, embed, predicate_h_t, predicate_h_v, ExactGroup, IntMat};
use expander_core::groups::{GroupElem, GroupSpec};
use expander_core::growth::{product_set, tripling_report, w_identity_holds};
use expander_core::walks::{
    conditional_entropy, entropy, free_walk_stats, join_entropy, partition_entropy, ExactMeasure, DEFAULT_BUDGET,
};

fn ring(f: &[i64], q: u64) -> ResidueRing {
    ResidueRing::new(NumberField::new(f).unwrap(), q).unwrap()
}

fn sl2(p: u64) -> (GroupSpec, Vec<GroupElem>) {
    let spec = GroupSpec::over_integers_mod(p, 2).unwrap();
    let all = spec.enumerate(u128::MAX).unwrap();
    (spec, all)
}

fn pick(all: &[GroupElem], idx: &[usize]) -> Vec<GroupElem> {
    idx.iter().map(|&i| all[i % all.len()].clone()).collect()
}

fn symmetric(spec: &GroupSpec, s: Vec<GroupElem>) -> Vec<GroupElem> {
    let mut out: Vec<GroupElem> = s.iter().flat_map(|g| [g.clone(), spec.inv(g)]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn l2sq(mu: &ExactMeasure) -> BigRational {
    let (n, d) = mu.l2_squared_parts();
    BigRational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn crt_split_is_multiplicative(
        which in 0usize..3,
        x in prop::collection::vec(-1000i64..1000, 2),
        y in prop::collection::vec(-1000i64..1000, 2),
    ) {
        let (f, q): (&[i64], u64) = [(&[0i64, 1][..], 15), (&[1, 0, 1][..], 15), (&[-2, 0, 1][..], 35)][which];
        let r = ring(f, q);
        let deg = r.field().degree();
        let (x, y) = (r.from_coeffs(&x[..deg]), r.from_coeffs(&y[..deg]));
        let (sx, sy, sxy) = (r.crt_split(&x), r.crt_split(&y), r.crt_split(&r.mul(&x, &y)));
        for (i, fac) in r.crt_factors().iter().enumerate() {
            prop_assert_eq!(&fac.field.mul(&sx[i].coeffs, &sy[i].coeffs), &sxy[i].coeffs);
        }
        prop_assert_eq!(r.crt_join(&sx).unwrap(), x);
    }

    #[test]
    fn units_invert_twice(c0 in -500i64..500, c1 in -500i64..500) {
        let r = ring(&[1, 0, 1], 15);
        let x = r.from_coeffs(&[c0, c1]);
        match r.inv(&x) {
            Ok(y) => {
                prop_assert!(r.is_unit(&x));
                prop_assert_eq!(r.mul(&x, &y), r.one());
                prop_assert_eq!(r.inv(&y).unwrap(), x);
            }
            Err(_) => prop_assert!(!r.is_unit(&x)),
        }
    }

    #[test]
    fn product_set_is_associative(
        a in prop::collection::vec(0usize..120, 1..6),
        b in prop::collection::vec(0usize..120, 1..6),
        c in prop::collection::vec(0usize..120, 1..6),
    ) {
        let (spec, all) = sl2(5);
        let (a, b, c) = (pick(&all, &a), pick(&all, &b), pick(&all, &c));
        let left = product_set(&spec, &product_set(&spec, &a, &b, 200).unwrap(), &c, 200).unwrap();
        let right = product_set(&spec, &a, &product_set(&spec, &b, &c, 200).unwrap(), 200).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn iterated_products_obey_tripling(p_is_11 in any::<bool>(), idx in prop::collection::vec(0usize..1320, 1..4)) {
        let (spec, all) = sl2(if p_is_11 { 11 } else { 7 });
        let s = symmetric(&spec, pick(&all, &idx));
        let report = tripling_report(&spec, &s, &[3, 4, 5], usize::MAX).unwrap();
        prop_assert!(report.iterated.iter().all(|c| c.holds));
    }

    #[test]
    fn convolution_does_not_increase_l2(
        a in prop::collection::vec((0usize..120, 1u32..9), 1..8),
        b in prop::collection::vec((0usize..120, 1u32..9), 1..8),
    ) {
        let (spec, all) = sl2(5);
        let measure = |v: &[(usize, u32)]| {
            let total: u32 = v.iter().map(|x| x.1).sum();
            ExactMeasure::from_weights(
                &spec,
                v.iter().map(|&(i, w)| (all[i].clone(), BigUint::from(w))),
                BigUint::from(total),
            )
        };
        let (mu, nu) = (measure(&a), measure(&b));
        let conv = mu.convolve(&nu, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(conv.mass(), BigRational::one());
        prop_assert!(l2sq(&conv) <= l2sq(&mu).min(l2sq(&nu)));
    }

    #[test]
    fn return_probability_is_l2_squared(idx in prop::collection::vec(0usize..336, 1..3), k in 1usize..5) {
        let (spec, all) = sl2(7);
        let s = symmetric(&spec, pick(&all, &idx));
        let step = ExactMeasure::from_multiset(&spec, &s);
        let mut mu = ExactMeasure::point(&spec, &spec.identity());
        for _ in 0..k {
            mu = mu.convolve(&step, DEFAULT_BUDGET).unwrap();
        }
        let twice = mu.convolve(&mu, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(twice.get(&spec.identity()), l2sq(&mu));
        prop_assert_eq!(mu.denominator(), &BigUint::from(s.len()).pow(k as u32));
    }

    #[test]
    fn entropy_chain_rule_and_bounds(weights in prop::collection::vec(0u32..50, 120)) {
        prop_assume!(weights.iter().any(|&w| w > 0));
        let (spec, all) = sl2(5);
        let total: u32 = weights.iter().sum();
        let mu = ExactMeasure::from_weights(
            &spec,
            all.iter().cloned().zip(weights.iter().map(|&w| BigUint::from(w))),
            BigUint::from(total),
        );
        // A: lower-left entry; B: trace
        let a = |g: &GroupElem| Some(g.raw()[2]);
        let b = |g: &GroupElem| Some((g.raw()[0] + g.raw()[3]) % 5);
        let h_join = join_entropy(&mu, &a, &b).unwrap();
        let h_cond = conditional_entropy(&mu, &a, &b).unwrap();
        let h_b = partition_entropy(&mu, &b).unwrap();
        prop_assert!((h_join - (h_cond + h_b)).abs() < 1e-10);
        let h = entropy(&mu);
        prop_assert!(mu.support_len() as f64 >= h.exp() * (1.0 - 1e-12));
        prop_assert!(h.exp() >= mu.l2_f64().powi(-2) * (1.0 - 1e-12));
    }

    #[test]
    fn w_identity_in_f13_and_f9(a in 1i64..13, b in 1i64..13, a9 in 1u64..9, b9 in 1u64..9) {
        let f13 = FiniteField::prime(13);
        prop_assert!(w_identity_holds(&f13, &f13.from_int(a), &f13.from_int(b)).unwrap());
        let f9 = FiniteField::new(3, &[1, 0, 1]).unwrap();
        prop_assert!(w_identity_holds(&f9, &f9.element_at(a9), &f9.element_at(b9)).unwrap());
    }

    #[test]
    fn free_walk_normalization(m in 2usize..4, k in 1usize..9) {
        let stats = free_walk_stats(m, k).unwrap();
        prop_assert!(stats.kesten_ok);
        prop_assert!(stats.normalization_ok);
        let total = stats
            .p
            .iter()
            .zip(&stats.ball_sizes)
            .fold(BigRational::zero(), |acc, (p, n)| acc + p * BigRational::from_integer(n.clone().into()));
        prop_assert_eq!(total, BigRational::one());
    }
}

fn quadratic() -> (ExactGroup, Vec<IntMat>) {
    let g = ExactGroup::new(NumberField::new(&[-2, 0, 1]).unwrap(), 2).unwrap();
    let gens = vec![
        g.from_coeffs(&[vec![1, 1], vec![1], vec![0], vec![-1, 1]]).unwrap(),
        g.mat2(1, 0, 2, 1).unwrap(),
        g.from_coeffs(&[vec![1, 1], vec![1], vec![0, 1], vec![1]]).unwrap(),
    ];
    (g, gens)
}

fn word(g: &ExactGroup, gens: &[IntMat], w: &[(usize, bool)]) -> IntMat {
    w.iter().fold(g.identity(), |acc, &(i, inv)| {
        let x = &gens[i % gens.len()];
        g.mul(&acc, &if inv { g.inv(x) } else { x.clone() })
    })
}

fn rel_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hat_sigma_is_a_homomorphism(
        u in prop::collection::vec((0usize..3, any::<bool>()), 0..7),
        v in prop::collection::vec((0usize..3, any::<bool>()), 0..7),
    ) {
        let (g, gens) = quadratic();
        let emb = embed(g.field(), 12).unwrap();
        let (x, y) = (word(&g, &gens, &u), word(&g, &gens, &v));
        let xy = emb.hat_sigma(&g, &g.mul(&x, &y)).unwrap();
        let (sx, sy) = (emb.hat_sigma(&g, &x).unwrap(), emb.hat_sigma(&g, &y).unwrap());
        for i in 0..emb.len() {
            prop_assert!(rel_diff(&xy[i], &(&sx[i] * &sy[i])) < 1e-8);
        }
    }

    #[test]
    fn membership_predicates_are_closed(
        u in prop::collection::vec((0usize..2, any::<bool>()), 1..5),
        v in prop::collection::vec((0usize..2, any::<bool>()), 1..5),
    ) {
        let g = ExactGroup::new(NumberField::new(&[-2, 0, 1]).unwrap(), 2).unwrap();
        let emb = embed(g.field(), 12).unwrap();
        // upper-triangular words normalize span(E_12)
        let borel = vec![
            g.from_coeffs(&[vec![1, 1], vec![0, 1], vec![0], vec![-1, 1]]).unwrap(),
            g.mat2(1, 3, 0, 1).unwrap(),
        ];
        let span_e12 = DMatrix::from_fn(3, 1, |r, _| Complex64::new(if r == 0 { 1.0 } else { 0.0 }, 0.0));
        let (x, y) = (word(&g, &borel, &u), word(&g, &borel, &v));
        for h in [x.clone(), y.clone(), g.mul(&x, &y), g.inv(&x)] {
            let ad = adjoint(&emb.sigma(&g, &h, 0).unwrap()).unwrap();
            prop_assert!(predicate_h_v(&ad, &span_e12, 1e-9).holds);
        }
        // rational words are fixed by the Galois swap, so T = I holds
        let rational = vec![g.mat2(1, 2, 0, 1).unwrap(), g.mat2(1, 0, 2, 1).unwrap()];
        let (x, y) = (word(&g, &rational, &u), word(&g, &rational, &v));
        let t = DMatrix::<Complex64>::identity(3, 3);
        for h in [g.mul(&x, &y), g.inv(&y)] {
            let ad1 = adjoint(&emb.sigma(&g, &h, 0).unwrap()).unwrap();
            let ad2 = adjoint(&emb.sigma(&g, &h, 1).unwrap()).unwrap();
            prop_assert!(predicate_h_t(&ad1, &ad2, &t, 1e-9).holds);
        }
    }
}

#[test]
fn spec_orders_match_enumeration() {
    for p in [2u64, 3, 5, 7] {
        let (spec, all) = sl2(p);
        assert_eq!(all.len() as u128, spec.order());
        assert_eq!(spec.order(), (p * (p * p - 1)) as u128);
    }
    let spec = GroupSpec::new(Arc::new(ring(&[1, 0, 1], 3)), 2).unwrap();
    assert_eq!(spec.enumerate(u128::MAX).unwrap().len(), 720);
}
