use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::free::{ball_size, free_walk_stats_enumerated};
use super::*;
use crate::groups::{subgroup_atlas, GroupElem, GroupSpec, SubgroupDescriptor, SubgroupKind};

fn unipotent(p: u64) -> (GroupSpec, Vec<GroupElem>) {
    let g = GroupSpec::over_integers_mod(p, 2).unwrap();
    let a = g.mat2(1, 1, 0, 1).unwrap();
    let b = g.mat2(1, 0, 1, 1).unwrap();
    let s = vec![a.clone(), g.inv(&a), b.clone(), g.inv(&b)];
    (g, s)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn point_masses_multiply() {
    let (g, s) = unipotent(5);
    let x = ExactMeasure::point(&g, &s[0]);
    let y = ExactMeasure::point(&g, &s[2]);
    let xy = x.convolve(&y, DEFAULT_BUDGET).unwrap();
    assert_eq!(xy.support_len(), 1);
    assert_eq!(xy.get(&g.mul(&s[0], &s[2])), ratio(1, 1));
    let chi = ExactMeasure::from_multiset(&g, &s);
    let same = chi.convolve(&ExactMeasure::point(&g, &g.identity()), DEFAULT_BUDGET).unwrap();
    assert_eq!(same.support(), chi.support());
}

#[test]
fn self_convolution_norm_matches_double_loop() {
    let (g, s) = unipotent(5);
    let chi = ExactMeasure::from_multiset(&g, &s);
    let two = chi.convolve(&chi, DEFAULT_BUDGET).unwrap();
    let mut counts: HashMap<GroupElem, i64> = HashMap::new();
    for x in &s {
        for y in &s {
            *counts.entry(g.mul(x, y)).or_default() += 1;
        }
    }
    let sq: i64 = counts.values().map(|c| c * c).sum();
    assert_eq!(two.l2_squared(), ratio(sq, 256));
}

#[test]
fn return_probability_identity() {
    let (g, s) = unipotent(5);
    for k in 1..=5 {
        let half = ExactMeasure::walk_power(&g, &s, k, DEFAULT_BUDGET).unwrap();
        let full = ExactMeasure::walk_power(&g, &s, 2 * k, DEFAULT_BUDGET).unwrap();
        assert_eq!(half.l2_squared(), full.get(&g.identity()));
        assert_eq!(full.linf(), full.get(&g.identity()));
        assert_eq!(*half.denominator(), BigUint::from(4u32).pow(k as u32));
    }
}

#[test]
fn walk_power_one_is_the_step() {
    let (g, s) = unipotent(7);
    let one = ExactMeasure::walk_power(&g, &s, 1, DEFAULT_BUDGET).unwrap();
    assert_eq!(one.support(), ExactMeasure::from_multiset(&g, &s).support());
    assert!(matches!(
        ExactMeasure::walk_power(&g, &[], 1, DEFAULT_BUDGET),
        Err(WalkError::EmptySet)
    ));
}

#[test]
fn walk_tends_to_uniform() {
    let (g, s) = unipotent(5);
    let mu = ExactMeasure::walk_power(&g, &s, 40, DEFAULT_BUDGET).unwrap();
    let l2 = mu.l2_squared().to_f64().unwrap();
    assert!((l2 - 1.0 / 120.0).abs() < 1e-6, "{l2}");
    assert_eq!(mu.mass(), ratio(1, 1));
}

#[test]
fn float_cast_round_trip() {
    let (g, s) = unipotent(7);
    let mu = ExactMeasure::walk_power(&g, &s, 6, DEFAULT_BUDGET).unwrap();
    let f = mu.to_float::<f64>();
    for ((x, _), p) in mu.support().iter().zip(f.probabilities()) {
        let exact = mu.get(x).to_f64().unwrap();
        assert!((exact - p).abs() <= 1e-15 * exact);
    }
}

#[test]
fn budget_is_enforced() {
    let (g, s) = unipotent(5);
    let chi = ExactMeasure::from_multiset(&g, &s);
    assert!(matches!(
        chi.convolve(&chi, 8),
        Err(WalkError::BudgetExceeded { work: 16, budget: 8 })
    ));
    let (h, t) = unipotent(7);
    let other = ExactMeasure::from_multiset(&h, &t);
    assert!(matches!(chi.convolve(&other, DEFAULT_BUDGET), Err(WalkError::GroupMismatch)));
}

fn borel(g: &GroupSpec) -> SubgroupDescriptor {
    subgroup_atlas(g)
        .unwrap()
        .into_iter()
        .find(|h| h.kind == SubgroupKind::Borel)
        .unwrap()
}

#[test]
fn coset_masses() {
    let (g, s) = unipotent(7);
    let h = borel(&g);
    let all = g.enumerate(1 << 20).unwrap();
    let uniform = ExactMeasure::uniform(&g, &all);
    let x = g.mat2(0, 6, 1, 3).unwrap();
    assert_eq!(coset_mass(&uniform, &h, &x), ratio(1, 8));
    let (max, _) = coset_mass_max(&uniform, &h).unwrap();
    assert_eq!(max, ratio(1, 8));
    let point = ExactMeasure::point(&g, &g.identity());
    assert_eq!(coset_mass(&point, &h, &g.identity()), ratio(1, 1));
    let mu = ExactMeasure::walk_power(&g, &s, 4, DEFAULT_BUDGET).unwrap();
    let mut hits = 0;
    for i in 0..256usize {
        let word = (0..4).fold(g.identity(), |acc, j| g.mul(&acc, &s[(i >> (2 * j)) & 3]));
        hits += i64::from(h.contains(&word));
    }
    assert_eq!(coset_mass(&mu, &h, &g.identity()), ratio(hits, 256));
    assert_eq!(hits, 52);
}

#[test]
fn escape_profiles() {
    let (g, s) = unipotent(13);
    let atlas = subgroup_atlas(&g).unwrap();
    let center = atlas.iter().find(|h| h.kind == SubgroupKind::Center).unwrap();
    let l = 2 * (g.order() as f64).ln().ceil() as usize;
    let profile = escape_profile(&g, &s, center, &[2, 4, 8, l]).unwrap();
    assert!(profile.escapes);
    assert!(profile.delta_fit > 0.0);
    assert!(profile.below_fit_at_end);

    let full = SubgroupDescriptor::explicit(
        &g,
        SubgroupKind::Explicit,
        g.enumerate(1 << 20).unwrap(),
    )
    .unwrap();
    assert!(matches!(escape_profile(&g, &s, &full, &[2]), Err(WalkError::NotProper)));

    let b = borel(&g);
    let inside = vec![s[0].clone(), s[1].clone()];
    let stuck = escape_profile(&g, &inside, &b, &[2, 4, 6]).unwrap();
    assert!(!stuck.escapes);
    assert!(stuck.rows.iter().all(|r| r.mass == 1.0));
}

#[test]
fn entropy_basics() {
    let (g, s) = unipotent(5);
    let all = g.enumerate(1 << 20).unwrap();
    let uniform = ExactMeasure::uniform(&g, &all);
    assert!((entropy(&uniform) - 120f64.ln()).abs() < 1e-12);
    assert_eq!(entropy(&ExactMeasure::point(&g, &s[0])), 0.0);

    let mu = ExactMeasure::walk_power(&g, &s, 3, DEFAULT_BUDGET).unwrap();
    let by_row = |x: &GroupElem| Some(g.entry(x, 1, 0)[0]);
    let by_trace = |x: &GroupElem| Some((g.entry(x, 0, 0)[0] + g.entry(x, 1, 1)[0]) % 5);
    let joint = join_entropy(&mu, &by_row, &by_trace).unwrap();
    let cond = conditional_entropy(&mu, &by_row, &by_trace).unwrap();
    let hb = partition_entropy(&mu, &by_trace).unwrap();
    assert!((joint - cond - hb).abs() < 1e-10);
    let partial = |x: &GroupElem| (g.entry(x, 1, 0)[0] == 0).then_some(0);
    assert!(matches!(partition_entropy(&mu, &partial), Err(WalkError::NotAPartition)));
}

#[test]
fn free_group_statistics() {
    assert_eq!(ball_size(2, 3), BigUint::from(36u32));
    let st = free_walk_stats(2, 1).unwrap();
    assert_eq!(st.p[0], ratio(1, 4));
    assert!(st.kesten_ok && st.normalization_ok);
    for m in [2, 3] {
        for k in 1..=4 {
            let dp = free_walk_stats(m, k).unwrap();
            let brute = free_walk_stats_enumerated(m, k, 1 << 32).unwrap();
            assert_eq!(dp.p, brute.p, "m={m} k={k}");
        }
    }
    assert!(matches!(free_walk_stats(1, 2), Err(WalkError::InvalidRank(1))));
}

#[test]
fn word_bound_arithmetic() {
    // m = 2: 3^{l/2+1} 2^{l/2-1}
    assert!(free::word_bound_holds(2, 2, 9));
    assert!(!free::word_bound_holds(2, 2, 10));
    assert!(free::word_bound_holds(2, 0, 1));
    assert!((free::word_bound(2, 4) - 54.0).abs() < 1e-9);
}

#[test]
fn bsg_on_subgroup() {
    let (g, _) = unipotent(7);
    let h = borel(&g);
    let elems = h.sorted_elements().unwrap();
    let mu = ExactMeasure::uniform(&g, &elems);
    let r = bsg_extract(&mu, &mu, 3.0).unwrap();
    assert!(r.set.iter().all(|x| h.contains(x)));
    assert_eq!(r.triple_size, r.size);
    assert_eq!(r.size, elems.len());
}

#[test]
fn bsg_concentrated_near_a_coset() {
    let g = GroupSpec::over_integers_mod(7, 2).unwrap();
    let h = borel(&g);
    let w = g.mat2(1, 0, 1, 1).unwrap();
    let mut s = h.sorted_elements().unwrap();
    s.extend([w.clone(), g.inv(&w)]);
    let mu = ExactMeasure::walk_power(&g, &s, 2, DEFAULT_BUDGET).unwrap();
    let r = bsg_extract(&mu, &mu, 3.0).unwrap();
    let (best, _) = coset_mass_max(&ExactMeasure::uniform(&g, &r.set), &h).unwrap();
    assert!(best >= ratio(1, 2), "{best}");
}

#[test]
fn bsg_rejects_flat_pairs() {
    let (g, _) = unipotent(7);
    let all = g.enumerate(1 << 20).unwrap();
    let uniform = ExactMeasure::uniform(&g, &all);
    let point = ExactMeasure::point(&g, &g.identity());
    // ‖μ∗ν‖ = |G|^{-1/2} against |G|^{-1/4}/K with |G|^{1/4} ≈ 4.28
    assert!(matches!(bsg_extract(&uniform, &point, 4.0), Err(WalkError::HypothesisNotMet)));
    assert!(bsg_extract(&uniform, &point, 4.5).is_ok());
    assert!(matches!(bsg_extract(&uniform, &point, 2.0), Err(WalkError::InvalidParameter(_))));
}

#[test]
fn flattening_reaches_target() {
    let (g, s) = unipotent(5);
    let t = flattening_trace(&g, &s, 60, 0.1).unwrap();
    let k = t.k_star.unwrap();
    let last = t.rows.last().unwrap();
    assert_eq!(last.k, k);
    assert!(last.l2 <= t.target);
    assert!(t.rows[..t.rows.len() - 1].iter().all(|r| r.l2 > t.target));
    // |supp μ| ≥ e^{H} ≥ ‖μ‖₂^{-2}
    for r in &t.rows {
        assert!(r.support as f64 >= r.entropy.exp() * (1.0 - 1e-12));
        assert!(r.entropy.exp() >= (1.0 - 1e-12) / (r.l2 * r.l2));
    }
    assert!(t.to_csv().starts_with("k,l2sq_num,l2sq_den,entropy,support\n1,"));
}
