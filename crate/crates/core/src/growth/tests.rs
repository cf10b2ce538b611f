use std::collections::HashSet;

use super::*;
use crate::algebra::FiniteField;
use crate::groups::{subgroup_atlas, GroupElem, GroupSpec, SubgroupKind};

const CAP: usize = 1 << 20;

fn unipotent(p: u64) -> (GroupSpec, Vec<GroupElem>) {
    let g = GroupSpec::over_integers_mod(p, 2).unwrap();
    let a = g.mat2(1, 1, 0, 1).unwrap();
    let b = g.mat2(1, 0, 1, 1).unwrap();
    let s = vec![a.clone(), g.inv(&a), b.clone(), g.inv(&b)];
    (g, s)
}

fn borel(g: &GroupSpec) -> Vec<GroupElem> {
    subgroup_atlas(g)
        .unwrap()
        .into_iter()
        .find(|h| h.kind == SubgroupKind::Borel)
        .unwrap()
        .sorted_elements()
        .unwrap()
}

#[test]
fn product_set_basics() {
    let (g, s) = unipotent(5);
    let h = borel(&g);
    assert_eq!(product_set(&g, &h, &h, CAP).unwrap(), h);
    assert_eq!(product_set(&g, &[g.identity()], &s, CAP).unwrap(), {
        let mut t = s.clone();
        t.sort_unstable();
        t
    });
    let brute: HashSet<GroupElem> = s.iter().flat_map(|x| s.iter().map(|y| g.mul(x, y))).collect();
    assert_eq!(product_set(&g, &s, &s, CAP).unwrap().len(), brute.len());
    assert!(matches!(
        product_set(&g, &h, &s, 3),
        Err(GrowthError::TooLarge { cap: 3, .. })
    ));
}

#[test]
fn tripling_on_subgroup_is_flat() {
    let (g, _) = unipotent(5);
    let h = borel(&g);
    let r = tripling_report(&g, &h, &[3, 4, 5], CAP).unwrap();
    assert_eq!(r.size_1, h.len());
    assert_eq!(r.size_3, h.len());
    assert_eq!(r.delta_hat, 0.0);
    assert!(r.iterated.iter().all(|c| c.holds && c.size == h.len()));
}

#[test]
fn tripling_unipotent_mod_7() {
    let (g, s) = unipotent(7);
    let r = tripling_report(&g, &s, &[3, 4, 5], CAP).unwrap();
    assert!(r.size_1 <= r.size_3 && r.size_3 <= r.size_1.pow(3));
    assert_eq!(r.iterated.len(), 3);
    assert!(r.iterated.iter().all(|c| c.holds));
    assert!(r.delta_hat > 0.0);
    assert!(matches!(
        tripling_report(&g, &s[..3], &[3], CAP),
        Err(GrowthError::NotSymmetric)
    ));
}

#[test]
fn gowers_cover_examples() {
    let (g, _) = unipotent(5);
    let all = g.enumerate(1 << 20).unwrap();
    let r = gowers_cover_check(&g, &all, &all, &all, CAP).unwrap();
    assert!(r.threshold_met && r.full_cover);
    let h = borel(&g);
    let r = gowers_cover_check(&g, &h, &h, &h, CAP).unwrap();
    assert!(!r.threshold_met && !r.full_cover);
    assert_eq!(r.product_size, 20);
}

#[test]
fn tree_regularize_golden() {
    // mod 3 all four lie over two parents: identity (1 child) and [[1,1],[0,1]] (3 children)
    let g = GroupSpec::over_integers_mod(15, 2).unwrap();
    let s: Vec<GroupElem> = [0, 1, 7, 13].iter().map(|&b| g.mat2(1, b, 0, 1).unwrap()).collect();
    let r = tree_regularize(&g, &s).unwrap();
    assert_eq!(r.degrees, vec![1, 3]);
    assert_eq!(r.size, 3);
    assert!(!r.a.contains(&g.identity()));
    assert_eq!(tree_degrees(&g, &r.a, &r.levels), Some(vec![1, 3]));
    assert_eq!(tree_degrees(&g, &s, &r.levels), None);
    assert!(r.within_loss_bound && r.within_nominal_bound);
}

#[test]
fn tree_regularize_full_group() {
    let g = GroupSpec::over_integers_mod(6, 2).unwrap();
    let all = g.enumerate(1 << 20).unwrap();
    let r = tree_regularize(&g, &all).unwrap();
    assert_eq!(r.size, all.len());
    assert_eq!(r.degrees, vec![6, 24]);
}

#[test]
fn coset_strip_uniform_is_untouched() {
    let (g, _) = unipotent(7);
    let all = g.enumerate(1 << 20).unwrap();
    let r = coset_strip(&g, &all, 0.1, DEFAULT_MIN_FACTOR_ORDER).unwrap();
    assert!(r.stripped.is_empty());
    assert_eq!(r.size, all.len());
    assert!(r.verified);
}

#[test]
fn coset_strip_concentrated_factor() {
    // Borel mod 5 times everything mod 3: the F_5 factor is stripped
    let g = GroupSpec::over_integers_mod(15, 2).unwrap();
    let f5 = g.factor_group(1).unwrap();
    let f3 = g.factor_group(0).unwrap();
    let b5 = borel(&f5);
    let all3 = f3.enumerate(1 << 20).unwrap();
    let s: Vec<GroupElem> = all3
        .iter()
        .flat_map(|x| b5.iter().map(|y| g.combine(&[x, y])))
        .collect();
    let r = coset_strip(&g, &s, 0.5, 60).unwrap();
    assert_eq!(r.skipped, vec![0]);
    assert_eq!(r.stripped, vec![1]);
    assert!(r.verified);
    assert!(matches!(coset_strip(&g, &s, 0.0, 60), Err(GrowthError::InvalidParameter(_))));
}

#[test]
fn w_values() {
    let f7 = FiniteField::prime(7);
    assert_eq!(w(&f7, &[2]).unwrap(), vec![6]);
    assert!(w_identity_holds(&f7, &[2], &[3]).unwrap());
    assert_eq!(w(&f7, &[6]).unwrap(), vec![5]);
    assert!(matches!(w(&f7, &[0]), Err(GrowthError::ZeroElement)));
}

#[test]
fn trace_amplify_singleton() {
    let f7 = FiniteField::prime(7);
    let r = trace_amplify(&f7, &[vec![1]], &[3], &[5], CAP).unwrap();
    assert_eq!(r.output, vec![vec![2]]);
    assert!(matches!(
        trace_amplify(&f7, &[vec![1], vec![2]], &[1], &[1], CAP),
        Err(GrowthError::InvalidSet(_))
    ));
}

#[test]
fn trace_amplify_f9_dichotomy() {
    let f9 = FiniteField::new(3, &[1, 0, 1]).unwrap();
    let theta = vec![0, 1];
    let lambda = vec![vec![1, 0], vec![2, 0], theta.clone(), f9.inv(&theta).unwrap()];
    let r = trace_amplify(&f9, &lambda, &[1, 0], &theta, CAP).unwrap();
    assert_eq!(r.containing_subfields, vec![1]);
    assert!(r.ratio_outside && r.core_in_output && r.dichotomy_ok);
    assert!(r.core_size >= r.w_squares_size.pow(2));
}

#[test]
fn nondegenerate_search() {
    let f9 = FiniteField::new(3, &[1, 0, 1]).unwrap();
    let g = GroupSpec::over_field(f9, 2).unwrap();
    // θ = [0,1] in F_9
    let e = |a: [u64; 2], b: [u64; 2], c: [u64; 2], d: [u64; 2]| {
        g.from_crt_entries(&[a.to_vec(), b.to_vec(), c.to_vec(), d.to_vec()]).unwrap()
    };
    let u = e([1, 0], [0, 1], [0, 0], [1, 0]);
    let l = e([1, 0], [0, 0], [1, 0], [1, 0]);
    let v = e([1, 0], [1, 0], [0, 0], [1, 0]);
    let s = vec![u.clone(), g.inv(&u), v.clone(), g.inv(&v), l.clone(), g.inv(&l)];
    let r = find_nondegenerate(&g, &s, 1, DEFAULT_R_MAX).unwrap();
    assert!(r.r >= 2 && r.r <= DEFAULT_R_MAX);
    let f = &g.ring().fields()[0];
    assert!(!f.in_subfield(&r.ratio, 1));

    let sub = vec![l.clone(), g.inv(&l), v.clone(), g.inv(&v)];
    assert!(matches!(find_nondegenerate(&g, &sub, 1, 4), Err(GrowthError::NotGenerating)));
}
