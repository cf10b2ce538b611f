use std::sync::Arc;

use super::*;
use crate::algebra::{FiniteField, NumberField, ResidueRing};

fn sl2(q: u64) -> GroupSpec {
    GroupSpec::over_integers_mod(q, 2).unwrap()
}

#[test]
fn small_orders_match_formula() {
    for (q, n) in [(2, 6), (3, 24), (5, 120), (7, 336), (15, 2880)] {
        let g = sl2(q);
        assert_eq!(g.order(), n);
        assert_eq!(g.enumerate(DEFAULT_ENUMERATION_CAP).unwrap().len() as u128, n);
    }
    let f4 = FiniteField::new(2, &[1, 1, 1]).unwrap();
    let g = GroupSpec::over_field(f4, 2).unwrap();
    assert_eq!(g.enumerate(1000).unwrap().len(), 60);
    let g = GroupSpec::over_integers_mod(2, 3).unwrap();
    assert_eq!(g.enumerate(1000).unwrap().len(), 168);
    let g = GroupSpec::over_integers_mod(3, 3).unwrap();
    assert_eq!(g.order(), 5616);
    assert_eq!(g.enumerate(10_000).unwrap().len(), 5616);
}

#[test]
fn too_large_enumeration() {
    let g = sl2(101);
    assert!(matches!(g.enumerate(1000), Err(GroupError::TooLarge { .. })));
}

#[test]
fn products_and_inverses() {
    let g = sl2(5);
    let a = g.mat2(1, 1, 0, 1).unwrap();
    let b = g.mat2(1, 0, 1, 1).unwrap();
    assert_eq!(g.mul(&a, &b), g.mat2(2, 1, 1, 1).unwrap());
    assert_eq!(g.inv(&a), g.mat2(1, -1, 0, 1).unwrap());
    assert!(g.mat2(1, 1, 1, 1).is_err());
}

#[test]
fn inverse_in_extension_and_sl3() {
    let k = NumberField::new(&[1, 0, 1]).unwrap();
    let ring = Arc::new(ResidueRing::new(k, 3).unwrap());
    let g = GroupSpec::new(ring, 3).unwrap();
    let x = g
        .from_int_entries(&[
            vec![1, 1],
            vec![2],
            vec![0],
            vec![0],
            vec![1],
            vec![0, 2],
            vec![0],
            vec![0],
            vec![1, 2],
        ])
        .unwrap_err();
    assert_eq!(x, GroupError::NotInSL);
    let t = g
        .from_int_entries(&[
            vec![1],
            vec![0, 1],
            vec![0],
            vec![0],
            vec![1],
            vec![2, 1],
            vec![0],
            vec![0],
            vec![1],
        ])
        .unwrap();
    assert!(g.is_identity(&g.mul(&t, &g.inv(&t))));
}

#[test]
fn projection_mod_three() {
    let g = sl2(15);
    let x = g.mat2(7, 0, 0, 13).unwrap();
    let (t, y) = g.project(&x, &[0]).unwrap();
    assert!(t.is_identity(&y));
    assert!(matches!(g.project(&x, &[]), Err(GroupError::FactorMismatch)));
    assert!(matches!(g.project(&x, &[0, 0]), Err(GroupError::FactorMismatch)));
}

#[test]
fn encoding_is_canonical() {
    let g = sl2(15);
    let x = g.mat2(7, 0, 0, 13).unwrap();
    let bytes = g.encode(&x);
    assert_eq!(bytes.len(), 4 * 8);
    assert_eq!(u64::from_le_bytes(bytes[..8].try_into().unwrap()), 7);
    assert_eq!(g.format(&x), "7;0;0;13");
}

#[test]
fn atlas_orders() {
    let g = sl2(3);
    let atlas = subgroup_atlas(&g).unwrap();
    let borel = atlas.iter().find(|h| h.kind == SubgroupKind::Borel).unwrap();
    assert_eq!((borel.order(), borel.index()), (6, 4));
    let g = sl2(5);
    let atlas = subgroup_atlas(&g).unwrap();
    let order = |k| atlas.iter().find(|h| h.kind == k).unwrap().order();
    assert_eq!(order(SubgroupKind::Center), 2);
    assert_eq!(order(SubgroupKind::SplitTorus), 4);
    assert_eq!(order(SubgroupKind::NonsplitTorus), 6);
    assert_eq!(order(SubgroupKind::TorusNormalizerSplit), 8);
    assert_eq!(order(SubgroupKind::TorusNormalizerNonsplit), 12);
    assert_eq!(order(SubgroupKind::Borel), 20);
    assert!(subgroup_atlas(&sl2(15)).is_err());
}

#[test]
fn closures() {
    let g = sl2(3);
    let s = [g.mat2(1, 1, 0, 1).unwrap(), g.mat2(1, 0, 1, 1).unwrap()];
    let h = closure(&g, &s, 1000).unwrap();
    assert!(h.is_full());
    let triv = closure(&g, &[g.identity()], 1000).unwrap();
    assert_eq!(triv.index(), 24);
    let g = sl2(5);
    let borel_gens = [g.mat2(1, 1, 0, 1).unwrap(), g.mat2(2, 0, 0, 3).unwrap()];
    let b = closure(&g, &borel_gens, 1000).unwrap();
    assert_eq!((b.order(), b.index()), (20, 6));
}

#[test]
fn projection_profiles() {
    let g = sl2(15);
    let g3 = g.factor_group(0).unwrap();
    let borel3 = subgroup_atlas(&g3)
        .unwrap()
        .into_iter()
        .find(|h| h.kind == SubgroupKind::Borel)
        .unwrap();
    let pre = SubgroupDescriptor::preimage(&g, &[0], borel3).unwrap();
    assert_eq!(pre.index(), 4);
    let pre = pre.materialize(DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(pre.order(), 720);
    let prof = projection_profile(&pre, DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!((prof[0].surjective, prof[0].image_index), (false, 4));
    assert!(prof[1].surjective);

    let first: Vec<GroupElem> = g
        .enumerate(DEFAULT_ENUMERATION_CAP)
        .unwrap()
        .into_iter()
        .filter(|x| {
            let g5 = g.factor_group(1).unwrap();
            g5.is_identity(&g.project_into(x, &[1], &g5))
        })
        .collect();
    let h = SubgroupDescriptor::explicit(&g, SubgroupKind::Explicit, first).unwrap();
    let prof = projection_profile(&h, DEFAULT_ENUMERATION_CAP).unwrap();
    assert!(prof[0].surjective);
    assert_eq!(prof[1].image_index, 120);
}

#[test]
fn distance_and_centralizers() {
    let g = sl2(15);
    let x = g.mat2(7, 0, 0, 13).unwrap();
    let y = g.mat2(1, 0, 0, 1).unwrap();
    assert_eq!(factorwise_distance(&g, &x, &x).unwrap(), 0.0);
    // 7 ≡ 1 mod 3, 7 ≡ 2 mod 5: only the factor mod 5 differs
    assert!((factorwise_distance(&g, &x, &y).unwrap() - 120f64.ln()).abs() < 1e-12);
    let z = g.mat2(11, 0, 0, 11).unwrap();
    assert!((factorwise_distance(&g, &z, &y).unwrap() - 24f64.ln()).abs() < 1e-12);

    let g = sl2(5);
    let cap = DEFAULT_ENUMERATION_CAP;
    assert_eq!(centralizer_index(&g, &g.identity(), cap).unwrap(), 1);
    assert_eq!(centralizer_index(&g, &g.minus_identity().unwrap(), cap).unwrap(), 1);
    assert_eq!(centralizer_index(&g, &g.mat2(1, 1, 0, 1).unwrap(), cap).unwrap(), 12);
}

#[test]
fn generator_file_roundtrip() {
    let text = "# unipotents\n5;5;0,1\n1;1;0;1\n1;0;1;1\n";
    let file = GeneratorFile::parse(text).unwrap();
    assert_eq!(file.d, 2);
    let spec = file.group_spec().unwrap();
    let elems = file.elements(&spec).unwrap();
    assert_eq!(elems[0], spec.mat2(1, 1, 0, 1).unwrap());
    assert_eq!(GeneratorFile::parse(&file.to_string()).unwrap(), file);
    assert!(GeneratorFile::parse("3;15;0,1\n").is_err());
}

#[test]
fn export_json() {
    let g = sl2(3);
    let atlas = subgroup_atlas(&g).unwrap();
    let json = atlas[0].to_json();
    assert!(json.contains("\"kind\":\"Center\""));
    assert!(json.contains("\"index\":\"12\""));
}
