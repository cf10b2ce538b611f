use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{GroupElem, GroupError, GroupSpec, DEFAULT_ENUMERATION_CAP};
use crate::algebra::integers::least_nonresidue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SubgroupKind {
    Explicit,
    Center,
    SplitTorus,
    NonsplitTorus,
    TorusNormalizerSplit,
    TorusNormalizerNonsplit,
    Borel,
    Preimage,
}

#[derive(Debug, Clone)]
struct PreimageOf {
    positions: Vec<usize>,
    target: GroupSpec,
    inner: SubgroupDescriptor,
}

/// A subgroup of `spec`, either with an explicit element set or (for
/// preimages) a membership rule through a projection.
#[derive(Debug, Clone)]
pub struct SubgroupDescriptor {
    pub kind: SubgroupKind,
    spec: GroupSpec,
    elements: Option<Arc<HashSet<GroupElem>>>,
    generators: Vec<GroupElem>,
    preimage: Option<Box<PreimageOf>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgroupExport {
    pub kind: SubgroupKind,
    pub index: String,
    pub size: String,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorProjection {
    pub factor: usize,
    pub p: u64,
    pub k: usize,
    pub surjective: bool,
    pub image_index: u128,
}

/// Breadth-first closure of `gens` under right multiplication, sorted.
/// In a finite group the generated monoid is the generated subgroup.
pub(crate) fn bfs_closure(
    spec: &GroupSpec,
    gens: &[GroupElem],
    cap: u128,
) -> Result<Vec<GroupElem>, GroupError> {
    let id = spec.identity();
    let mut seen: HashSet<GroupElem> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let products: Vec<GroupElem> = frontier
            .par_iter()
            .flat_map_iter(|x| gens.iter().map(move |s| spec.mul(x, s)))
            .collect();
        let mut next = Vec::new();
        for g in products {
            if !seen.contains(&g) {
                seen.insert(g.clone());
                next.push(g);
            }
        }
        if seen.len() as u128 > cap {
            return Err(GroupError::TooLarge {
                size: seen.len() as u128,
                cap,
            });
        }
        frontier = next;
    }
    let mut out: Vec<GroupElem> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// Subgroup generated by `gens`.
pub fn closure(
    spec: &GroupSpec,
    gens: &[GroupElem],
    cap: u128,
) -> Result<SubgroupDescriptor, GroupError> {
    for g in gens {
        spec.check_elem(g)?;
    }
    let elements = bfs_closure(spec, gens, cap)?;
    Ok(SubgroupDescriptor {
        kind: SubgroupKind::Explicit,
        spec: spec.clone(),
        elements: Some(Arc::new(elements.into_iter().collect())),
        generators: gens.to_vec(),
        preimage: None,
    })
}

impl SubgroupDescriptor {
    /// Explicit subgroup from its full element list, verified exhaustively.
    pub fn explicit(
        spec: &GroupSpec,
        kind: SubgroupKind,
        elements: Vec<GroupElem>,
    ) -> Result<Self, GroupError> {
        for g in &elements {
            spec.check_elem(g)?;
        }
        let set: HashSet<GroupElem> = elements.into_iter().collect();
        let mut h = Self {
            kind,
            spec: spec.clone(),
            elements: Some(Arc::new(set)),
            generators: Vec::new(),
            preimage: None,
        };
        if !h.verify_closed() {
            return Err(GroupError::NotSubgroup);
        }
        h.generators = h.small_generating_set();
        Ok(h)
    }

    /// `{g : π_positions(g) ∈ inner}` where `inner` lives in the projected group.
    pub fn preimage(
        spec: &GroupSpec,
        positions: &[usize],
        inner: SubgroupDescriptor,
    ) -> Result<Self, GroupError> {
        let target = spec.projection_target(positions)?;
        if !target.compatible(&inner.spec) {
            return Err(GroupError::RingMismatch);
        }
        Ok(Self {
            kind: SubgroupKind::Preimage,
            spec: spec.clone(),
            elements: None,
            generators: Vec::new(),
            preimage: Some(Box::new(PreimageOf {
                positions: positions.to_vec(),
                target,
                inner,
            })),
        })
    }

    pub fn ambient(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn elements(&self) -> Option<&HashSet<GroupElem>> {
        self.elements.as_deref()
    }

    /// Element list sorted canonically.
    pub fn sorted_elements(&self) -> Option<Vec<GroupElem>> {
        let mut v: Vec<GroupElem> = self.elements.as_ref()?.iter().cloned().collect();
        v.sort_unstable();
        Some(v)
    }

    pub fn generators(&self) -> &[GroupElem] {
        &self.generators
    }

    pub fn contains(&self, g: &GroupElem) -> bool {
        if let Some(set) = &self.elements {
            return set.contains(g);
        }
        let pre = self.preimage.as_ref().expect("explicit or preimage");
        let h = self.spec.project_into(g, &pre.positions, &pre.target);
        pre.inner.contains(&h)
    }

    pub fn order(&self) -> u128 {
        match &self.elements {
            Some(set) => set.len() as u128,
            None => {
                let pre = self.preimage.as_ref().unwrap();
                let kernel = self.spec.order() / pre.target.order();
                kernel * pre.inner.order()
            }
        }
    }

    pub fn index(&self) -> u128 {
        self.spec.order() / self.order()
    }

    pub fn is_full(&self) -> bool {
        self.order() == self.spec.order()
    }

    /// Replaces a rule-based descriptor by its element list.
    pub fn materialize(&self, cap: u128) -> Result<Self, GroupError> {
        if self.elements.is_some() {
            return Ok(self.clone());
        }
        let all = self.spec.enumerate(cap)?;
        let members: HashSet<GroupElem> = all.into_iter().filter(|g| self.contains(g)).collect();
        let mut h = Self {
            kind: self.kind,
            spec: self.spec.clone(),
            elements: Some(Arc::new(members)),
            generators: Vec::new(),
            preimage: None,
        };
        h.generators = h.small_generating_set();
        Ok(h)
    }

    /// Exhaustive check of closure under products and inverses.
    pub fn verify_closed(&self) -> bool {
        let Some(set) = &self.elements else {
            return false;
        };
        if !set.contains(&self.spec.identity()) {
            return false;
        }
        let elems: Vec<&GroupElem> = set.iter().collect();
        elems.par_iter().all(|a| {
            set.contains(&self.spec.inv(a)) && elems.iter().all(|b| set.contains(&self.spec.mul(a, b)))
        })
    }

    /// Greedy generating set: add the smallest element outside the current closure.
    fn small_generating_set(&self) -> Vec<GroupElem> {
        let Some(mut remaining) = self.sorted_elements() else {
            return Vec::new();
        };
        let mut gens = Vec::new();
        let mut current: HashSet<GroupElem> = HashSet::from([self.spec.identity()]);
        while current.len() < remaining.len() {
            let next = remaining
                .iter()
                .find(|g| !current.contains(g))
                .expect("closure is strictly smaller")
                .clone();
            gens.push(next);
            current = bfs_closure(&self.spec, &gens, u128::MAX)
                .expect("uncapped")
                .into_iter()
                .collect();
        }
        remaining.clear();
        gens
    }

    pub fn conjugate(&self, g: &GroupElem) -> Result<Self, GroupError> {
        let set = self.elements.as_ref().ok_or(GroupError::NotExplicit)?;
        let gi = self.spec.inv(g);
        let conj: HashSet<GroupElem> = set
            .iter()
            .map(|h| self.spec.mul(&self.spec.mul(g, h), &gi))
            .collect();
        Ok(Self {
            kind: self.kind,
            spec: self.spec.clone(),
            elements: Some(Arc::new(conj)),
            generators: self
                .generators
                .iter()
                .map(|h| self.spec.mul(&self.spec.mul(g, h), &gi))
                .collect(),
            preimage: None,
        })
    }

    pub fn intersection_order(&self, other: &Self) -> Result<u128, GroupError> {
        let a = self.elements.as_ref().ok_or(GroupError::NotExplicit)?;
        let b = other.elements.as_ref().ok_or(GroupError::NotExplicit)?;
        Ok(a.intersection(b).count() as u128)
    }

    pub fn export(&self) -> SubgroupExport {
        SubgroupExport {
            kind: self.kind,
            index: self.index().to_string(),
            size: self.order().to_string(),
            generators: self.generators.iter().map(|g| self.spec.format(g)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.export()).expect("plain data")
    }
}

fn require_atlas_group(spec: &GroupSpec) -> Result<u64, GroupError> {
    let fields = spec.ring().fields();
    if spec.dim() != 2 || fields.len() != 1 || fields[0].degree() != 1 {
        return Err(GroupError::AtlasUnavailable);
    }
    let p = fields[0].characteristic();
    if p == 2 {
        return Err(GroupError::AtlasUnavailable);
    }
    Ok(p)
}

fn m2(spec: &GroupSpec, a: u64, b: u64, c: u64, d: u64) -> GroupElem {
    let g = GroupElem::from_raw(vec![a, b, c, d]);
    debug_assert!(spec.is_special(&g));
    g
}

fn normalizer(spec: &GroupSpec, all: &[GroupElem], h: &SubgroupDescriptor) -> Vec<GroupElem> {
    let gens = h.generators().to_vec();
    all.par_iter()
        .filter(|g| {
            let gi = spec.inv(g);
            gens.iter()
                .all(|t| h.contains(&spec.mul(&spec.mul(g, t), &gi)))
        })
        .cloned()
        .collect()
}

/// Center, split and nonsplit tori, their normalizers and the Borel subgroup
/// of `SL_2(F_p)`, each verified to be a subgroup.
pub fn subgroup_atlas(spec: &GroupSpec) -> Result<Vec<SubgroupDescriptor>, GroupError> {
    let p = require_atlas_group(spec)?;
    let all = spec.enumerate(DEFAULT_ENUMERATION_CAP)?;
    let inv = |a: u64| crate::algebra::integers::inv_mod(a, p).expect("nonzero");
    let center = vec![spec.identity(), m2(spec, p - 1, 0, 0, p - 1)];
    let split: Vec<GroupElem> = (1..p).map(|a| m2(spec, a, 0, 0, inv(a))).collect();
    // [[a, b n], [b, a]] with a² − n b² = 1: the norm-one units of F_p(√n)
    let n = least_nonresidue(p);
    let mut nonsplit = Vec::new();
    for a in 0..p {
        for b in 0..p {
            let norm = (a as u128 * a as u128 + (p - n) as u128 * (b as u128 * b as u128 % p as u128)) % p as u128;
            if norm == 1 {
                let bn = (b as u128 * n as u128 % p as u128) as u64;
                nonsplit.push(m2(spec, a, bn, b, a));
            }
        }
    }
    let borel: Vec<GroupElem> = all
        .iter()
        .filter(|g| spec.entry(g, 1, 0)[0] == 0)
        .cloned()
        .collect();
    let center = SubgroupDescriptor::explicit(spec, SubgroupKind::Center, center)?;
    let split = SubgroupDescriptor::explicit(spec, SubgroupKind::SplitTorus, split)?;
    let nonsplit = SubgroupDescriptor::explicit(spec, SubgroupKind::NonsplitTorus, nonsplit)?;
    let n_split = SubgroupDescriptor::explicit(
        spec,
        SubgroupKind::TorusNormalizerSplit,
        normalizer(spec, &all, &split),
    )?;
    let n_nonsplit = SubgroupDescriptor::explicit(
        spec,
        SubgroupKind::TorusNormalizerNonsplit,
        normalizer(spec, &all, &nonsplit),
    )?;
    let borel = SubgroupDescriptor::explicit(spec, SubgroupKind::Borel, borel)?;
    Ok(vec![center, split, nonsplit, n_split, n_nonsplit, borel])
}

/// All distinct conjugates `g H g⁻¹`, `g` running over `all`, in first-seen order.
pub fn conjugates(
    h: &SubgroupDescriptor,
    all: &[GroupElem],
) -> Result<Vec<SubgroupDescriptor>, GroupError> {
    let mut seen: HashSet<Vec<GroupElem>> = HashSet::new();
    let mut out = Vec::new();
    for g in all {
        let c = h.conjugate(g)?;
        let key = c.sorted_elements().ok_or(GroupError::NotExplicit)?;
        if seen.insert(key) {
            out.push(c);
        }
    }
    Ok(out)
}

/// All distinct conjugates of the split and nonsplit tori.
pub fn torus_class(spec: &GroupSpec) -> Result<Vec<SubgroupDescriptor>, GroupError> {
    let atlas = subgroup_atlas(spec)?;
    let all = spec.enumerate(DEFAULT_ENUMERATION_CAP)?;
    let mut out = Vec::new();
    for torus in atlas
        .iter()
        .filter(|h| matches!(h.kind, SubgroupKind::SplitTorus | SubgroupKind::NonsplitTorus))
    {
        out.extend(conjugates(torus, &all)?);
    }
    Ok(out)
}

/// For each CRT factor, whether `π_i(H)` is all of `SL_d` of that factor and its index.
pub fn projection_profile(
    h: &SubgroupDescriptor,
    cap: u128,
) -> Result<Vec<FactorProjection>, GroupError> {
    let spec = h.ambient();
    let elems = h.elements().ok_or(GroupError::NotExplicit)?;
    (0..spec.num_factors())
        .map(|i| {
            let target = spec.factor_group(i)?;
            if target.order() > cap {
                return Err(GroupError::TooLarge {
                    size: target.order(),
                    cap,
                });
            }
            let image: HashSet<GroupElem> = elems
                .iter()
                .map(|g| spec.project_into(g, &[i], &target))
                .collect();
            let f = &spec.ring().fields()[i];
            let image_index = target.order() / image.len() as u128;
            Ok(FactorProjection {
                factor: i,
                p: f.characteristic(),
                k: f.degree(),
                surjective: image_index == 1,
                image_index,
            })
        })
        .collect()
}
