use std::collections::HashMap;

use serde::Serialize;

use super::GrowthError;
use crate::groups::{
    conjugates, subgroup_atlas, GroupElem, GroupError, GroupSpec, SubgroupKind,
    DEFAULT_ENUMERATION_CAP,
};

/// Factors smaller than this are not scanned by default.
pub const DEFAULT_MIN_FACTOR_ORDER: u128 = 60;

#[derive(Debug, Clone, Serialize)]
pub struct StripStep {
    pub factor: usize,
    pub kind: SubgroupKind,
    pub mass: f64,
    pub threshold: f64,
    pub remaining: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StripReport {
    #[serde(skip)]
    pub b: Vec<GroupElem>,
    pub size: usize,
    /// Factors moved to `J_b`, in stripping order.
    pub stripped: Vec<usize>,
    /// Factors below the size cutoff, never scanned.
    pub skipped: Vec<usize>,
    pub steps: Vec<StripStep>,
    /// Full rescan after termination: every scanned coset is below threshold.
    pub verified: bool,
}

/// Every conjugate of every atlas member of one factor, with the sorted
/// element list used to key cosets.
struct FactorCosets {
    target: GroupSpec,
    subgroups: Vec<(SubgroupKind, Vec<GroupElem>)>,
}

impl FactorCosets {
    fn new(spec: &GroupSpec, i: usize) -> Result<Self, GrowthError> {
        let target = spec.factor_group(i)?;
        let atlas = subgroup_atlas(&target).map_err(|e| match e {
            GroupError::AtlasUnavailable => GrowthError::AtlasUnavailable(i),
            e => e.into(),
        })?;
        let all = target.enumerate(DEFAULT_ENUMERATION_CAP)?;
        let mut subgroups = Vec::new();
        for h in &atlas {
            for c in conjugates(h, &all)? {
                subgroups.push((h.kind, c.sorted_elements().expect("explicit")));
            }
        }
        Ok(Self { target, subgroups })
    }

    /// Heaviest coset `x H` over all subgroups: (subgroup index, coset key, count).
    fn heaviest(&self, projected: &[GroupElem]) -> Option<(usize, GroupElem, usize)> {
        let t = &self.target;
        let mut best: Option<(usize, GroupElem, usize)> = None;
        for (j, (_, h)) in self.subgroups.iter().enumerate() {
            let mut counts: HashMap<GroupElem, usize> = HashMap::new();
            for x in projected {
                let key = h.iter().map(|e| t.mul(x, e)).min().expect("nonempty subgroup");
                *counts.entry(key).or_default() += 1;
            }
            let mut entries: Vec<(GroupElem, usize)> = counts.into_iter().collect();
            entries.sort_unstable();
            for (key, c) in entries {
                if best.as_ref().is_none_or(|b| c > b.2) {
                    best = Some((j, key, c));
                }
            }
        }
        best
    }
}

/// Repeatedly restricts `S` to a heavy coset `π_i⁻¹(gH)` while some factor
/// `i` still has a coset of an atlas subgroup (any conjugate) carrying at
/// least `|G_i|^{-δ'}` of the set, moving `i` to the stripped list each time.
/// Factors with `|G_i| < min_factor_order` are left alone.
pub fn coset_strip(
    spec: &GroupSpec,
    s: &[GroupElem],
    delta_prime: f64,
    min_factor_order: u128,
) -> Result<StripReport, GrowthError> {
    if !(delta_prime > 0.0) {
        return Err(GrowthError::InvalidParameter("δ' must be positive"));
    }
    let mut b = s.to_vec();
    b.sort_unstable();
    b.dedup();
    if b.is_empty() {
        return Err(GrowthError::EmptyResult);
    }
    let n = spec.num_factors();
    let (eligible, skipped): (Vec<usize>, Vec<usize>) =
        (0..n).partition(|&i| spec.factor_order(i) >= min_factor_order);
    let mut cosets: HashMap<usize, FactorCosets> = HashMap::new();
    for &i in &eligible {
        cosets.insert(i, FactorCosets::new(spec, i)?);
    }
    let threshold = |i: usize| (spec.factor_order(i) as f64).powf(-delta_prime);
    let project = |b: &[GroupElem], i: usize| -> Vec<GroupElem> {
        let t = &cosets[&i].target;
        b.iter().map(|x| spec.project_into(x, &[i], t)).collect()
    };

    let mut good = eligible.clone();
    let mut stripped = Vec::new();
    let mut steps = Vec::new();
    'outer: loop {
        for pos in 0..good.len() {
            let i = good[pos];
            let fc = &cosets[&i];
            let projected = project(&b, i);
            let Some((j, key, count)) = fc.heaviest(&projected) else {
                continue;
            };
            let mass = count as f64 / b.len() as f64;
            if mass < threshold(i) {
                continue;
            }
            let (kind, h) = &fc.subgroups[j];
            let t = &fc.target;
            b = b
                .into_iter()
                .zip(projected)
                .filter(|(_, y)| h.iter().map(|e| t.mul(y, e)).min().as_ref() == Some(&key))
                .map(|(x, _)| x)
                .collect();
            steps.push(StripStep {
                factor: i,
                kind: *kind,
                mass,
                threshold: threshold(i),
                remaining: b.len(),
            });
            stripped.push(i);
            good.remove(pos);
            continue 'outer;
        }
        break;
    }
    let verified = good.iter().all(|&i| {
        cosets[&i]
            .heaviest(&project(&b, i))
            .is_none_or(|(_, _, c)| (c as f64 / b.len() as f64) < threshold(i))
    });
    Ok(StripReport {
        size: b.len(),
        b,
        stripped,
        skipped,
        steps,
        verified,
    })
}
