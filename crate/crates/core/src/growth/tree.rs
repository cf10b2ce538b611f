use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use super::GrowthError;
use crate::groups::{GroupElem, GroupSpec};

#[derive(Debug, Clone, Serialize)]
pub struct TreeRegularization {
    /// The regular subset `A ⊆ S`, sorted.
    #[serde(skip)]
    pub a: Vec<GroupElem>,
    pub size: usize,
    /// CRT factor positions in level order (ascending prime, then residue degree).
    pub levels: Vec<usize>,
    /// `D_i`: children of every surviving vertex on level `i - 1`.
    pub degrees: Vec<usize>,
    /// `∏ 2(⌊log₂|G_i|⌋ + 1)`, what the pruning can lose in the worst case.
    pub loss_factor: f64,
    /// `∏ (2 log₂|G_i| + 1)`.
    pub nominal_loss_factor: f64,
    pub within_loss_bound: bool,
    pub within_nominal_bound: bool,
}

/// Prunes `S` to a subset whose prefix tree (level `i` = projections to the
/// first `i` CRT factors) is regular.
///
/// Levels are handled bottom-up. On each level the parents are bucketed by
/// `⌊log₂(child count)⌋`; the bucket with the most surviving leaves after
/// truncating every parent to the bucket's smallest child count is kept.
/// Children are equally heavy once the levels below are regular, so the
/// truncation keeps the first ones in element order.
pub fn tree_regularize(spec: &GroupSpec, s: &[GroupElem]) -> Result<TreeRegularization, GrowthError> {
    let mut leaves = s.to_vec();
    leaves.sort_unstable();
    leaves.dedup();
    if leaves.is_empty() {
        return Err(GrowthError::EmptyResult);
    }
    let fields = spec.ring().fields();
    let mut levels: Vec<usize> = (0..fields.len()).collect();
    levels.sort_by_key(|&i| (fields[i].characteristic(), fields[i].degree(), i));
    let n = levels.len();
    // prefix[i][x]: projection of leaf x to the first i levels (prefix[0] is the root)
    let targets: Vec<Option<GroupSpec>> = (0..=n)
        .map(|i| (i > 0).then(|| spec.projection_target(&levels[..i])).transpose())
        .collect::<Result<_, _>>()?;
    let prefix = |x: &GroupElem, i: usize| -> Option<GroupElem> {
        targets[i].as_ref().map(|t| spec.project_into(x, &levels[..i], t))
    };

    let mut alive = vec![true; leaves.len()];
    let mut degrees = vec![0usize; n];
    for i in (1..=n).rev() {
        // parent (level i-1) -> child (level i) -> surviving leaves below it
        let mut tree: BTreeMap<Option<GroupElem>, BTreeMap<Option<GroupElem>, Vec<usize>>> =
            BTreeMap::new();
        for (x, leaf) in leaves.iter().enumerate().filter(|&(x, _)| alive[x]) {
            tree.entry(prefix(leaf, i - 1))
                .or_default()
                .entry(prefix(leaf, i))
                .or_default()
                .push(x);
        }
        let mut buckets: BTreeMap<u32, Vec<&Option<GroupElem>>> = BTreeMap::new();
        for (parent, children) in &tree {
            buckets.entry(children.len().ilog2()).or_default().push(parent);
        }
        // lower levels are regular, so every child carries the same number of leaves
        let per_child = tree.values().next().and_then(|c| c.values().next()).map_or(0, Vec::len);
        let (_, keep, width) = buckets
            .iter()
            .map(|(&b, parents)| {
                let width = parents.iter().map(|p| tree[*p].len()).min().expect("nonempty bucket");
                (parents.len() * width * per_child, b, width)
            })
            .max_by_key(|&(mass, b, _)| (mass, std::cmp::Reverse(b)))
            .expect("nonempty level");
        degrees[i - 1] = width;
        let mut survivors = vec![false; leaves.len()];
        for parent in &buckets[&keep] {
            // children are all equally heavy; keep the first `width` in element order
            for leaves_below in tree[*parent].values().take(width) {
                for &x in leaves_below {
                    survivors[x] = true;
                }
            }
        }
        alive = survivors;
    }
    let a: Vec<GroupElem> = leaves
        .iter()
        .zip(&alive)
        .filter(|(_, &keep)| keep)
        .map(|(x, _)| x.clone())
        .collect();
    if a.is_empty() {
        return Err(GrowthError::EmptyResult);
    }
    let log2_orders: Vec<f64> = levels.iter().map(|&i| (spec.factor_order(i) as f64).log2()).collect();
    let loss_factor: f64 = log2_orders.iter().map(|l| 2.0 * (l.floor() + 1.0)).product();
    let nominal_loss_factor: f64 = log2_orders.iter().map(|l| 2.0 * l + 1.0).product();
    let s_len = leaves.len() as f64;
    let size = a.len();
    Ok(TreeRegularization {
        a,
        size,
        levels,
        degrees,
        loss_factor,
        nominal_loss_factor,
        within_loss_bound: size as f64 * loss_factor >= s_len,
        within_nominal_bound: size as f64 * nominal_loss_factor >= s_len,
    })
}

/// Children per surviving vertex on each level of the prefix tree of `a`;
/// `None` when some level is irregular.
pub fn tree_degrees(spec: &GroupSpec, a: &[GroupElem], levels: &[usize]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(levels.len());
    for i in 1..=levels.len() {
        let target = spec.projection_target(&levels[..i]).ok()?;
        let parent = (i > 1).then(|| spec.projection_target(&levels[..i - 1]).ok()).flatten();
        let mut children: HashMap<Option<GroupElem>, HashSet<GroupElem>> =
            HashMap::new();
        for x in a {
            let p = parent.as_ref().map(|t| spec.project_into(x, &levels[..i - 1], t));
            children.entry(p).or_default().insert(spec.project_into(x, &levels[..i], &target));
        }
        let mut counts = children.values().map(|c| c.len());
        let first = counts.next()?;
        if counts.any(|c| c != first) {
            return None;
        }
        out.push(first);
    }
    Some(out)
}
