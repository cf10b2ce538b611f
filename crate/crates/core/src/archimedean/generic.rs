use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::embed::{CMat, EmbeddingSet};
use super::exact::{ExactGroup, IntMat};
use super::linalg::{adjoint, distance_to_subspace, proximality, CVec};
use super::ArchimedeanError;

/// Default tolerance for the numeric predicates.
pub const PREDICATE_TOL: f64 = 1e-8;
/// Subsets scanned per size before switching to seeded sampling.
pub const SUBSET_CAP: usize = 20_000;

/// `z` and `V` of one proximal `ρ(g)`.
#[derive(Debug, Clone)]
pub struct Attractor {
    pub z: CVec,
    pub v: CMat,
}

/// `A ∪ Ã` in the order `g_1, g_1⁻¹, g_2, g_2⁻¹, …`.
pub fn symmetrize(group: &ExactGroup, a: &[IntMat]) -> Vec<IntMat> {
    a.iter().flat_map(|g| [g.clone(), group.inv(g)]).collect()
}

/// Attracting line and repelling complement of `ρ_e(g)` for each letter, or
/// the index of the first letter whose adjoint image is not proximal.
pub fn attractors(
    group: &ExactGroup,
    emb: &EmbeddingSet,
    letters: &[IntMat],
    e: usize,
) -> Result<Result<Vec<Attractor>, usize>, ArchimedeanError> {
    let mut out = Vec::with_capacity(letters.len());
    for (k, g) in letters.iter().enumerate() {
        let rep = proximality(&adjoint(&emb.sigma(group, g, e)?)?)?;
        match (rep.z, rep.v) {
            (Some(z), Some(v)) => out.push(Attractor { z, v }),
            _ => return Ok(Err(k)),
        }
    }
    Ok(Ok(out))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionResult {
    pub holds: bool,
    /// Worst-case margin; infinite when nothing needed checking.
    pub margin: f64,
    pub instances: usize,
    /// Instances were sampled rather than exhausted.
    pub sampled: bool,
}

impl ConditionResult {
    fn vacuous() -> Self {
        Self {
            holds: true,
            margin: f64::INFINITY,
            instances: 0,
            sampled: false,
        }
    }

    fn merge(&mut self, margin: f64) {
        self.margin = self.margin.min(margin);
        self.instances += 1;
    }

    fn finish(mut self, tol: f64) -> Self {
        self.holds = self.instances == 0 || self.margin > tol;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GenericReport {
    pub letters: usize,
    pub condition_i: ConditionResult,
    pub condition_ii: ConditionResult,
    pub condition_iii: ConditionResult,
    pub pass: bool,
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| acc.saturating_mul(n as u128 - i) / (i + 1))
}

/// Calls `visit` on every `k`-subset of `0..n`, or on `SUBSET_CAP` seeded
/// random ones when there are more. Returns whether sampling was used.
fn for_each_subset(n: usize, k: usize, seed: u64, mut visit: impl FnMut(&[usize])) -> bool {
    if k > n {
        return false;
    }
    if binomial(n, k) > SUBSET_CAP as u128 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..SUBSET_CAP {
            let mut idx = sample(&mut rng, n, k).into_vec();
            idx.sort_unstable();
            visit(&idx);
        }
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return false;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn sorted_singular_values(m: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Checks conditions (i)–(iii) of genericity for `A` with respect to the
/// embeddings `i` and `j`. Every letter must be proximal under both adjoint
/// representations.
pub fn generic_check(
    group: &ExactGroup,
    emb: &EmbeddingSet,
    a: &[IntMat],
    i: usize,
    j: usize,
    tol: f64,
) -> Result<GenericReport, ArchimedeanError> {
    let letters = symmetrize(group, a);
    let mut geometry = Vec::new();
    for e in [i, j] {
        match attractors(group, emb, &letters, e)? {
            Ok(att) => geometry.push(att),
            Err(letter) => return Err(ArchimedeanError::NonProximalMember { letter, embedding: e }),
        }
    }
    let n = letters.len();
    let dim = group.dim() * group.dim() - 1;

    let mut cond_i = ConditionResult::vacuous();
    for x1 in 0..n {
        for x2 in 0..n {
            if group.is_identity(&group.mul(&letters[x1], &letters[x2])) {
                continue;
            }
            for att in &geometry {
                cond_i.merge(distance_to_subspace(&att[x1].z, &att[x2].v)?);
            }
        }
    }

    // any s of the z-lines span at least s - 1 dimensions
    let mut cond_ii = ConditionResult::vacuous();
    for (e, att) in geometry.iter().enumerate() {
        for s in 3..=n.min(dim + 1) {
            let sampled = for_each_subset(n, s, e as u64, |idx| {
                let m = CMat::from_columns(&idx.iter().map(|&k| att[k].z.clone()).collect::<Vec<_>>());
                let sv = sorted_singular_values(&m);
                cond_ii.merge(sv[s - 2] / sv[0]);
            });
            cond_ii.sampled |= sampled;
        }
    }

    // no nonzero T with T z₁ ∥ z₂ on d² + 2 letters
    let mut cond_iii = ConditionResult::vacuous();
    let s = dim + 3;
    let (a1, a2) = (&geometry[0], &geometry[1]);
    let sampled = for_each_subset(n, s, 7, |idx| {
        let mut rows = CMat::zeros(dim * s, dim * dim);
        for (b, &k) in idx.iter().enumerate() {
            let z1 = &a1[k].z;
            let z2 = &a2[k].z;
            let proj = CMat::identity(dim, dim) - z2 * z2.adjoint();
            // (I - z₂z₂*) T z₁ with T column-major: T z₁ = Σ_c z₁[c] T[:, c]
            for c in 0..dim {
                let block = &proj * z1[c];
                rows.view_mut((b * dim, c * dim), (dim, dim)).copy_from(&block);
            }
        }
        let sv = sorted_singular_values(&rows);
        cond_iii.merge(sv[dim * dim - 1] / sv[0]);
    });
    cond_iii.sampled = sampled;

    let condition_i = cond_i.finish(tol);
    let condition_ii = cond_ii.finish(tol);
    let condition_iii = cond_iii.finish(tol);
    Ok(GenericReport {
        letters: n,
        pass: condition_i.holds && condition_ii.holds && condition_iii.holds,
        condition_i,
        condition_ii,
        condition_iii,
    })
}
