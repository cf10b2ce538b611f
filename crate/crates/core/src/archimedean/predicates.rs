use num_traits::ToPrimitive;
use serde::Serialize;

use super::embed::{CMat, EmbeddingSet};
use super::exact::{ExactGroup, IntMat};
use super::linalg::{adjoint, adjoint_with_inverse, condition_number, orthonormal_span, projective_distance, proximality};
use super::ArchimedeanError;
use crate::walks::free::{ball_intersection_counts, free_walk_stats, word_bound, Letter};
use crate::walks::DEFAULT_BUDGET;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PredicateValue {
    pub holds: bool,
    pub residual: f64,
}

/// `σ(h)Vσ(h)⁻¹ = V`: `‖(I − P_V) Ad(σ(h)) P_V‖ / ‖Ad(σ(h))‖ < tol`.
/// `v` holds a spanning set of `V ⊆ sl_d` as columns.
pub fn predicate_h_v(ad: &CMat, v: &CMat, tol: f64) -> PredicateValue {
    let q = orthonormal_span(v, 1e-12);
    let p = &q * q.adjoint();
    let n = ad.nrows();
    let residual = ((CMat::identity(n, n) - &p) * ad * &p).norm() / ad.norm();
    PredicateValue {
        holds: residual < tol,
        residual,
    }
}

/// `T ∘ Ad(σ₁(h)) = Ad(σ₂(h)) ∘ T`, residual scaled by `‖T‖·max ‖Ad‖`.
pub fn predicate_h_t(ad1: &CMat, ad2: &CMat, t: &CMat, tol: f64) -> PredicateValue {
    let residual = (t * ad1 - ad2 * t).norm() / (t.norm() * ad1.norm().max(ad2.norm()));
    PredicateValue {
        holds: residual < tol,
        residual,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LetterSearch {
    /// First letter `g₀` (index into `S' ∪ S'⁻¹`) with `T(U¹) ∩ U² = ∅`.
    pub letter: Option<usize>,
    /// `d(T z̄₁, z̄₂)` per letter, `None` when a letter is not proximal.
    pub distances: Vec<Option<f64>>,
    /// `κ(T)·r + r`: the separation needed.
    pub required: f64,
}

/// Scans the letters for one whose `ρ₁`-attracting neighborhood is carried
/// by `T` off the `ρ₂`-attracting neighborhood, using
/// `d(T x̄, T ȳ) ≤ κ(T) d(x̄, ȳ)`.
pub fn first_letter_search(
    group: &ExactGroup,
    emb: &EmbeddingSet,
    letters: &[IntMat],
    t: &CMat,
    s1: usize,
    s2: usize,
    radius: f64,
) -> Result<LetterSearch, ArchimedeanError> {
    let required = condition_number(t) * radius + radius;
    let mut distances = Vec::with_capacity(letters.len());
    let mut letter = None;
    for (k, g) in letters.iter().enumerate() {
        let p1 = proximality(&adjoint(&emb.sigma(group, g, s1)?)?)?;
        let p2 = proximality(&adjoint(&emb.sigma(group, g, s2)?)?)?;
        let dist = match (p1.z, p2.z) {
            (Some(z1), Some(z2)) => Some(projective_distance(&(t * z1), &z2)?),
            _ => None,
        };
        if letter.is_none() && dist.is_some_and(|d| d > required) {
            letter = Some(k);
        }
        distances.push(dist);
    }
    Ok(LetterSearch {
        letter,
        distances,
        required,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WordCountRow {
    pub l: usize,
    pub count: u64,
    pub bound: f64,
    pub holds: bool,
}

/// `|B_l ∩ H_T|` over reduced words in `gens^{±1}`, evaluated numerically in
/// both embeddings, against `(2m−1)^{l/2+1}(2m−2)^{l/2−1}`.
pub fn h_t_word_counts(
    group: &ExactGroup,
    emb: &EmbeddingSet,
    gens: &[IntMat],
    t: &CMat,
    s1: usize,
    s2: usize,
    l_max: usize,
    tol: f64,
) -> Result<Vec<WordCountRow>, ArchimedeanError> {
    let m = gens.len();
    let mats = |e: usize| -> Result<Vec<CMat>, ArchimedeanError> {
        gens.iter()
            .flat_map(|g| [g.clone(), group.inv(g)])
            .map(|g| emb.sigma(group, &g, e))
            .collect()
    };
    let (m1, m2) = (mats(s1)?, mats(s2)?);
    let d = group.dim();
    // value and inverse built letter by letter, so no numeric inversion
    let eval = |word: &[Letter], ms: &[CMat]| {
        let index = |l: Letter| 2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0);
        let mut g = CMat::identity(d, d);
        let mut g_inv = CMat::identity(d, d);
        for &l in word {
            g *= &ms[index(l)];
            g_inv = &ms[index(-l)] * g_inv;
        }
        adjoint_with_inverse(&g, &g_inv)
    };
    let counts = ball_intersection_counts(m, l_max, DEFAULT_BUDGET, |w| {
        let a1 = eval(w, &m1);
        let a2 = eval(w, &m2);
        predicate_h_t(&a1, &a2, t, tol).holds
    })?;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(l, count)| WordCountRow {
            l,
            count,
            bound: word_bound(m, l),
            holds: crate::walks::free::word_bound_holds(m, l, count),
        })
        .collect())
}

/// Upper bound on `χ_{S'}^{(2k)}(H_T) = Σ_l |B_l ∩ H_T| P_k(l)`: measured
/// counts where given, the word-count bound beyond them.
pub fn escape_upper_bound(m: usize, k: usize, counts: &[u64]) -> Result<f64, ArchimedeanError> {
    let stats = free_walk_stats(m, k)?;
    let mut total = 0.0;
    for (l, p) in stats.p.iter().enumerate() {
        let pf = p.to_f64().unwrap_or(0.0);
        let n = match counts.get(l) {
            Some(&c) => c as f64,
            None => word_bound(m, l).min(ball(m, l)),
        };
        total += n * pf;
    }
    Ok(total)
}

fn ball(m: usize, l: usize) -> f64 {
    crate::walks::free::ball_size(m, l).to_f64().unwrap_or(f64::INFINITY)
}

/// `2·((2m−1)/2m)^{k/20}`.
pub fn escape_reference(m: usize, k: usize) -> f64 {
    2.0 * ((2 * m - 1) as f64 / (2 * m) as f64).powf(k as f64 / 20.0)
}
