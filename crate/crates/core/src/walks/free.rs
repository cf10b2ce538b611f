//! Walks on the free group `F_m` with the symmetric generating set of `2m` letters.
//!
//! Letters are nonzero `i8`s: `i+1` is the `i`-th generator and `-(i+1)` its inverse.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::WalkError;

pub type Letter = i8;

#[derive(Debug, Clone, Serialize)]
pub struct FreeWalkStats {
    pub m: usize,
    pub k: usize,
    /// `|B_l|` for `l = 0..=2k`.
    pub ball_sizes: Vec<BigUint>,
    /// Number of length-`2k` walks ending at reduced length `l`.
    pub level_counts: Vec<BigUint>,
    /// `P_k(l)`: probability of ending at one fixed word of length `l`.
    pub p: Vec<BigRational>,
    /// `((2m-1)/m²)^k`.
    pub kesten_bound: BigRational,
    pub kesten_ok: bool,
    /// `Σ_l |B_l| P_k(l) = 1`.
    pub normalization_ok: bool,
}

fn check_m(m: usize) -> Result<(), WalkError> {
    if !(2..=63).contains(&m) {
        return Err(WalkError::InvalidRank(m));
    }
    Ok(())
}

/// `|B_l| = 2m(2m-1)^{l-1}` for `l ≥ 1`, `|B_0| = 1`.
pub fn ball_size(m: usize, l: usize) -> BigUint {
    if l == 0 {
        return BigUint::one();
    }
    BigUint::from(2 * m) * BigUint::from(2 * m - 1).pow(l - 1)
}

/// Exact statistics from the length chain: from length 0 all `2m` letters go up,
/// from length `l ≥ 1` there are `2m-1` ways up and one way down.
pub fn free_walk_stats(m: usize, k: usize) -> Result<FreeWalkStats, WalkError> {
    check_m(m)?;
    let steps = 2 * k;
    let mut counts = vec![BigUint::zero(); steps + 1];
    counts[0] = BigUint::one();
    for _ in 0..steps {
        let mut next = vec![BigUint::zero(); steps + 1];
        for (l, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if l == 0 {
                next[1] += c * BigUint::from(2 * m);
            } else {
                if l < steps {
                    next[l + 1] += c * BigUint::from(2 * m - 1);
                }
                next[l - 1] += c;
            }
        }
        counts = next;
    }
    Ok(stats_from_counts(m, k, counts))
}

fn stats_from_counts(m: usize, k: usize, counts: Vec<BigUint>) -> FreeWalkStats {
    let steps = 2 * k;
    let total = BigUint::from(2 * m).pow(steps);
    let ball_sizes: Vec<BigUint> = (0..=steps).map(|l| ball_size(m, l)).collect();
    let p: Vec<BigRational> = counts
        .iter()
        .zip(&ball_sizes)
        .map(|(c, b)| BigRational::new(BigInt::from(c.clone()), BigInt::from(&total * b)))
        .collect();
    let kesten_bound = BigRational::new(
        BigInt::from(2 * m - 1).pow(k),
        BigInt::from(m * m).pow(k),
    );
    let sum: BigRational = p
        .iter()
        .zip(&ball_sizes)
        .map(|(x, b)| x * BigRational::from_integer(BigInt::from(b.clone())))
        .sum();
    FreeWalkStats {
        m,
        k,
        kesten_ok: p[0] <= kesten_bound,
        normalization_ok: sum.is_one(),
        ball_sizes,
        level_counts: counts,
        p,
        kesten_bound,
    }
}

/// Same statistics by reducing all `(2m)^{2k}` words explicitly.
pub fn free_walk_stats_enumerated(
    m: usize,
    k: usize,
    budget: u128,
) -> Result<FreeWalkStats, WalkError> {
    check_m(m)?;
    let steps = 2 * k;
    let work = (2 * m as u128).checked_pow(steps as u32).unwrap_or(u128::MAX);
    if work > budget {
        return Err(WalkError::BudgetExceeded { work, budget });
    }
    let letters = alphabet(m);
    let mut counts = vec![0u64; steps + 1];
    let mut word = vec![0usize; steps];
    loop {
        let mut stack: Vec<Letter> = Vec::with_capacity(steps);
        for &i in &word {
            let x = letters[i];
            if stack.last() == Some(&-x) {
                stack.pop();
            } else {
                stack.push(x);
            }
        }
        counts[stack.len()] += 1;
        // odometer over all words
        let mut pos = 0;
        loop {
            if pos == steps {
                let counts = counts.into_iter().map(BigUint::from).collect();
                return Ok(stats_from_counts(m, k, counts));
            }
            word[pos] += 1;
            if word[pos] < letters.len() {
                break;
            }
            word[pos] = 0;
            pos += 1;
        }
    }
}

pub fn alphabet(m: usize) -> Vec<Letter> {
    (1..=m as Letter).flat_map(|i| [i, -i]).collect()
}

/// Calls `visit` on every reduced word of length exactly `l`, in a fixed order.
pub fn for_each_reduced_word(m: usize, l: usize, mut visit: impl FnMut(&[Letter])) {
    fn rec(letters: &[Letter], l: usize, word: &mut Vec<Letter>, visit: &mut dyn FnMut(&[Letter])) {
        if word.len() == l {
            visit(word);
            return;
        }
        for &x in letters {
            if word.last() == Some(&-x) {
                continue;
            }
            word.push(x);
            rec(letters, l, word, visit);
            word.pop();
        }
    }
    let letters = alphabet(m);
    rec(&letters, l, &mut Vec::with_capacity(l), &mut visit);
}

/// `|B_l ∩ H|` for `l = 0..=l_max`, with `H` given by a membership predicate on
/// reduced words. Words are split by first letter across threads.
pub fn ball_intersection_counts(
    m: usize,
    l_max: usize,
    budget: u128,
    member: impl Fn(&[Letter]) -> bool + Sync,
) -> Result<Vec<u64>, WalkError> {
    check_m(m)?;
    let work: BigUint = (0..=l_max).map(|l| ball_size(m, l)).sum();
    if work > BigUint::from(budget) {
        return Err(WalkError::BudgetExceeded {
            work: u128::try_from(work).unwrap_or(u128::MAX),
            budget,
        });
    }
    let mut out = vec![u64::from(member(&[]))];
    for l in 1..=l_max {
        let count: u64 = alphabet(m)
            .par_iter()
            .map(|&first| {
                let mut c = 0u64;
                for_each_reduced_word(m, l - 1, |rest| {
                    if rest.first() == Some(&-first) {
                        return;
                    }
                    let mut w = Vec::with_capacity(l);
                    w.push(first);
                    w.extend_from_slice(rest);
                    if member(&w) {
                        c += 1;
                    }
                });
                c
            })
            .sum();
        out.push(count);
    }
    Ok(out)
}

/// `|B_l ∩ H| ≤ (2m-1)^{l/2+1}(2m-2)^{l/2-1}`, compared exactly after squaring.
pub fn word_bound_holds(m: usize, l: usize, count: u64) -> bool {
    let a = BigUint::from(2 * m - 1);
    let b = BigUint::from(2 * m - 2);
    let mut lhs = BigUint::from(count).pow(2u32);
    let mut rhs = a.pow(l + 2);
    if l >= 2 {
        rhs *= b.pow(l - 2);
    } else {
        lhs *= b.pow(2 - l);
    }
    lhs <= rhs
}

/// The bound itself as a float, for reports.
pub fn word_bound(m: usize, l: usize) -> f64 {
    let lf = l as f64;
    ((2 * m - 1) as f64).powf(lf / 2.0 + 1.0) * ((2 * m - 2) as f64).powf(lf / 2.0 - 1.0)
}
