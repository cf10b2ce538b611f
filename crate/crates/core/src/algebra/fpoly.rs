//! Dense polynomials over the prime field `F_p`, coefficients ascending.

use super::integers::{add_mod, inv_mod, mul_mod, sub_mod};

pub type Poly = Vec<u64>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn reduce(a: &[i64], p: u64) -> Poly {
    trim(a.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| add_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
            .collect(),
    )
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
            .collect(),
    )
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(out)
}

pub fn scale(a: &[u64], c: u64, p: u64) -> Poly {
    trim(a.iter().map(|&x| mul_mod(x, c, p)).collect())
}

/// Quotient and remainder of `a` by nonzero `b`.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = inv_mod(b[db], p).expect("leading coefficient invertible mod p");
    let mut r = trim(a.to_vec());
    let mut q = vec![0u64; r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        let shift = dr - db;
        q[shift] = c;
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            r[shift + j] = sub_mod(r[shift + j], mul_mod(c, bj, p), p);
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => scale(a, inv_mod(a[d], p).expect("unit"), p),
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// Extended Euclid: `(g, s, t)` with `s a + t b = g`, `g` monic.
pub fn ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let d = degree(&r0).map(|d| r0[d]).unwrap_or(1);
    let inv = inv_mod(d, p).expect("unit");
    (scale(&r0, inv, p), scale(&s0, inv, p), scale(&t0, inv, p))
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Poly {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter()
        .rev()
        .fold(0u64, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
}

pub fn derivative(a: &[u64], p: u64) -> Poly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect(),
    )
}

/// Largest degree handled by [`factor_squarefree`].
pub const MAX_FACTOR_DEGREE: usize = 4;

/// Roots are located by exhaustive scan up to this prime; beyond it by
/// `gcd(f, x^p - x)` and equal-degree splitting.
const EXHAUSTIVE_ROOT_LIMIT: u64 = 1 << 20;

/// Distinct monic irreducible factors of a squarefree polynomial of degree
/// at most [`MAX_FACTOR_DEGREE`], sorted by degree.
/// Returns `None` when the degree is out of range.
pub fn factor_squarefree(f: &[u64], p: u64) -> Option<Vec<Poly>> {
    let f = monic(f, p);
    let deg = degree(&f)?;
    if deg > MAX_FACTOR_DEGREE {
        return None;
    }
    let mut factors: Vec<Poly> = Vec::new();
    let mut rest = f.clone();

    // linear factors
    let roots = find_roots(&rest, p);
    for r in roots {
        let lin = vec![(p - r) % p, 1];
        rest = divrem(&rest, &lin, p).0;
        factors.push(lin);
    }

    // distinct-degree split of the root-free part
    if degree(&rest).unwrap_or(0) > 0 {
        let x = vec![0u64, 1];
        let xp2 = powmod(&x, (p as u128) * (p as u128), &rest, p);
        let quad_part = gcd(&rest, &sub(&xp2, &x, p), p);
        let dq = degree(&quad_part).unwrap_or(0);
        if dq > 0 {
            rest = divrem(&rest, &quad_part, p).0;
            if dq == 2 {
                factors.push(quad_part);
            } else {
                factors.extend(split_equal_degree(&quad_part, 2, p));
            }
        }
        if degree(&rest).unwrap_or(0) > 0 {
            // root-free, quadratic-free, degree <= 4: irreducible
            factors.push(monic(&rest, p));
        }
    }
    // linear factors ordered by root, the rest by coefficients
    let key = |g: &Poly| -> (usize, Vec<u64>) {
        if g.len() == 2 {
            (1, vec![(p - g[0]) % p])
        } else {
            (g.len() - 1, g.clone())
        }
    };
    factors.sort_by_key(key);
    Some(factors)
}

fn find_roots(f: &[u64], p: u64) -> Vec<u64> {
    if p <= EXHAUSTIVE_ROOT_LIMIT {
        return (0..p).filter(|&a| eval(f, a, p) == 0).collect();
    }
    let x = vec![0u64, 1];
    let xp = powmod(&x, p as u128, f, p);
    let lin = gcd(f, &sub(&xp, &x, p), p);
    let mut roots: Vec<u64> = split_equal_degree(&lin, 1, p)
        .into_iter()
        .map(|l| (p - l[0]) % p)
        .collect();
    roots.sort_unstable();
    roots
}

/// Cantor–Zassenhaus equal-degree splitting with deterministic shifts.
/// `f` is a squarefree product of irreducibles of degree `k`.
fn split_equal_degree(f: &[u64], k: usize, p: u64) -> Vec<Poly> {
    let d = degree(f).unwrap_or(0);
    if d == 0 {
        return Vec::new();
    }
    if d == k {
        return vec![monic(f, p)];
    }
    if p == 2 {
        // brute force over monic polynomials of degree k
        let mut out = Vec::new();
        for bits in 0..(1u64 << k) {
            let mut cand: Poly = (0..k).map(|i| (bits >> i) & 1).collect();
            cand.push(1);
            if rem(f, &cand, p).is_empty() && irreducible_small(&cand, p) {
                out.push(cand);
            }
        }
        return out;
    }
    let exp = (pow_mod_u128(p, k as u32) - 1) / 2;
    for shift in 0..p {
        let base = vec![shift, 1];
        let t = powmod(&base, exp, f, p);
        let g = gcd(f, &sub(&t, &[1], p), p);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < d {
            let h = divrem(f, &g, p).0;
            let mut out = split_equal_degree(&g, k, p);
            out.extend(split_equal_degree(&h, k, p));
            return out;
        }
    }
    unreachable!("equal-degree splitting exhausted all shifts")
}

fn pow_mod_u128(p: u64, k: u32) -> u128 {
    (p as u128).pow(k)
}

fn irreducible_small(f: &[u64], p: u64) -> bool {
    let d = degree(f).unwrap_or(0);
    (1..=d / 2).all(|j| {
        let x = vec![0u64, 1];
        let xq = powmod(&x, (p as u128).pow(j as u32), f, p);
        degree(&gcd(f, &sub(&xq, &x, p), p)).unwrap_or(0) == 0
    })
}

/// True when `f` (monic, degree >= 1) is irreducible over `F_p`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    irreducible_small(&monic(f, p), p)
}
