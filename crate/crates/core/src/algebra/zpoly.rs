//! Integer polynomials: resultants, discriminants and a small-degree
//! factorization check over `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Resultant of two integer polynomials (ascending coefficients) via the
/// Sylvester matrix.
pub fn resultant(a: &[i64], b: &[i64]) -> BigInt {
    let da = a.len() - 1;
    let db = b.len() - 1;
    let n = da + db;
    if n == 0 {
        return BigInt::one();
    }
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for row in 0..db {
        for (i, &c) in a.iter().rev().enumerate() {
            m[row][row + i] = BigInt::from(c);
        }
    }
    for row in 0..da {
        for (i, &c) in b.iter().rev().enumerate() {
            m[db + row][row + i] = BigInt::from(c);
        }
    }
    bareiss_det(m)
}

/// Discriminant of a monic integer polynomial; `1` for degree one.
pub fn discriminant(f: &[i64]) -> BigInt {
    let n = f.len() - 1;
    if n <= 1 {
        return BigInt::one();
    }
    let df: Vec<i64> = f.iter().enumerate().skip(1).map(|(i, &c)| c * i as i64).collect();
    let res = resultant(f, &df);
    // disc = (-1)^{n(n-1)/2} Res(f, f') / lc(f), lc = 1
    if (n * (n - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

fn eval_big(f: &[i64], num: &BigInt, den: &BigInt) -> BigInt {
    // den^n f(num/den)
    let n = f.len() - 1;
    let mut acc = BigInt::zero();
    let mut den_pow = BigInt::one();
    let mut terms = Vec::with_capacity(f.len());
    for _ in 0..=n {
        terms.push(den_pow.clone());
        den_pow *= den;
    }
    let mut num_pow = BigInt::one();
    for (i, &c) in f.iter().enumerate() {
        acc += BigInt::from(c) * &num_pow * &terms[n - i];
        num_pow *= num;
    }
    acc
}

fn divisors(n: i64) -> Vec<i64> {
    let n = n.unsigned_abs();
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d as i64);
            if d * d != n {
                out.push((n / d) as i64);
            }
        }
        d += 1;
    }
    out
}

/// Searches for a nontrivial factorization of a monic integer polynomial of
/// degree at most 4. Returns a witness description when one is found.
pub fn find_factor(f: &[i64]) -> Option<String> {
    let n = f.len() - 1;
    if n <= 1 {
        return None;
    }
    // linear factors: integer roots dividing the constant term
    if f[0] == 0 {
        return Some("x".into());
    }
    for d in divisors(f[0]) {
        for r in [d, -d] {
            if eval_big(f, &BigInt::from(r), &BigInt::one()).is_zero() {
                return Some(format!("x - ({r})"));
            }
        }
    }
    if n == 4 {
        // (x^2 + a x + b)(x^2 + c x + e): b e = f0, a + c = f3,
        // b + e + a c = f2, a e + b c = f1
        let (f0, f1, f2, f3) = (f[0] as i128, f[1] as i128, f[2] as i128, f[3] as i128);
        for b in divisors(f[0]).into_iter().flat_map(|d| [d, -d]) {
            let b = b as i128;
            let e = f0 / b;
            // a^2 - f3 a + (f2 - b - e) = 0
            let disc = f3 * f3 - 4 * (f2 - b - e);
            if disc < 0 {
                continue;
            }
            let s = BigInt::from(disc).sqrt();
            let s: i128 = (&s).try_into().unwrap_or(-1);
            if s < 0 || s * s != disc {
                continue;
            }
            for num in [f3 + s, f3 - s] {
                if num.is_odd() {
                    continue;
                }
                let a = num / 2;
                let c = f3 - a;
                if a * e + b * c == f1 {
                    return Some(format!("(x^2 + {a}x + {b})(x^2 + {c}x + {e})"));
                }
            }
        }
    }
    None
}

pub(crate) fn abs_u64(x: &BigInt) -> Option<u64> {
    x.abs().try_into().ok()
}
