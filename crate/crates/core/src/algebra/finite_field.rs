//! Arithmetic in `F_{p^k} = F_p[x]/(g)` on fixed-width coefficient slices.

use serde::Serialize;

use super::fpoly;
use super::integers::{add_mod, inv_mod, mul_mod, sub_mod};
use super::AlgebraError;

/// Widest residue degree supported (matches the degree cap on `f`).
pub const MAX_K: usize = fpoly::MAX_FACTOR_DEGREE;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteField {
    p: u64,
    /// Monic modulus, ascending, length `k + 1`.
    modulus: Vec<u64>,
    k: usize,
    order: u64,
}

/// Element of one CRT factor: `factor` names the factor, `coeffs` has length `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FqElem {
    pub factor: usize,
    pub coeffs: Vec<u64>,
}

impl FiniteField {
    /// Field `F_p[x]/(g)` for a monic irreducible `g`.
    pub fn new(p: u64, g: &[u64]) -> Result<Self, AlgebraError> {
        let g = fpoly::trim(g.iter().map(|c| c % p).collect());
        let k = fpoly::degree(&g).ok_or(AlgebraError::NotIrreducible)?;
        if k == 0 || k > MAX_K || g[k] != 1 {
            return Err(AlgebraError::NotIrreducible);
        }
        if !fpoly::is_irreducible(&g, p) {
            return Err(AlgebraError::NotIrreducible);
        }
        let order = super::integers::checked_pow(p, k as u32).ok_or(AlgebraError::Overflow)?;
        Ok(Self {
            p,
            modulus: g,
            k,
            order,
        })
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Self {
        Self {
            p,
            modulus: vec![0, 1],
            k: 1,
            order: p,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.k]
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = 1 % self.p;
        v
    }

    pub fn from_int(&self, n: i64) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = n.rem_euclid(self.p as i64) as u64;
        v
    }

    /// The class of `x` (the generator of the extension).
    pub fn generator(&self) -> Vec<u64> {
        let mut v = vec![0; self.k];
        if self.k > 1 {
            v[1] = 1;
        } else {
            v[0] = self.p - self.modulus[0] % self.p;
            v[0] %= self.p;
        }
        v
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &[u64]) -> bool {
        a[0] == 1 && a[1..].iter().all(|&c| c == 0)
    }

    /// Index of an element in `[0, p^k)` (base-`p` digits, little-endian).
    pub fn index_of(&self, a: &[u64]) -> u64 {
        a.iter().rev().fold(0u64, |acc, &c| acc * self.p + c)
    }

    pub fn element_at(&self, mut idx: u64) -> Vec<u64> {
        let mut v = vec![0; self.k];
        for c in v.iter_mut() {
            *c = idx % self.p;
            idx /= self.p;
        }
        v
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    pub fn add_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for i in 0..self.k {
            out[i] = add_mod(a[i], b[i], self.p);
        }
    }

    pub fn sub_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for i in 0..self.k {
            out[i] = sub_mod(a[i], b[i], self.p);
        }
    }

    pub fn neg_into(&self, a: &[u64], out: &mut [u64]) {
        for i in 0..self.k {
            out[i] = if a[i] == 0 { 0 } else { self.p - a[i] };
        }
    }

    pub fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let p = self.p;
        if self.k == 1 {
            out[0] = mul_mod(a[0], b[0], p);
            return;
        }
        let k = self.k;
        let mut t = [0u64; 2 * MAX_K];
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                t[i + j] = add_mod(t[i + j], mul_mod(a[i], b[j], p), p);
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = t[i];
            if c == 0 {
                continue;
            }
            t[i] = 0;
            for j in 0..k {
                t[i - k + j] = sub_mod(t[i - k + j], mul_mod(c, self.modulus[j], p), p);
            }
        }
        out[..k].copy_from_slice(&t[..k]);
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = self.zero();
        self.add_into(a, b, &mut out);
        out
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = self.zero();
        self.sub_into(a, b, &mut out);
        out
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        let mut out = self.zero();
        self.neg_into(a, &mut out);
        out
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = self.zero();
        self.mul_into(a, b, &mut out);
        out
    }

    pub fn pow(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut acc = self.one();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        if self.k == 1 {
            return Some(vec![inv_mod(a[0], self.p)?]);
        }
        Some(self.pow(a, self.order as u128 - 2))
    }

    /// `a^{p^j}`.
    pub fn frobenius(&self, a: &[u64], j: usize) -> Vec<u64> {
        let mut out = a.to_vec();
        for _ in 0..j {
            out = self.pow(&out, self.p as u128);
        }
        out
    }

    /// Membership in the subfield of degree `sub_degree` (which must divide `k`).
    pub fn in_subfield(&self, a: &[u64], sub_degree: usize) -> bool {
        debug_assert!(sub_degree > 0 && self.k % sub_degree == 0);
        self.frobenius(a, sub_degree) == a
    }

    /// Proper divisors of the degree, i.e. degrees of proper subfields.
    pub fn proper_subfield_degrees(&self) -> Vec<usize> {
        (1..self.k).filter(|j| self.k % j == 0).collect()
    }

    pub fn elem(&self, factor: usize, coeffs: Vec<u64>) -> FqElem {
        debug_assert_eq!(coeffs.len(), self.k);
        FqElem { factor, coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FiniteField {
        FiniteField::new(3, &[1, 0, 1]).unwrap()
    }

    #[test]
    fn f9_inverse_of_theta() {
        let f = f9();
        let theta = vec![0, 1];
        assert_eq!(f.inv(&theta).unwrap(), vec![0, 2]);
        assert_eq!(f.mul(&theta, &theta), vec![2, 0]);
    }

    #[test]
    fn every_nonzero_element_invertible() {
        let f = f9();
        for a in f.elements().skip(1) {
            let b = f.inv(&a).unwrap();
            assert!(f.is_one(&f.mul(&a, &b)));
        }
        let f = FiniteField::new(2, &[1, 1, 0, 1]).unwrap();
        for a in f.elements().skip(1) {
            assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
        }
    }

    #[test]
    fn prime_subfield_of_f9() {
        let f = f9();
        let in_f3: Vec<_> = f.elements().filter(|a| f.in_subfield(a, 1)).collect();
        assert_eq!(in_f3.len(), 3);
        assert!(in_f3.iter().all(|a| a[1] == 0));
    }

    #[test]
    fn rejects_reducible_modulus() {
        assert!(FiniteField::new(5, &[1, 0, 1]).is_err());
    }

    #[test]
    fn index_roundtrip() {
        let f = f9();
        for i in 0..9 {
            assert_eq!(f.index_of(&f.element_at(i)), i);
        }
    }
}
