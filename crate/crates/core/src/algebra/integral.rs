use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use super::residue::{NumberField, ResidueRing, RingElem};

/// Exact element of `Z[θ] = Z[x]/(f)`, coefficients on `1, θ, …, θ^{r-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegralElem(pub Vec<BigInt>);

impl IntegralElem {
    pub fn zero(r: usize) -> Self {
        Self(vec![BigInt::zero(); r])
    }

    pub fn from_int(r: usize, n: i64) -> Self {
        let mut v = vec![BigInt::zero(); r];
        v[0] = BigInt::from(n);
        Self(v)
    }

    pub fn one(r: usize) -> Self {
        Self::from_int(r, 1)
    }

    pub fn from_coeffs(r: usize, coeffs: &[i64]) -> Self {
        let mut v = vec![BigInt::zero(); r];
        for (slot, &c) in v.iter_mut().zip(coeffs) {
            *slot = BigInt::from(c);
        }
        Self(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.0[0].is_one() && self.0[1..].iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn mul(&self, o: &Self, field: &NumberField) -> Self {
        let r = self.0.len();
        if r == 1 {
            return Self(vec![&self.0[0] * &o.0[0]]);
        }
        let f = field.f_coeffs();
        let mut t = vec![BigInt::zero(); 2 * r - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                t[i + j] += a * b;
            }
        }
        for i in (r..2 * r - 1).rev() {
            let c = std::mem::take(&mut t[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..r {
                t[i - r + j] -= &c * f[j];
            }
        }
        t.truncate(r);
        Self(t)
    }

    pub fn reduce(&self, ring: &ResidueRing) -> RingElem {
        ring.from_bigints(&self.0)
    }

    /// Value under the embedding `θ ↦ root`.
    pub fn embed(&self, root: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            acc * root + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_unit_times_conjugate() {
        let k = NumberField::new(&[-2, 0, 1]).unwrap();
        let u = IntegralElem::from_coeffs(2, &[1, 1]);
        let v = IntegralElem::from_coeffs(2, &[-1, 1]);
        assert!(u.mul(&v, &k).is_one());
        let theta = IntegralElem::from_coeffs(2, &[0, 1]);
        assert_eq!(theta.mul(&theta, &k), IntegralElem::from_int(2, 2));
    }
}
