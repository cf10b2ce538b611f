use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::ArchimedeanError;
use crate::algebra::{IntegralElem, NumberField};

/// `d × d` matrix over `Z[θ]`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMat(pub Vec<IntegralElem>);

/// Exact arithmetic in `SL_d(Z[θ])`.
#[derive(Debug, Clone)]
pub struct ExactGroup {
    field: Arc<NumberField>,
    d: usize,
}

impl ExactGroup {
    pub fn new(field: NumberField, d: usize) -> Result<Self, ArchimedeanError> {
        if !(1..=4).contains(&d) {
            return Err(ArchimedeanError::Unsupported("d must be between 1 and 4"));
        }
        Ok(Self {
            field: Arc::new(field),
            d,
        })
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn rank(&self) -> usize {
        self.field.degree()
    }

    pub fn identity(&self) -> IntMat {
        let r = self.rank();
        IntMat(
            (0..self.d * self.d)
                .map(|i| IntegralElem::from_int(r, i64::from(i % (self.d + 1) == 0)))
                .collect(),
        )
    }

    /// Entries given as coefficient vectors on `1, θ, …`; must have determinant 1.
    pub fn from_coeffs(&self, entries: &[Vec<i64>]) -> Result<IntMat, ArchimedeanError> {
        if entries.len() != self.d * self.d || entries.iter().any(|c| c.len() > self.rank()) {
            return Err(ArchimedeanError::Shape);
        }
        let m = IntMat(entries.iter().map(|c| IntegralElem::from_coeffs(self.rank(), c)).collect());
        self.check(m)
    }

    /// `[[a, b], [c, d]]` with rational integer entries.
    pub fn mat2(&self, a: i64, b: i64, c: i64, d: i64) -> Result<IntMat, ArchimedeanError> {
        self.from_coeffs(&[vec![a], vec![b], vec![c], vec![d]])
    }

    pub fn check(&self, m: IntMat) -> Result<IntMat, ArchimedeanError> {
        if m.0.len() != self.d * self.d || m.0.iter().any(|e| e.0.len() != self.rank()) {
            return Err(ArchimedeanError::Shape);
        }
        if !self.det(&m).is_one() {
            return Err(ArchimedeanError::NotSpecial);
        }
        Ok(m)
    }

    pub fn entry<'a>(&self, m: &'a IntMat, i: usize, j: usize) -> &'a IntegralElem {
        &m.0[i * self.d + j]
    }

    pub fn mul(&self, a: &IntMat, b: &IntMat) -> IntMat {
        let d = self.d;
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = IntegralElem::zero(self.rank());
                for k in 0..d {
                    acc = acc.add(&a.0[i * d + k].mul(&b.0[k * d + j], &self.field));
                }
                out.push(acc);
            }
        }
        IntMat(out)
    }

    fn minor(&self, m: &[IntegralElem], n: usize) -> IntegralElem {
        if n == 1 {
            return m[0].clone();
        }
        let mut acc = IntegralElem::zero(self.rank());
        for j in 0..n {
            let sub: Vec<IntegralElem> = (1..n)
                .flat_map(|i| (0..n).filter(move |&c| c != j).map(move |c| (i, c)))
                .map(|(i, c)| m[i * n + c].clone())
                .collect();
            let term = m[j].mul(&self.minor(&sub, n - 1), &self.field);
            acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    pub fn det(&self, m: &IntMat) -> IntegralElem {
        self.minor(&m.0, self.d)
    }

    /// Inverse by the adjugate (determinant 1).
    pub fn inv(&self, m: &IntMat) -> IntMat {
        let d = self.d;
        if d == 1 {
            return m.clone();
        }
        let mut out = vec![IntegralElem::zero(self.rank()); d * d];
        for i in 0..d {
            for j in 0..d {
                let sub: Vec<IntegralElem> = (0..d)
                    .filter(|&r| r != i)
                    .flat_map(|r| (0..d).filter(move |&c| c != j).map(move |c| (r, c)))
                    .map(|(r, c)| m.0[r * d + c].clone())
                    .collect();
                let c = self.minor(&sub, d - 1);
                out[j * d + i] = if (i + j) % 2 == 0 { c } else { c.neg() };
            }
        }
        IntMat(out)
    }

    pub fn pow(&self, m: &IntMat, n: i64) -> IntMat {
        let base = if n < 0 { self.inv(m) } else { m.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    pub fn is_identity(&self, m: &IntMat) -> bool {
        *m == self.identity()
    }

    /// Largest absolute coefficient, a crude size measure.
    pub fn height(&self, m: &IntMat) -> BigInt {
        m.0.iter()
            .flat_map(|e| e.0.iter())
            .map(|c| if c < &BigInt::zero() { -c } else { c.clone() })
            .max()
            .unwrap_or_default()
    }
}
