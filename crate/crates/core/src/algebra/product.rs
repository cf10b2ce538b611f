use serde::Serialize;

use super::finite_field::FiniteField;
use super::residue::{ResidueRing, RingElem};

/// A finite product of finite fields, elements stored as concatenated
/// coefficient vectors. This is the CRT form of `O_K/(q)` and of any
/// sub-collection of its factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FieldProduct {
    fields: Vec<FiniteField>,
    offsets: Vec<usize>,
    width: usize,
    /// Original CRT factor index of each component.
    labels: Vec<usize>,
}

impl FieldProduct {
    pub fn new(fields: Vec<FiniteField>, labels: Vec<usize>) -> Self {
        assert_eq!(fields.len(), labels.len());
        let mut offsets = Vec::with_capacity(fields.len());
        let mut width = 0;
        for f in &fields {
            offsets.push(width);
            width += f.degree();
        }
        Self {
            fields,
            offsets,
            width,
            labels,
        }
    }

    pub fn single(field: FiniteField) -> Self {
        Self::new(vec![field], vec![0])
    }

    pub fn of_ring(ring: &ResidueRing) -> Self {
        let fields = ring.crt_factors().iter().map(|c| c.field.clone()).collect();
        Self::new(fields, (0..ring.crt_factors().len()).collect())
    }

    /// Sub-product on the listed component positions (in the given order).
    pub fn select(&self, positions: &[usize]) -> Self {
        Self::new(
            positions.iter().map(|&i| self.fields[i].clone()).collect(),
            positions.iter().map(|&i| self.labels[i]).collect(),
        )
    }

    pub fn fields(&self) -> &[FiniteField] {
        &self.fields
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn cardinality(&self) -> u128 {
        self.fields.iter().map(|f| f.order() as u128).product()
    }

    pub fn component<'a>(&self, x: &'a [u64], i: usize) -> &'a [u64] {
        &x[self.offsets[i]..self.offsets[i] + self.fields[i].degree()]
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.width]
    }

    pub fn one(&self) -> Vec<u64> {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Vec<u64> {
        let mut v = vec![0; self.width];
        for (f, &o) in self.fields.iter().zip(&self.offsets) {
            v[o] = n.rem_euclid(f.characteristic() as i64) as u64;
        }
        v
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        x.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, x: &[u64]) -> bool {
        x == self.one().as_slice()
    }

    /// A unit has every component nonzero.
    pub fn is_unit(&self, x: &[u64]) -> bool {
        (0..self.len()).all(|i| !self.fields[i].is_zero(self.component(x, i)))
    }

    pub fn add_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for (f, &o) in self.fields.iter().zip(&self.offsets) {
            let k = f.degree();
            f.add_into(&a[o..o + k], &b[o..o + k], &mut out[o..o + k]);
        }
    }

    pub fn sub_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for (f, &o) in self.fields.iter().zip(&self.offsets) {
            let k = f.degree();
            f.sub_into(&a[o..o + k], &b[o..o + k], &mut out[o..o + k]);
        }
    }

    pub fn neg_into(&self, a: &[u64], out: &mut [u64]) {
        for (f, &o) in self.fields.iter().zip(&self.offsets) {
            let k = f.degree();
            f.neg_into(&a[o..o + k], &mut out[o..o + k]);
        }
    }

    pub fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for (f, &o) in self.fields.iter().zip(&self.offsets) {
            let k = f.degree();
            f.mul_into(&a[o..o + k], &b[o..o + k], &mut out[o..o + k]);
        }
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = self.zero();
        self.mul_into(a, b, &mut out);
        out
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

    pub fn inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        let mut out = self.zero();
        for (i, (f, &o)) in self.fields.iter().zip(&self.offsets).enumerate() {
            let k = f.degree();
            let c = f.inv(self.component(a, i))?;
            out[o..o + k].copy_from_slice(&c);
        }
        Some(out)
    }

    /// CRT form of a ring element (requires `self` to be the full product of `ring`).
    pub fn split(&self, ring: &ResidueRing, x: &RingElem) -> Vec<u64> {
        let mut out = self.zero();
        for part in ring.crt_split(x) {
            let pos = self
                .labels
                .iter()
                .position(|&l| l == part.factor)
                .expect("factor present");
            let o = self.offsets[pos];
            out[o..o + part.coeffs.len()].copy_from_slice(&part.coeffs);
        }
        out
    }

    /// Coefficient form of a CRT-form element of the full product of `ring`.
    pub fn join(&self, ring: &ResidueRing, x: &[u64]) -> RingElem {
        ring.join_slices(|factor| {
            let pos = self
                .labels
                .iter()
                .position(|&l| l == factor)
                .expect("factor present");
            self.component(x, pos)
        })
    }
}
