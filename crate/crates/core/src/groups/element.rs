use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::GroupError;
use crate::algebra::{FieldProduct, FiniteField, ResidueRing, RingElem};

/// Default cap on exhaustive enumerations.
pub const DEFAULT_ENUMERATION_CAP: u128 = 100_000;

/// Brute-force scans over all `s^{d^2}` matrices are used up to this many candidates.
const BRUTE_FORCE_LIMIT: u128 = 20_000_000;

/// `d × d` matrix of determinant one, stored in CRT form: row-major entries,
/// each entry the concatenation of its components in the factor fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem {
    data: Box<[u64]>,
}

impl GroupElem {
    pub fn raw(&self) -> &[u64] {
        &self.data
    }

    pub(crate) fn from_raw(data: Vec<u64>) -> Self {
        Self {
            data: data.into_boxed_slice(),
        }
    }
}

/// `SL_d` over a product of finite fields, usually the CRT form of `O_K/(q)`.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    ring: Arc<FieldProduct>,
    residue: Option<Arc<ResidueRing>>,
    d: usize,
    order: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub d: usize,
    pub order: String,
    pub factors: Vec<(u64, usize)>,
}

/// `|SL_d(F_s)| = s^{d(d-1)/2} ∏_{i=2..d} (s^i - 1)`.
pub fn sl_order(s: u64, d: usize) -> Option<u128> {
    let s = s as u128;
    let mut acc = s.checked_pow((d * (d - 1) / 2) as u32)?;
    for i in 2..=d {
        acc = acc.checked_mul(s.checked_pow(i as u32)? - 1)?;
    }
    Some(acc)
}

impl GroupSpec {
    pub fn new(ring: Arc<ResidueRing>, d: usize) -> Result<Self, GroupError> {
        let product = FieldProduct::of_ring(&ring);
        let mut spec = Self::over_product(product, d)?;
        spec.residue = Some(ring);
        Ok(spec)
    }

    pub fn over_product(ring: FieldProduct, d: usize) -> Result<Self, GroupError> {
        if d == 0 {
            return Err(GroupError::DimensionZero);
        }
        let mut order: u128 = 1;
        for f in ring.fields() {
            let o = sl_order(f.order(), d).ok_or(GroupError::Overflow)?;
            order = order.checked_mul(o).ok_or(GroupError::Overflow)?;
        }
        Ok(Self {
            ring: Arc::new(ring),
            residue: None,
            d,
            order,
        })
    }

    pub fn over_field(field: FiniteField, d: usize) -> Result<Self, GroupError> {
        Self::over_product(FieldProduct::single(field), d)
    }

    /// `SL_d(Z/qZ)` for square-free `q`.
    pub fn over_integers_mod(q: u64, d: usize) -> Result<Self, GroupError> {
        let ring = ResidueRing::new(crate::algebra::NumberField::rationals(), q)?;
        Self::new(Arc::new(ring), d)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn ring(&self) -> &FieldProduct {
        &self.ring
    }

    pub fn residue_ring(&self) -> Option<&Arc<ResidueRing>> {
        self.residue.as_ref()
    }

    pub fn num_factors(&self) -> usize {
        self.ring.len()
    }

    pub fn factor_order(&self, i: usize) -> u128 {
        sl_order(self.ring.fields()[i].order(), self.d).expect("checked at construction")
    }

    pub fn summary(&self) -> GroupSummary {
        GroupSummary {
            d: self.d,
            order: self.order.to_string(),
            factors: self
                .ring
                .fields()
                .iter()
                .map(|f| (f.characteristic(), f.degree()))
                .collect(),
        }
    }

    /// True when both groups act on the same ring layout and dimension.
    pub fn compatible(&self, other: &GroupSpec) -> bool {
        self.d == other.d && self.ring == other.ring
    }

    fn entry_width(&self) -> usize {
        self.ring.width()
    }

    fn elem_len(&self) -> usize {
        self.d * self.d * self.entry_width()
    }

    pub fn check_elem(&self, g: &GroupElem) -> Result<(), GroupError> {
        if g.data.len() != self.elem_len() {
            return Err(GroupError::RingMismatch);
        }
        Ok(())
    }

    pub fn entry<'a>(&self, g: &'a GroupElem, i: usize, j: usize) -> &'a [u64] {
        let w = self.entry_width();
        let o = (i * self.d + j) * w;
        &g.data[o..o + w]
    }

    pub fn identity(&self) -> GroupElem {
        let w = self.entry_width();
        let mut data = vec![0u64; self.elem_len()];
        let one = self.ring.one();
        for i in 0..self.d {
            let o = (i * self.d + i) * w;
            data[o..o + w].copy_from_slice(&one);
        }
        GroupElem::from_raw(data)
    }

    pub fn is_identity(&self, g: &GroupElem) -> bool {
        *g == self.identity()
    }

    /// Scalar matrix `c·I` (not checked for determinant one).
    fn scalar(&self, c: &[u64]) -> GroupElem {
        let w = self.entry_width();
        let mut data = vec![0u64; self.elem_len()];
        for i in 0..self.d {
            let o = (i * self.d + i) * w;
            data[o..o + w].copy_from_slice(c);
        }
        GroupElem::from_raw(data)
    }

    /// `-I`, which lies in `SL_d` only for even `d` or characteristic 2.
    pub fn minus_identity(&self) -> Option<GroupElem> {
        let g = self.scalar(&self.ring.from_int(-1));
        self.is_special(&g).then_some(g)
    }

    /// Builds an element from CRT-form entries, checking `det = 1`.
    pub fn from_crt_entries(&self, entries: &[Vec<u64>]) -> Result<GroupElem, GroupError> {
        if entries.len() != self.d * self.d
            || entries.iter().any(|e| e.len() != self.entry_width())
        {
            return Err(GroupError::RingMismatch);
        }
        let g = GroupElem::from_raw(entries.concat());
        if !self.is_special(&g) {
            return Err(GroupError::NotInSL);
        }
        Ok(g)
    }

    /// Builds an element from ring entries in coefficient form.
    pub fn from_ring_entries(&self, entries: &[RingElem]) -> Result<GroupElem, GroupError> {
        let ring = self.residue.as_ref().ok_or(GroupError::RingMismatch)?;
        if entries.iter().any(|e| e.0.len() != ring.rank()) {
            return Err(GroupError::RingMismatch);
        }
        let crt: Vec<Vec<u64>> = entries.iter().map(|e| self.ring.split(ring, e)).collect();
        self.from_crt_entries(&crt)
    }

    /// Builds an element from integer coefficient vectors (reduced mod each factor).
    pub fn from_int_entries(&self, entries: &[Vec<i64>]) -> Result<GroupElem, GroupError> {
        match &self.residue {
            Some(ring) => {
                let elems: Vec<RingElem> = entries.iter().map(|c| ring.from_coeffs(c)).collect();
                self.from_ring_entries(&elems)
            }
            None => {
                // each component field: reduce coefficients mod p, then mod g
                let crt: Vec<Vec<u64>> = entries
                    .iter()
                    .map(|c| {
                        let mut out = self.ring.zero();
                        for (i, f) in self.ring.fields().iter().enumerate() {
                            let p = f.characteristic();
                            let red = crate::algebra::fpoly::reduce(c, p);
                            let mut r = crate::algebra::fpoly::rem(&red, f.modulus(), p);
                            r.resize(f.degree(), 0);
                            let o = self.ring.offset(i);
                            out[o..o + f.degree()].copy_from_slice(&r);
                        }
                        out
                    })
                    .collect();
                self.from_crt_entries(&crt)
            }
        }
    }

    /// Convenience for `SL_2` over `Z/q` or a prime field: entries as integers.
    pub fn mat2(&self, a: i64, b: i64, c: i64, d: i64) -> Result<GroupElem, GroupError> {
        self.from_int_entries(&[vec![a], vec![b], vec![c], vec![d]])
    }

    /// Entries in coefficient form (requires a residue ring).
    pub fn ring_entries(&self, g: &GroupElem) -> Option<Vec<RingElem>> {
        let ring = self.residue.as_ref()?;
        Some(
            (0..self.d * self.d)
                .map(|e| self.ring.join(ring, self.entry(g, e / self.d, e % self.d)))
                .collect(),
        )
    }

    /// Canonical byte encoding: row-major entries, each entry its coefficient
    /// vector (least non-negative residues) as little-endian `u64`s. Without a
    /// residue ring the CRT-form components are used.
    pub fn encode(&self, g: &GroupElem) -> Vec<u8> {
        let coeffs: Vec<u64> = match self.ring_entries(g) {
            Some(entries) => entries.into_iter().flat_map(|e| e.0).collect(),
            None => g.data.to_vec(),
        };
        coeffs.iter().flat_map(|c| c.to_le_bytes()).collect()
    }

    pub fn encode_hex(&self, g: &GroupElem) -> String {
        self.encode(g).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Text form: entries separated by `;`, each entry `c0,c1,...`.
    pub fn format(&self, g: &GroupElem) -> String {
        match self.ring_entries(g) {
            Some(entries) => entries
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(";"),
            None => (0..self.d * self.d)
                .map(|e| {
                    self.entry(g, e / self.d, e % self.d)
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect::<Vec<_>>()
                .join(";"),
        }
    }

    pub fn mul(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        let mut out = vec![0u64; self.elem_len()];
        self.mul_raw(&a.data, &b.data, &mut out);
        let g = GroupElem::from_raw(out);
        debug_assert!(self.is_special(&g));
        g
    }

    pub fn try_mul(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem, GroupError> {
        self.check_elem(a)?;
        self.check_elem(b)?;
        Ok(self.mul(a, b))
    }

    fn mul_raw(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let d = self.d;
        let w = self.entry_width();
        for (c, f) in self.ring.fields().iter().enumerate() {
            let o = self.ring.offset(c);
            let k = f.degree();
            if k == 1 {
                let p = f.characteristic() as u128;
                for i in 0..d {
                    for j in 0..d {
                        let mut acc: u128 = 0;
                        for l in 0..d {
                            acc += a[(i * d + l) * w + o] as u128 * b[(l * d + j) * w + o] as u128;
                            if l % 8 == 7 {
                                acc %= p;
                            }
                        }
                        out[(i * d + j) * w + o] = (acc % p) as u64;
                    }
                }
            } else {
                let mut prod = [0u64; crate::algebra::MAX_K];
                let mut sum = [0u64; crate::algebra::MAX_K];
                for i in 0..d {
                    for j in 0..d {
                        sum[..k].fill(0);
                        for l in 0..d {
                            let x = &a[(i * d + l) * w + o..(i * d + l) * w + o + k];
                            let y = &b[(l * d + j) * w + o..(l * d + j) * w + o + k];
                            f.mul_into(x, y, &mut prod[..k]);
                            let s = sum;
                            f.add_into(&s[..k], &prod[..k], &mut sum[..k]);
                        }
                        out[(i * d + j) * w + o..(i * d + j) * w + o + k].copy_from_slice(&sum[..k]);
                    }
                }
            }
        }
    }

    /// Matrix over one component field, as a `d × d` table of coefficient vectors.
    fn component_matrix(&self, g: &[u64], c: usize) -> Vec<Vec<Vec<u64>>> {
        let d = self.d;
        let w = self.entry_width();
        let o = self.ring.offset(c);
        let k = self.ring.fields()[c].degree();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| g[(i * d + j) * w + o..(i * d + j) * w + o + k].to_vec())
                    .collect()
            })
            .collect()
    }

    /// Determinant in CRT form.
    pub fn det(&self, g: &GroupElem) -> Vec<u64> {
        let mut out = self.ring.zero();
        for (c, f) in self.ring.fields().iter().enumerate() {
            let mut m = self.component_matrix(&g.data, c);
            let det = field_det(f, &mut m);
            let o = self.ring.offset(c);
            out[o..o + f.degree()].copy_from_slice(&det);
        }
        out
    }

    pub fn is_special(&self, g: &GroupElem) -> bool {
        g.data.len() == self.elem_len() && self.ring.is_one(&self.det(g))
    }

    pub fn inv(&self, g: &GroupElem) -> GroupElem {
        let d = self.d;
        let w = self.entry_width();
        let mut out = vec![0u64; self.elem_len()];
        for (c, f) in self.ring.fields().iter().enumerate() {
            let o = self.ring.offset(c);
            let k = f.degree();
            let m = self.component_matrix(&g.data, c);
            let inv = if d == 2 {
                vec![
                    vec![m[1][1].clone(), f.neg(&m[0][1])],
                    vec![f.neg(&m[1][0]), m[0][0].clone()],
                ]
            } else {
                field_inverse(f, m).expect("determinant one")
            };
            for i in 0..d {
                for j in 0..d {
                    out[(i * d + j) * w + o..(i * d + j) * w + o + k].copy_from_slice(&inv[i][j]);
                }
            }
        }
        GroupElem::from_raw(out)
    }

    pub fn try_inv(&self, g: &GroupElem) -> Result<GroupElem, GroupError> {
        self.check_elem(g)?;
        Ok(self.inv(g))
    }

    pub fn pow(&self, g: &GroupElem, n: i64) -> GroupElem {
        let base = if n < 0 { self.inv(g) } else { g.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn commutes(&self, a: &GroupElem, b: &GroupElem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Order of `g` (smallest `n ≥ 1` with `g^n = 1`), searched up to `limit`.
    pub fn element_order(&self, g: &GroupElem, limit: u64) -> Option<u64> {
        let id = self.identity();
        let mut x = g.clone();
        for n in 1..=limit {
            if x == id {
                return Some(n);
            }
            x = self.mul(&x, g);
        }
        None
    }

    /// Group over the selected CRT components, in the given order.
    pub fn projection_target(&self, positions: &[usize]) -> Result<GroupSpec, GroupError> {
        if positions.is_empty() {
            return Err(GroupError::FactorMismatch);
        }
        let mut seen = vec![false; self.num_factors()];
        for &p in positions {
            if p >= self.num_factors() || seen[p] {
                return Err(GroupError::FactorMismatch);
            }
            seen[p] = true;
        }
        GroupSpec::over_product(self.ring.select(positions), self.d)
    }

    /// Entrywise CRT projection onto `target` (built by [`projection_target`](Self::projection_target)).
    pub fn project_into(&self, g: &GroupElem, positions: &[usize], target: &GroupSpec) -> GroupElem {
        let w = self.entry_width();
        let tw = target.entry_width();
        let mut out = vec![0u64; target.elem_len()];
        for e in 0..self.d * self.d {
            for (t, &pos) in positions.iter().enumerate() {
                let k = self.ring.fields()[pos].degree();
                let src = e * w + self.ring.offset(pos);
                let dst = e * tw + target.ring.offset(t);
                out[dst..dst + k].copy_from_slice(&g.data[src..src + k]);
            }
        }
        GroupElem::from_raw(out)
    }

    pub fn project(
        &self,
        g: &GroupElem,
        positions: &[usize],
    ) -> Result<(GroupSpec, GroupElem), GroupError> {
        self.check_elem(g)?;
        let target = self.projection_target(positions)?;
        let h = self.project_into(g, positions, &target);
        Ok((target, h))
    }

    /// `SL_d` of the `i`-th CRT factor.
    pub fn factor_group(&self, i: usize) -> Result<GroupSpec, GroupError> {
        self.projection_target(&[i])
    }

    /// Reassembles an element from its per-factor projections.
    pub fn combine(&self, parts: &[&GroupElem]) -> GroupElem {
        let w = self.entry_width();
        let mut out = vec![0u64; self.elem_len()];
        for e in 0..self.d * self.d {
            for (c, part) in parts.iter().enumerate() {
                let k = self.ring.fields()[c].degree();
                let dst = e * w + self.ring.offset(c);
                out[dst..dst + k].copy_from_slice(&part.data[e * k..e * k + k]);
            }
        }
        GroupElem::from_raw(out)
    }

    /// Every element, sorted canonically. Fails beyond `cap`.
    pub fn enumerate(&self, cap: u128) -> Result<Vec<GroupElem>, GroupError> {
        if self.order > cap {
            return Err(GroupError::TooLarge {
                size: self.order,
                cap,
            });
        }
        let per_factor: Vec<Vec<GroupElem>> = (0..self.num_factors())
            .map(|i| {
                let fg = self.factor_group(i)?;
                Ok(enumerate_field_group(&fg))
            })
            .collect::<Result<_, GroupError>>()?;
        let mut out = Vec::with_capacity(self.order as usize);
        let mut idx = vec![0usize; per_factor.len()];
        loop {
            let parts: Vec<&GroupElem> = idx.iter().enumerate().map(|(c, &i)| &per_factor[c][i]).collect();
            out.push(self.combine(&parts));
            let mut c = 0;
            loop {
                if c == idx.len() {
                    out.sort_unstable();
                    return Ok(out);
                }
                idx[c] += 1;
                if idx[c] < per_factor[c].len() {
                    break;
                }
                idx[c] = 0;
                c += 1;
            }
        }
    }
}

impl fmt::Display for GroupSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, k)| if *k == 1 { format!("F_{p}") } else { format!("F_{p}^{k}") })
            .collect();
        write!(f, "SL_{}({}) of order {}", self.d, parts.join(" x "), self.order)
    }
}

/// Determinant over a field by Gaussian elimination (destroys `m`).
fn field_det(f: &FiniteField, m: &mut [Vec<Vec<u64>>]) -> Vec<u64> {
    let n = m.len();
    let mut det = f.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !f.is_zero(&m[r][col])) else {
            return f.zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = f.neg(&det);
        }
        det = f.mul(&det, &m[col][col]);
        let inv = f.inv(&m[col][col]).expect("nonzero pivot");
        for r in col + 1..n {
            if f.is_zero(&m[r][col]) {
                continue;
            }
            let factor = f.mul(&m[r][col], &inv);
            for c in col..n {
                let t = f.mul(&factor, &m[col][c]);
                m[r][c] = f.sub(&m[r][c], &t);
            }
        }
    }
    det
}

/// Gauss–Jordan inverse over a field.
fn field_inverse(f: &FiniteField, mut m: Vec<Vec<Vec<u64>>>) -> Option<Vec<Vec<Vec<u64>>>> {
    let n = m.len();
    let mut inv: Vec<Vec<Vec<u64>>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !f.is_zero(&m[r][col]))?;
        m.swap(piv, col);
        inv.swap(piv, col);
        let pinv = f.inv(&m[col][col])?;
        for c in 0..n {
            m[col][c] = f.mul(&m[col][c], &pinv);
            inv[col][c] = f.mul(&inv[col][c], &pinv);
        }
        for r in 0..n {
            if r == col || f.is_zero(&m[r][col]) {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..n {
                let t = f.mul(&factor, &m[col][c]);
                m[r][c] = f.sub(&m[r][c], &t);
                let t = f.mul(&factor, &inv[col][c]);
                inv[r][c] = f.sub(&inv[r][c], &t);
            }
        }
    }
    Some(inv)
}

/// All of `SL_d(F)` for a single-field group.
fn enumerate_field_group(spec: &GroupSpec) -> Vec<GroupElem> {
    let f = &spec.ring.fields()[0];
    let d = spec.d;
    let s = f.order();
    if d == 1 {
        return vec![spec.identity()];
    }
    if d == 2 {
        let mut out = Vec::with_capacity(spec.order as usize);
        let one = f.one();
        for ai in 0..s {
            let a = f.element_at(ai);
            for bi in 0..s {
                let b = f.element_at(bi);
                if !f.is_zero(&a) {
                    let ainv = f.inv(&a).unwrap();
                    for ci in 0..s {
                        let c = f.element_at(ci);
                        // d = (1 + b c) / a
                        let dd = f.mul(&f.add(&one, &f.mul(&b, &c)), &ainv);
                        out.push(GroupElem::from_raw(
                            [a.clone(), b.clone(), c, dd].concat(),
                        ));
                    }
                } else if !f.is_zero(&b) {
                    // a = 0: -b c = 1
                    let c = f.neg(&f.inv(&b).unwrap());
                    for di in 0..s {
                        let dd = f.element_at(di);
                        out.push(GroupElem::from_raw(
                            [a.clone(), b.clone(), c.clone(), dd].concat(),
                        ));
                    }
                }
            }
        }
        return out;
    }
    let candidates = (s as u128).checked_pow((d * d) as u32);
    if candidates.is_some_and(|c| c <= BRUTE_FORCE_LIMIT) {
        let total = candidates.unwrap() as u64;
        let k = f.degree();
        let mut out = Vec::with_capacity(spec.order as usize);
        for mut idx in 0..total {
            let mut data = Vec::with_capacity(d * d * k);
            for _ in 0..d * d {
                data.extend(f.element_at(idx % s));
                idx /= s;
            }
            let g = GroupElem::from_raw(data);
            if spec.is_special(&g) {
                out.push(g);
            }
        }
        return out;
    }
    // elementary transvections generate SL_d over a field
    let mut gens = Vec::new();
    let mut basis = f.one();
    for _ in 0..f.degree() {
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    let mut data = spec.identity().data.to_vec();
                    let k = f.degree();
                    data[(i * d + j) * k..(i * d + j) * k + k].copy_from_slice(&basis);
                    gens.push(GroupElem::from_raw(data));
                }
            }
        }
        basis = f.mul(&basis, &f.generator());
    }
    super::subgroup::bfs_closure(spec, &gens, u128::MAX).expect("uncapped closure")
}
