use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::WalkError;
use crate::groups::{GroupElem, GroupSpec};
use crate::Real;

/// Default cap on `|supp μ|·|supp ν|` for one convolution.
pub const DEFAULT_BUDGET: u128 = 1 << 32;

/// Left-support chunk per rayon task; fixed so float sums are schedule independent.
const CHUNK: usize = 512;

/// Weights of a measure: exact big-integer counts or floats.
pub trait Weight: Clone + PartialEq + Debug + Send + Sync + 'static {
    /// Type of `weight / denominator`.
    type Ratio: Clone + Debug + PartialOrd + Send + Sync;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_count(n: u64) -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, o: &Self);
    fn mul(&self, o: &Self) -> Self;
    fn ratio(num: &Self, den: &Self) -> Self::Ratio;
    fn ratio_f64(r: &Self::Ratio) -> f64;
    fn ratio_zero() -> Self::Ratio;
    fn ratio_add(a: &Self::Ratio, b: &Self::Ratio) -> Self::Ratio;
}

impl Weight for BigUint {
    type Ratio = BigRational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_count(n: u64) -> Self {
        BigUint::from(n)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn ratio(num: &Self, den: &Self) -> BigRational {
        BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
    }
    fn ratio_f64(r: &BigRational) -> f64 {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn ratio_zero() -> BigRational {
        BigRational::zero()
    }
    fn ratio_add(a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
}

impl<T: Real> Weight for T {
    type Ratio = T;

    fn zero() -> Self {
        T::zero()
    }
    fn one() -> Self {
        T::one()
    }
    fn from_count(n: u64) -> Self {
        T::lit(n as f64)
    }
    fn is_zero(&self) -> bool {
        *self == T::zero()
    }
    fn add_assign(&mut self, o: &Self) {
        *self += *o;
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn ratio(num: &Self, den: &Self) -> T {
        *num / *den
    }
    fn ratio_f64(r: &T) -> f64 {
        r.as_f64()
    }
    fn ratio_zero() -> T {
        T::zero()
    }
    fn ratio_add(a: &T, b: &T) -> T {
        *a + *b
    }
}

/// Nonnegative measure `g ↦ weight(g) / denominator` with finite support.
/// Exact and float measures are distinct types, so they cannot be mixed
/// without an explicit [`to_float`](WalkMeasure::to_float).
#[derive(Debug, Clone)]
pub struct WalkMeasure<W: Weight> {
    spec: GroupSpec,
    /// Sorted by element, zero weights removed.
    support: Vec<(GroupElem, W)>,
    denom: W,
}

pub type ExactMeasure = WalkMeasure<BigUint>;
pub type FloatMeasure = WalkMeasure<f64>;

impl<W: Weight> WalkMeasure<W> {
    /// Measure from raw weights; repeated elements are summed.
    pub fn from_weights(
        spec: &GroupSpec,
        weights: impl IntoIterator<Item = (GroupElem, W)>,
        denom: W,
    ) -> Self {
        let mut map: HashMap<GroupElem, W> = HashMap::new();
        for (g, w) in weights {
            map.entry(g).or_insert_with(W::zero).add_assign(&w);
        }
        Self::from_map(spec, map, denom)
    }

    fn from_map(spec: &GroupSpec, map: HashMap<GroupElem, W>, denom: W) -> Self {
        let mut support: Vec<(GroupElem, W)> = map.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        support.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Self {
            spec: spec.clone(),
            support,
            denom,
        }
    }

    pub fn point(spec: &GroupSpec, g: &GroupElem) -> Self {
        Self::from_weights(spec, [(g.clone(), W::one())], W::one())
    }

    /// `χ_S` for a multiset `S` (the uniform measure when `S` has no repeats).
    pub fn from_multiset(spec: &GroupSpec, s: &[GroupElem]) -> Self {
        Self::from_weights(
            spec,
            s.iter().map(|g| (g.clone(), W::one())),
            W::from_count(s.len() as u64),
        )
    }

    /// Uniform measure on a set (repeats ignored).
    pub fn uniform(spec: &GroupSpec, elems: &[GroupElem]) -> Self {
        let mut v = elems.to_vec();
        v.sort_unstable();
        v.dedup();
        Self::from_multiset(spec, &v)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn denominator(&self) -> &W {
        &self.denom
    }

    pub fn support(&self) -> &[(GroupElem, W)] {
        &self.support
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    pub fn weight(&self, g: &GroupElem) -> W {
        match self.support.binary_search_by(|(x, _)| x.cmp(g)) {
            Ok(i) => self.support[i].1.clone(),
            Err(_) => W::zero(),
        }
    }

    pub fn get(&self, g: &GroupElem) -> W::Ratio {
        W::ratio(&self.weight(g), &self.denom)
    }

    pub fn get_f64(&self, g: &GroupElem) -> f64 {
        W::ratio_f64(&self.get(g))
    }

    pub fn mass(&self) -> W::Ratio {
        let mut total = W::zero();
        for (_, w) in &self.support {
            total.add_assign(w);
        }
        W::ratio(&total, &self.denom)
    }

    /// `Σ_{g ∈ X} μ(g)` for a predicate `X`.
    pub fn mass_where(&self, pred: impl Fn(&GroupElem) -> bool) -> W::Ratio {
        let mut total = W::zero();
        for (g, w) in &self.support {
            if pred(g) {
                total.add_assign(w);
            }
        }
        W::ratio(&total, &self.denom)
    }

    /// `‖μ‖₂²`.
    pub fn l2_squared(&self) -> W::Ratio {
        let (num, den) = self.l2_squared_parts();
        W::ratio(&num, &den)
    }

    /// `‖μ‖₂² = num/den` with `den = denominator²`.
    pub fn l2_squared_parts(&self) -> (W, W) {
        let mut total = W::zero();
        for (_, w) in &self.support {
            total.add_assign(&w.mul(w));
        }
        (total, self.denom.mul(&self.denom))
    }

    pub fn l2_f64(&self) -> f64 {
        W::ratio_f64(&self.l2_squared()).sqrt()
    }

    pub fn linf(&self) -> W::Ratio {
        let mut best = W::ratio_zero();
        for (_, w) in &self.support {
            let r = W::ratio(w, &self.denom);
            if r > best {
                best = r;
            }
        }
        best
    }

    /// Probabilities as `f64`, in support order.
    pub fn probabilities(&self) -> Vec<f64> {
        self.support
            .iter()
            .map(|(_, w)| W::ratio_f64(&W::ratio(w, &self.denom)))
            .collect()
    }

    /// `μ̃(g) = μ(g⁻¹)`.
    pub fn reflect(&self) -> Self {
        Self::from_weights(
            &self.spec,
            self.support.iter().map(|(g, w)| (self.spec.inv(g), w.clone())),
            self.denom.clone(),
        )
    }

    /// `(μ ∗ ν)(g) = Σ_h μ(g h⁻¹) ν(h)`: the pair `(a, b)` contributes to `ab`.
    pub fn convolve(&self, other: &Self, budget: u128) -> Result<Self, WalkError> {
        if !self.spec.compatible(&other.spec) {
            return Err(WalkError::GroupMismatch);
        }
        let work = self.support.len() as u128 * other.support.len() as u128;
        if work > budget {
            return Err(WalkError::BudgetExceeded { work, budget });
        }
        let partials: Vec<HashMap<GroupElem, W>> = self
            .support
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut map: HashMap<GroupElem, W> = HashMap::new();
                for (a, wa) in chunk {
                    for (b, wb) in &other.support {
                        map.entry(self.spec.mul(a, b))
                            .or_insert_with(W::zero)
                            .add_assign(&wa.mul(wb));
                    }
                }
                map
            })
            .collect();
        // merge in chunk order so float sums do not depend on the schedule
        let mut merged: HashMap<GroupElem, W> = HashMap::new();
        for part in partials {
            let mut entries: Vec<(GroupElem, W)> = part.into_iter().collect();
            entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            for (g, w) in entries {
                merged.entry(g).or_insert_with(W::zero).add_assign(&w);
            }
        }
        Ok(Self::from_map(&self.spec, merged, self.denom.mul(&other.denom)))
    }

    /// `χ_S^{(k)}`: weights count length-`k` words in `S` over `|S|^k`.
    pub fn walk_power(
        spec: &GroupSpec,
        s: &[GroupElem],
        k: usize,
        budget: u128,
    ) -> Result<Self, WalkError> {
        if s.is_empty() {
            return Err(WalkError::EmptySet);
        }
        let step = Self::from_multiset(spec, s);
        let mut mu = Self::point(spec, &spec.identity());
        for _ in 0..k {
            mu = mu.convolve(&step, budget)?;
        }
        Ok(mu)
    }

    /// Lines `encoding weight_num/weight_den`, encoding in hex.
    pub fn snapshot(&self) -> String
    where
        W: std::fmt::Display,
    {
        let mut out = String::new();
        for (g, w) in &self.support {
            out.push_str(&format!("{} {}/{}\n", self.spec.encode_hex(g), w, self.denom));
        }
        out
    }
}

impl ExactMeasure {
    /// Explicit cast to floating weights (probabilities, denominator 1).
    pub fn to_float<T: Real>(&self) -> WalkMeasure<T> {
        let den = BigRational::from_integer(BigInt::from(self.denom.clone()));
        WalkMeasure {
            spec: self.spec.clone(),
            support: self
                .support
                .iter()
                .map(|(g, w)| {
                    let r = BigRational::from_integer(BigInt::from(w.clone())) / &den;
                    (g.clone(), T::lit(r.to_f64().unwrap_or(f64::NAN)))
                })
                .collect(),
            denom: T::one(),
        }
    }
}
