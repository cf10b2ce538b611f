use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::finite_field::{FiniteField, FqElem};
use super::fpoly;
use super::integers::{add_mod, factorize, inv_mod, is_prime, mul_mod, sub_mod};
use super::zpoly;
use super::AlgebraError;

/// `K = Q[x]/(f)` with `O_K` modelled as `Z[θ]`, basis `1, θ, …, θ^{r-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumberField {
    f_coeffs: Vec<i64>,
    degree: usize,
    #[serde(serialize_with = "ser_bigint")]
    discriminant: BigInt,
}

fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl NumberField {
    /// Builds the field defined by a monic polynomial, coefficients ascending.
    pub fn new(f_coeffs: &[i64]) -> Result<Self, AlgebraError> {
        let mut f = f_coeffs.to_vec();
        while f.len() > 1 && f.last() == Some(&0) {
            f.pop();
        }
        if f.len() < 2 {
            return Err(AlgebraError::NotMonic);
        }
        if *f.last().unwrap() != 1 {
            return Err(AlgebraError::NotMonic);
        }
        let degree = f.len() - 1;
        if degree > fpoly::MAX_FACTOR_DEGREE {
            return Err(AlgebraError::UnsupportedDegree(degree));
        }
        if let Some(witness) = zpoly::find_factor(&f) {
            return Err(AlgebraError::Reducible(witness));
        }
        let discriminant = zpoly::discriminant(&f);
        if discriminant.is_zero() {
            return Err(AlgebraError::ZeroDiscriminant);
        }
        Ok(Self {
            f_coeffs: f,
            degree,
            discriminant,
        })
    }

    /// `K = Q`, defined by `f = x`.
    pub fn rationals() -> Self {
        Self::new(&[0, 1]).expect("x is irreducible")
    }

    pub fn f_coeffs(&self) -> &[i64] {
        &self.f_coeffs
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    fn disc_divisible_by(&self, p: u64) -> bool {
        self.discriminant.is_multiple_of(&BigInt::from(p))
    }
}

/// One CRT factor of `O_K/(q)`: the field `F_p[x]/(g)`, `k = deg g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrtFactor {
    pub p: u64,
    pub g: Vec<u64>,
    pub k: usize,
    #[serde(skip)]
    pub field: FiniteField,
}

#[derive(Debug, Clone)]
struct PrimeBlock {
    p: u64,
    /// Indices into the factor list.
    factors: Vec<usize>,
    /// Idempotents `e_i` of `F_p[x]/(f)` for each factor, reduced mod `f`.
    idempotents: Vec<Vec<u64>>,
    /// `(q/p) * ((q/p)^{-1} mod p)` for integer CRT.
    crt_coeff: u64,
}

/// `O_K/(q)` for square-free `q` coprime to the discriminant.
#[derive(Debug, Clone)]
pub struct ResidueRing {
    field: NumberField,
    q: u64,
    f_mod_q: Vec<u64>,
    factors: Vec<CrtFactor>,
    blocks: Vec<PrimeBlock>,
}

/// Element of a [`ResidueRing`]: coefficient vector of length `r` in `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem(pub Vec<u64>);

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Inv,
}

/// JSON ring descriptor `{"f":[...],"q":n,"factors":[[p,[g-coeffs]],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub f: Vec<i64>,
    pub q: u64,
    pub factors: Vec<(u64, Vec<u64>)>,
}

impl ResidueRing {
    pub fn new(field: NumberField, q: u64) -> Result<Self, AlgebraError> {
        if q < 2 {
            return Err(AlgebraError::NotSquareFree(q));
        }
        let fac = factorize(q);
        if fac.iter().any(|&(_, e)| e > 1) {
            return Err(AlgebraError::NotSquareFree(q));
        }
        let primes: Vec<u64> = fac.iter().map(|&(p, _)| p).collect();
        if primes.iter().product::<u64>() != q || !primes.iter().all(|&p| is_prime(p)) {
            return Err(AlgebraError::CompositePrimeDetected(q));
        }
        if let Some(&p) = primes.iter().find(|&&p| field.disc_divisible_by(p)) {
            return Err(AlgebraError::RamifiedPrime(p));
        }

        let f = field.f_coeffs().to_vec();
        let f_mod_q: Vec<u64> = f.iter().map(|&c| c.rem_euclid(q as i64) as u64).collect();
        let mut factors = Vec::new();
        let mut blocks = Vec::new();
        for &p in &primes {
            let fp = fpoly::reduce(&f, p);
            let gs = fpoly::factor_squarefree(&fp, p)
                .ok_or(AlgebraError::UnsupportedDegree(field.degree()))?;
            let prod = gs.iter().fold(vec![1u64], |acc, g| fpoly::mul(&acc, g, p));
            if prod != fp {
                return Err(AlgebraError::FactorizationInconsistent(p));
            }
            let mut idx = Vec::new();
            let mut idempotents = Vec::new();
            for g in &gs {
                let cofactor = fpoly::divrem(&fp, g, p).0;
                let (_, s, _) = fpoly::ext_gcd(&fpoly::rem(&cofactor, g, p), g, p);
                let e = fpoly::mulmod(&cofactor, &s, &fp, p);
                idempotents.push(e);
                idx.push(factors.len());
                factors.push(CrtFactor {
                    p,
                    g: g.clone(),
                    k: g.len() - 1,
                    field: FiniteField::new(p, g)?,
                });
            }
            let m = q / p;
            let crt_coeff = mul_mod(m % q, inv_mod(m % p, p).unwrap_or(1) % q, q);
            blocks.push(PrimeBlock {
                p,
                factors: idx,
                idempotents,
                crt_coeff,
            });
        }
        Ok(Self {
            field,
            q,
            f_mod_q,
            factors,
            blocks,
        })
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn rank(&self) -> usize {
        self.field.degree()
    }

    pub fn primes(&self) -> Vec<u64> {
        self.blocks.iter().map(|b| b.p).collect()
    }

    pub fn crt_factors(&self) -> &[CrtFactor] {
        &self.factors
    }

    /// `|O_K/(q)| = q^r`, also the ideal norm `N((q))`.
    pub fn cardinality(&self) -> u128 {
        (self.q as u128).pow(self.rank() as u32)
    }

    pub fn norm(&self) -> u128 {
        self.cardinality()
    }

    pub fn descriptor(&self) -> RingDescriptor {
        RingDescriptor {
            f: self.field.f_coeffs().to_vec(),
            q: self.q,
            factors: self.factors.iter().map(|c| (c.p, c.g.clone())).collect(),
        }
    }

    pub fn zero(&self) -> RingElem {
        RingElem(vec![0; self.rank()])
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> RingElem {
        let mut v = vec![0; self.rank()];
        v[0] = n.rem_euclid(self.q as i64) as u64;
        RingElem(v)
    }

    /// Reduces an integer coefficient vector (length `r`) modulo `q`.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> RingElem {
        let mut v = vec![0; self.rank()];
        for (i, &c) in coeffs.iter().enumerate().take(self.rank()) {
            v[i] = c.rem_euclid(self.q as i64) as u64;
        }
        RingElem(v)
    }

    pub fn from_bigints(&self, coeffs: &[BigInt]) -> RingElem {
        let q = BigInt::from(self.q);
        let mut v = vec![0; self.rank()];
        for (i, c) in coeffs.iter().enumerate().take(self.rank()) {
            v[i] = zpoly::abs_u64(&c.mod_floor(&q)).expect("residue fits in u64");
        }
        RingElem(v)
    }

    /// `θ`, the class of `x`.
    pub fn theta(&self) -> RingElem {
        let mut v = vec![0; self.rank()];
        if self.rank() > 1 {
            v[1] = 1;
            RingElem(v)
        } else {
            // f = x + c: θ = -c
            self.from_int(-self.field.f_coeffs()[0])
        }
    }

    pub fn parse(&self, s: &str) -> Result<RingElem, AlgebraError> {
        let coeffs: Result<Vec<i64>, _> = s.split(',').map(|t| t.trim().parse::<i64>()).collect();
        let coeffs = coeffs.map_err(|e| AlgebraError::Parse(format!("{s:?}: {e}")))?;
        if coeffs.len() > self.rank() {
            return Err(AlgebraError::Parse(format!(
                "{s:?}: expected at most {} coefficients",
                self.rank()
            )));
        }
        Ok(self.from_coeffs(&coeffs))
    }

    pub fn add(&self, x: &RingElem, y: &RingElem) -> RingElem {
        RingElem(
            x.0.iter()
                .zip(&y.0)
                .map(|(&a, &b)| add_mod(a, b, self.q))
                .collect(),
        )
    }

    pub fn sub(&self, x: &RingElem, y: &RingElem) -> RingElem {
        RingElem(
            x.0.iter()
                .zip(&y.0)
                .map(|(&a, &b)| sub_mod(a, b, self.q))
                .collect(),
        )
    }

    pub fn neg(&self, x: &RingElem) -> RingElem {
        self.sub(&self.zero(), x)
    }

    /// Polynomial product reduced modulo `(q, f)`.
    pub fn mul(&self, x: &RingElem, y: &RingElem) -> RingElem {
        let r = self.rank();
        let q = self.q;
        if r == 1 {
            return RingElem(vec![mul_mod(x.0[0], y.0[0], q)]);
        }
        let mut t = vec![0u64; 2 * r - 1];
        for i in 0..r {
            for j in 0..r {
                t[i + j] = add_mod(t[i + j], mul_mod(x.0[i], y.0[j], q), q);
            }
        }
        for i in (r..2 * r - 1).rev() {
            let c = t[i];
            if c == 0 {
                continue;
            }
            t[i] = 0;
            for j in 0..r {
                t[i - r + j] = sub_mod(t[i - r + j], mul_mod(c, self.f_mod_q[j], q), q);
            }
        }
        t.truncate(r);
        RingElem(t)
    }

    pub fn is_unit(&self, x: &RingElem) -> bool {
        self.crt_split(x)
            .iter()
            .all(|part| !part.coeffs.iter().all(|&c| c == 0))
    }

    /// Inverse through the CRT factors.
    pub fn inv(&self, x: &RingElem) -> Result<RingElem, AlgebraError> {
        let parts = self.crt_split(x);
        let inv_parts: Option<Vec<FqElem>> = parts
            .iter()
            .map(|part| {
                let fld = &self.factors[part.factor].field;
                fld.inv(&part.coeffs).map(|c| fld.elem(part.factor, c))
            })
            .collect();
        let inv_parts = inv_parts.ok_or(AlgebraError::NotAUnit)?;
        self.crt_join(&inv_parts)
    }

    pub fn arith(
        &self,
        op: RingOp,
        x: &RingElem,
        y: Option<&RingElem>,
    ) -> Result<RingElem, AlgebraError> {
        let need = |y: Option<&RingElem>| y.cloned().ok_or(AlgebraError::MissingOperand);
        Ok(match op {
            RingOp::Add => self.add(x, &need(y)?),
            RingOp::Sub => self.sub(x, &need(y)?),
            RingOp::Mul => self.mul(x, &need(y)?),
            RingOp::Inv => self.inv(x)?,
        })
    }

    /// Images in every CRT factor `F_p[x]/(g)`.
    pub fn crt_split(&self, x: &RingElem) -> Vec<FqElem> {
        self.factors
            .iter()
            .enumerate()
            .map(|(i, fac)| {
                let reduced: Vec<u64> = x.0.iter().map(|&c| c % fac.p).collect();
                let mut coeffs = fpoly::rem(&reduced, &fac.g, fac.p);
                coeffs.resize(fac.k, 0);
                FqElem { factor: i, coeffs }
            })
            .collect()
    }

    /// Inverse of [`crt_split`](Self::crt_split); `parts` must name every factor once.
    pub fn crt_join(&self, parts: &[FqElem]) -> Result<RingElem, AlgebraError> {
        let mut slot: Vec<Option<&FqElem>> = vec![None; self.factors.len()];
        for part in parts {
            let fac = self
                .factors
                .get(part.factor)
                .ok_or(AlgebraError::FactorMismatch)?;
            if slot[part.factor].is_some() || part.coeffs.len() != fac.k {
                return Err(AlgebraError::FactorMismatch);
            }
            if part.coeffs.iter().any(|&c| c >= fac.p) {
                return Err(AlgebraError::FactorMismatch);
            }
            slot[part.factor] = Some(part);
        }
        if slot.iter().any(|s| s.is_none()) {
            return Err(AlgebraError::FactorMismatch);
        }
        let slot: Vec<&FqElem> = slot.into_iter().map(|s| s.unwrap()).collect();
        Ok(self.join_slices(|i| &slot[i].coeffs))
    }

    pub(crate) fn join_slices<'a>(&self, part: impl Fn(usize) -> &'a [u64]) -> RingElem {
        let r = self.rank();
        let q = self.q;
        let mut out = vec![0u64; r];
        for block in &self.blocks {
            let p = block.p;
            let fp = fpoly::reduce(self.field.f_coeffs(), p);
            let mut acc: Vec<u64> = Vec::new();
            for (&fi, e) in block.factors.iter().zip(&block.idempotents) {
                let term = fpoly::mul(e, part(fi), p);
                acc = fpoly::add(&acc, &term, p);
            }
            let acc = fpoly::rem(&acc, &fp, p);
            for (i, o) in out.iter_mut().enumerate() {
                let c = acc.get(i).copied().unwrap_or(0);
                *o = add_mod(*o, mul_mod(c, block.crt_coeff, q), q);
            }
        }
        RingElem(out)
    }
}
