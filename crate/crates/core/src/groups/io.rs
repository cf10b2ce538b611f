//! Generator-set files.
//!
//! ```text
//! # comment
//! 3,5;15;0,1        header: primes of q; q (0 = integral over O_K); coefficients of f
//! 1;1;0;1           one matrix per line, d² entries, each entry "c0,c1,..."
//! ```

use std::fmt;
use std::sync::Arc;

use super::{GroupElem, GroupError, GroupSpec};
use crate::algebra::{IntegralElem, NumberField, ResidueRing};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorFile {
    pub primes: Vec<u64>,
    pub q: u64,
    pub f: Vec<i64>,
    pub d: usize,
    /// Row-major entries, each a coefficient vector.
    pub matrices: Vec<Vec<Vec<i64>>>,
}

fn parse_ints<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, GroupError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| GroupError::Parse(format!("bad integer {t:?}")))
        })
        .collect()
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

impl GeneratorFile {
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap().trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| GroupError::Parse("missing header".into()))?;
        let parts: Vec<&str> = header.split(';').collect();
        if parts.len() != 3 {
            return Err(GroupError::Parse("header must be \"primes;q;f\"".into()));
        }
        let primes: Vec<u64> = parse_ints(parts[0])?;
        let q: u64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| GroupError::Parse(format!("bad modulus {:?}", parts[1])))?;
        let f: Vec<i64> = parse_ints(parts[2])?;
        if q != 0 && primes.iter().try_fold(1u64, |a, &p| a.checked_mul(p)) != Some(q) {
            return Err(GroupError::Parse("primes do not multiply to q".into()));
        }
        let mut matrices = Vec::new();
        let mut d = 0;
        for line in lines {
            let entries: Vec<Vec<i64>> = line.split(';').map(parse_ints).collect::<Result<_, _>>()?;
            let n = (entries.len() as f64).sqrt().round() as usize;
            if n * n != entries.len() || n == 0 {
                return Err(GroupError::Parse(format!("{} entries is not a square", entries.len())));
            }
            if d != 0 && n != d {
                return Err(GroupError::Parse("matrices of different sizes".into()));
            }
            d = n;
            matrices.push(entries);
        }
        Ok(Self {
            primes,
            q,
            f,
            d,
            matrices,
        })
    }

    pub fn number_field(&self) -> Result<NumberField, GroupError> {
        Ok(NumberField::new(&self.f)?)
    }

    pub fn is_integral(&self) -> bool {
        self.q == 0
    }

    pub fn group_spec(&self) -> Result<GroupSpec, GroupError> {
        if self.is_integral() {
            return Err(GroupError::Parse("integral file has no finite group".into()));
        }
        let ring = ResidueRing::new(self.number_field()?, self.q)?;
        GroupSpec::new(Arc::new(ring), self.d.max(1))
    }

    pub fn elements(&self, spec: &GroupSpec) -> Result<Vec<GroupElem>, GroupError> {
        self.matrices.iter().map(|m| spec.from_int_entries(m)).collect()
    }

    /// Entries as exact elements of `Z[θ]`.
    pub fn integral_matrices(&self) -> Vec<Vec<IntegralElem>> {
        let r = self.f.len().saturating_sub(1).max(1);
        self.matrices
            .iter()
            .map(|m| m.iter().map(|c| IntegralElem::from_coeffs(r, c)).collect())
            .collect()
    }
}

impl fmt::Display for GeneratorFile {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "{};{};{}", join(&self.primes), self.q, join(&self.f))?;
        for m in &self.matrices {
            let entries: Vec<String> = m.iter().map(|e| join(e)).collect();
            writeln!(out, "{}", entries.join(";"))?;
        }
        Ok(())
    }
}
