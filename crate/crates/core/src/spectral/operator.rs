use std::collections::{HashMap, VecDeque};

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::SpectralError;
use crate::groups::{GroupElem, GroupSpec};
use crate::Real;

/// Largest vertex count for which a dense matrix is formed.
pub const DENSE_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum OperatorMode {
    Dense,
    MatrixFree,
}

/// `f ↦ χ_S ∗ f`, i.e. `(Mf)(x) = |S|⁻¹ Σ_s f(s x)`, on a regular graph given by
/// its neighbour table.
#[derive(Debug, Clone)]
pub struct CayleyOperator<T> {
    n: usize,
    degree: usize,
    /// Row `x` holds `s_1 x, …, s_{|S|} x` as vertex indices.
    neighbors: Vec<u32>,
    dense: Option<DMatrix<T>>,
    mode: OperatorMode,
}

fn is_symmetric_multiset(spec: &GroupSpec, gens: &[GroupElem]) -> bool {
    let mut a = gens.to_vec();
    let mut b: Vec<GroupElem> = gens.iter().map(|g| spec.inv(g)).collect();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

impl<T: Real> CayleyOperator<T> {
    /// Cayley operator of `spec` with the generator multiset `gens`.
    pub fn build(
        spec: &GroupSpec,
        gens: &[GroupElem],
        mode: OperatorMode,
        cap: u128,
    ) -> Result<Self, SpectralError> {
        if gens.is_empty() {
            return Err(SpectralError::EmptyGenerators);
        }
        for g in gens {
            spec.check_elem(g)?;
        }
        if !is_symmetric_multiset(spec, gens) {
            return Err(SpectralError::NotSymmetric);
        }
        if mode == OperatorMode::Dense && spec.order() > DENSE_CAP as u128 {
            return Err(SpectralError::TooLargeForDense(spec.order()));
        }
        let elements = spec.enumerate(cap)?;
        let index: HashMap<&GroupElem, u32> =
            elements.iter().enumerate().map(|(i, g)| (g, i as u32)).collect();
        let neighbors: Vec<u32> = elements
            .par_iter()
            .flat_map_iter(|x| gens.iter().map(|s| index[&spec.mul(s, x)]).collect::<Vec<_>>())
            .collect();
        Self::assemble(elements.len(), gens.len(), neighbors, mode)
    }

    /// Operator from an explicit table: `rows[x]` lists the neighbours of `x`
    /// with multiplicity; all rows must have the same length.
    pub fn from_table(rows: &[Vec<usize>], mode: OperatorMode) -> Result<Self, SpectralError> {
        let degree = rows.first().map_or(0, |r| r.len());
        if degree == 0 {
            return Err(SpectralError::EmptyGenerators);
        }
        if rows.iter().any(|r| r.len() != degree || r.iter().any(|&y| y >= rows.len())) {
            return Err(SpectralError::NotSymmetric);
        }
        let mut balance: HashMap<(usize, usize), i64> = HashMap::new();
        for (x, row) in rows.iter().enumerate() {
            for &y in row {
                *balance.entry((x.min(y), x.max(y))).or_default() += if x <= y { 1 } else { -1 };
            }
        }
        // loops count once in each direction, so only x ≠ y must balance
        if balance.iter().any(|(&(x, y), &c)| x != y && c != 0) {
            return Err(SpectralError::NotSymmetric);
        }
        if mode == OperatorMode::Dense && rows.len() > DENSE_CAP {
            return Err(SpectralError::TooLargeForDense(rows.len() as u128));
        }
        let neighbors = rows.iter().flatten().map(|&y| y as u32).collect();
        Self::assemble(rows.len(), degree, neighbors, mode)
    }

    fn assemble(
        n: usize,
        degree: usize,
        neighbors: Vec<u32>,
        mode: OperatorMode,
    ) -> Result<Self, SpectralError> {
        let mut op = Self {
            n,
            degree,
            neighbors,
            dense: None,
            mode,
        };
        if mode == OperatorMode::Dense {
            op.dense = Some(op.to_dense()?);
        }
        Ok(op)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn mode(&self) -> OperatorMode {
        self.mode
    }

    pub fn neighbors(&self, x: usize) -> &[u32] {
        &self.neighbors[x * self.degree..(x + 1) * self.degree]
    }

    /// `M` as a dense matrix (symmetric, doubly stochastic).
    pub fn to_dense(&self) -> Result<DMatrix<T>, SpectralError> {
        if let Some(m) = &self.dense {
            return Ok(m.clone());
        }
        if self.n > DENSE_CAP {
            return Err(SpectralError::TooLargeForDense(self.n as u128));
        }
        let w = T::one() / T::lit(self.degree as f64);
        let mut m = DMatrix::<T>::zeros(self.n, self.n);
        for x in 0..self.n {
            for &y in self.neighbors(x) {
                m[(x, y as usize)] += w;
            }
        }
        Ok(m)
    }

    pub fn apply(&self, v: &[T], out: &mut [T]) {
        let w = T::one() / T::lit(self.degree as f64);
        out.par_iter_mut().enumerate().for_each(|(x, o)| {
            let mut acc = T::zero();
            for &y in self.neighbors(x) {
                acc += v[y as usize];
            }
            *o = acc * w;
        });
    }

    /// Number of connected components of the underlying graph.
    pub fn components(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in self.neighbors(x) {
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        queue.push_back(y as usize);
                    }
                }
            }
        }
        count
    }
}
