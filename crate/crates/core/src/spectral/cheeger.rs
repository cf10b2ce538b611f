use serde::Serialize;

use super::{CayleyOperator, SpectralError};
use crate::Real;

/// Largest vertex count for the exhaustive scan.
pub const CHEEGER_MAX_VERTICES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheegerValue {
    pub value: f64,
    /// Boundary edges and size of a minimizing set.
    pub boundary: u64,
    pub size: u64,
}

/// `c(G) = min |∂X|/|X|` over `0 < |X| ≤ |V|/2`, by a Gray-code walk over all
/// subsets; edges are counted with multiplicity.
pub fn cheeger_exhaustive<T: Real>(op: &CayleyOperator<T>) -> Result<CheegerValue, SpectralError> {
    let n = op.n();
    if n > CHEEGER_MAX_VERTICES {
        return Err(SpectralError::TooLarge(n as u128));
    }
    let mut inside = vec![false; n];
    let mut boundary: i64 = 0;
    let mut size: u64 = 0;
    let mut best = CheegerValue {
        value: f64::INFINITY,
        boundary: 0,
        size: 0,
    };
    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        // adding v cuts its edges to the outside and heals those from inside;
        // the neighbour multiset is symmetric, so both are read off v's row
        let mut delta: i64 = 0;
        for &u in op.neighbors(v) {
            let u = u as usize;
            if u != v {
                delta += if inside[u] { -1 } else { 1 };
            }
        }
        if inside[v] {
            boundary -= delta;
            size -= 1;
        } else {
            boundary += delta;
            size += 1;
        }
        inside[v] = !inside[v];
        if size > 0 && 2 * size <= n as u64 {
            let cut = boundary as u64;
            // compare cut/size < best.boundary/best.size exactly
            if best.size == 0 || cut * best.size < best.boundary * size {
                best = CheegerValue {
                    value: cut as f64 / size as f64,
                    boundary: cut,
                    size,
                };
            }
        }
    }
    Ok(best)
}
