use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::exact::{ExactGroup, IntMat};
use super::ArchimedeanError;
use crate::algebra::{IntegralElem, NumberField};

pub type CMat = DMatrix<Complex64>;

/// Default working precision in decimal digits.
pub const DEFAULT_PRECISION: u32 = 12;

/// The complex embeddings `σ_1, …, σ_r` of `K`, as roots of `f`.
#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingSet {
    #[serde(serialize_with = "ser_roots")]
    pub roots: Vec<Complex64>,
    pub precision: u32,
}

fn ser_roots<S: serde::Serializer>(roots: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(roots.len()))?;
    for z in roots {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

fn eval(f: &[i64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &c in f.iter().rev() {
        dv = dv * z + v;
        v = v * z + Complex64::new(c as f64, 0.0);
    }
    (v, dv)
}

/// Roots of `f` from the companion matrix, polished by Newton steps, ordered
/// by decreasing real part, then decreasing imaginary part.
pub fn embed(field: &NumberField, precision: u32) -> Result<EmbeddingSet, ArchimedeanError> {
    let f = field.f_coeffs();
    let r = field.degree();
    let companion = DMatrix::<f64>::from_fn(r, r, |i, j| {
        if j == r - 1 {
            -(f[i] as f64)
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<Complex64> = companion.complex_eigenvalues().iter().copied().collect();
    for z in &mut roots {
        for _ in 0..8 {
            let (v, dv) = eval(f, *z);
            if dv.norm() == 0.0 {
                break;
            }
            *z -= v / dv;
        }
    }
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    let tol = 10f64.powi(-(precision as i32 - 4));
    let scale = f.iter().map(|c| c.unsigned_abs() as f64).fold(1.0, f64::max);
    if roots.iter().any(|z| eval(f, *z).0.norm() > tol * scale) {
        return Err(ArchimedeanError::PrecisionLoss("root refinement failed"));
    }
    for (i, a) in roots.iter().enumerate() {
        if roots[..i].iter().any(|b| (a - b).norm() < tol) {
            return Err(ArchimedeanError::PrecisionLoss("roots not separated"));
        }
    }
    Ok(EmbeddingSet { roots, precision })
}

impl EmbeddingSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn eval(&self, x: &IntegralElem, i: usize) -> Complex64 {
        x.embed(self.roots[i])
    }

    /// `σ_i(g)` as a complex matrix.
    pub fn sigma(&self, group: &ExactGroup, g: &IntMat, i: usize) -> Result<CMat, ArchimedeanError> {
        let d = group.dim();
        let m = CMat::from_fn(d, d, |r, c| self.eval(group.entry(g, r, c), i));
        let det = m.determinant();
        let scale = m.norm().powi(d as i32).max(1.0);
        if (det - Complex64::new(1.0, 0.0)).norm() > 1e-10 * scale {
            return Err(ArchimedeanError::PrecisionLoss("determinant drifted from 1"));
        }
        Ok(m)
    }

    /// `σ̂(g) = (σ_1(g), …, σ_r(g))`.
    pub fn hat_sigma(&self, group: &ExactGroup, g: &IntMat) -> Result<Vec<CMat>, ArchimedeanError> {
        (0..self.len()).map(|i| self.sigma(group, g, i)).collect()
    }
}
