use nalgebra::{Complex, DMatrix};

use super::SpectralError;
use crate::algebra::integers::{inv_mod, least_nonresidue};
use crate::groups::{GroupElem, GroupSpec};
use crate::Real;

/// Nontrivial spectrum of `M` on `SL_2(F_p)`, `p` an odd prime, without
/// forming the `|G|×|G|` matrix.
///
/// Every nontrivial irreducible representation of `SL_2(F_p)` occurs in one of
/// the two Gelfand–Graev representations `Ind_U^G ψ_a` (`U` upper unipotent,
/// `ψ_a(t) = e^{2πi a t/p}`, `a` a square or a non-square). Each has dimension
/// `p² - 1`, so the union of their `|S|⁻¹ Σ_s π(s)` spectra is the spectrum of
/// `M` on the complement of the constants, up to multiplicity.
/// Returned in descending order.
pub fn sl2_nontrivial_spectrum<T: Real>(
    spec: &GroupSpec,
    s: &[GroupElem],
) -> Result<Vec<T>, SpectralError> {
    if s.is_empty() {
        return Err(SpectralError::EmptyGenerators);
    }
    let fields = spec.ring().fields();
    if spec.dim() != 2 || fields.len() != 1 || fields[0].degree() != 1 || fields[0].characteristic() == 2 {
        return Err(SpectralError::Unsupported("SL_2 over an odd prime field"));
    }
    let p = fields[0].characteristic();
    let n = (p * p - 1) as usize;
    let at = |g: &GroupElem, i: usize, j: usize| spec.entry(g, i, j)[0];
    // coset U g is labelled by the bottom row (c, d) of g
    let label = |c: u64, d: u64| (c * p + d - 1) as usize;
    let rep = |c: u64, d: u64| -> GroupElem {
        let m = if c != 0 {
            [0, p - inv_mod(c, p).expect("prime"), c, d]
        } else {
            [inv_mod(d, p).expect("prime"), 0, 0, d]
        };
        spec.mat2(m[0] as i64, m[1] as i64, m[2] as i64, m[3] as i64).expect("det 1")
    };
    let mut transitions: Vec<(usize, usize, u64)> = Vec::with_capacity(n * s.len());
    for c in 0..p {
        for d in 0..p {
            if c == 0 && d == 0 {
                continue;
            }
            let r = rep(c, d);
            for g in s {
                let x = spec.mul(&r, g);
                let (c2, d2) = (at(&x, 1, 0), at(&x, 1, 1));
                let u = spec.mul(&x, &spec.inv(&rep(c2, d2)));
                transitions.push((label(c, d), label(c2, d2), at(&u, 0, 1)));
            }
        }
    }
    let w = T::one() / T::lit(s.len() as f64);
    let mut out = Vec::with_capacity(2 * n);
    for a in [1, least_nonresidue(p)] {
        let mut m = DMatrix::<Complex<T>>::zeros(n, n);
        for &(i, j, t) in &transitions {
            let angle = T::two_pi() * T::lit(((a * t) % p) as f64 / p as f64);
            m[(i, j)] += Complex::new(angle.clone().cos() * w, angle.sin() * w);
        }
        out.extend(m.symmetric_eigenvalues().iter().copied());
    }
    out.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    Ok(out)
}
