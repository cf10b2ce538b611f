use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use super::embed::CMat;
use super::ArchimedeanError;

pub type CVec = DVector<Complex64>;

/// Relative eigenvalue-modulus gap required for proximality.
pub const PROXIMALITY_GAP: f64 = 1e-6;
/// Condition numbers above this are rejected.
pub const CONDITION_CAP: f64 = 1e12;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Basis of `sl_d`: the `E_ij` (`i ≠ j`, row-major), then `E_kk - E_{k+1,k+1}`.
pub fn sl_basis(d: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(d * d - 1);
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let mut e = CMat::zeros(d, d);
                e[(i, j)] = c(1.0);
                out.push(e);
            }
        }
    }
    for k in 0..d.saturating_sub(1) {
        let mut h = CMat::zeros(d, d);
        h[(k, k)] = c(1.0);
        h[(k + 1, k + 1)] = c(-1.0);
        out.push(h);
    }
    out
}

/// Coordinates of a traceless matrix in [`sl_basis`].
pub fn sl_coords(v: &CMat) -> CVec {
    let d = v.nrows();
    let mut out = Vec::with_capacity(d * d - 1);
    for i in 0..d {
        for j in 0..d {
            if i != j {
                out.push(v[(i, j)]);
            }
        }
    }
    let mut acc = c(0.0);
    for k in 0..d.saturating_sub(1) {
        acc += v[(k, k)];
        out.push(acc);
    }
    CVec::from_vec(out)
}

/// Matrix of `v ↦ g v g⁻¹` on `sl_d` in the basis [`sl_basis`].
pub fn adjoint(g: &CMat) -> Result<CMat, ArchimedeanError> {
    let d = g.nrows();
    let det = g.determinant();
    if (det - c(1.0)).norm() > 1e-8 * g.norm().powi(d as i32).max(1.0) {
        return Err(ArchimedeanError::PrecisionLoss("determinant is not 1"));
    }
    let g_inv = g
        .clone()
        .try_inverse()
        .ok_or(ArchimedeanError::PrecisionLoss("singular matrix"))?;
    Ok(adjoint_with_inverse(g, &g_inv))
}

/// [`adjoint`] with a known inverse.
pub fn adjoint_with_inverse(g: &CMat, g_inv: &CMat) -> CMat {
    let basis = sl_basis(g.nrows());
    let n = basis.len();
    let mut out = CMat::zeros(n, n);
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, &sl_coords(&(g * b * g_inv)));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ProximalityReport {
    pub lambda_top: f64,
    pub lambda_second: f64,
    /// `λ_second / λ_top`.
    pub ratio: f64,
    pub proximal: bool,
    /// Top eigenvector, unit length; present when proximal.
    #[serde(skip)]
    pub z: Option<CVec>,
    /// Orthonormal basis of the invariant complement `V_T`, as columns.
    #[serde(skip)]
    pub v: Option<CMat>,
    pub complement_dim: usize,
}

fn singular_sorted(m: &CMat) -> (Vec<f64>, CMat, CMat) {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested");
    let v_t = svd.v_t.expect("requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let values = idx.iter().map(|&i| svd.singular_values[i]).collect();
    let u = CMat::from_fn(u.nrows(), idx.len(), |r, k| u[(r, idx[k])]);
    // right singular vectors as columns
    let v = CMat::from_fn(v_t.ncols(), idx.len(), |r, k| v_t[(idx[k], r)].conj());
    (values, u, v)
}

/// `σ_max / σ_min`.
pub fn condition_number(t: &CMat) -> f64 {
    let s = t.singular_values();
    let max = s.iter().copied().fold(0.0, f64::max);
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}

/// Eigenvalues sorted by decreasing modulus.
pub fn eigenvalues(t: &CMat) -> Result<Vec<Complex64>, ArchimedeanError> {
    let mut ev: Vec<Complex64> = t
        .clone()
        .schur()
        .eigenvalues()
        .ok_or(ArchimedeanError::PrecisionLoss("Schur form did not converge"))?
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    Ok(ev)
}

/// Proximality test: a unique simple eigenvalue of maximal modulus. When it
/// holds, `z_T` spans `ker(T - λ)` and `V_T = im(T - λ)`.
pub fn proximality(t: &CMat) -> Result<ProximalityReport, ArchimedeanError> {
    let n = t.nrows();
    if n == 0 || t.ncols() != n {
        return Err(ArchimedeanError::Shape);
    }
    if condition_number(t) > CONDITION_CAP {
        return Err(ArchimedeanError::IllConditioned);
    }
    let ev = eigenvalues(t)?;
    let top = ev[0];
    let lambda_top = top.norm();
    let lambda_second = ev.get(1).map_or(0.0, |x| x.norm());
    let proximal = lambda_top - lambda_second > PROXIMALITY_GAP * lambda_top;
    let (z, v) = if proximal {
        let shifted = t - CMat::identity(n, n) * top;
        let (_, u, right) = singular_sorted(&shifted);
        let z = right.column(n - 1).into_owned();
        let v = u.columns(0, n - 1).into_owned();
        (Some(z), Some(v))
    } else {
        (None, None)
    };
    Ok(ProximalityReport {
        lambda_top,
        lambda_second,
        ratio: lambda_second / lambda_top,
        proximal,
        z,
        v,
        complement_dim: if proximal { n - 1 } else { 0 },
    })
}

/// `d(x̄, ȳ) = ‖x ∧ y‖ / (‖x‖‖y‖)`.
pub fn projective_distance(x: &CVec, y: &CVec) -> Result<f64, ArchimedeanError> {
    let (nx, ny) = (x.norm(), y.norm());
    if nx == 0.0 || ny == 0.0 {
        return Err(ArchimedeanError::ZeroVector);
    }
    let cos = x.dotc(y).norm() / (nx * ny);
    Ok((1.0 - cos * cos).max(0.0).sqrt())
}

/// Projective distance from `x̄` to the subspace spanned by the orthonormal
/// columns of `q`.
pub fn distance_to_subspace(x: &CVec, q: &CMat) -> Result<f64, ArchimedeanError> {
    let nx = x.norm();
    if nx == 0.0 {
        return Err(ArchimedeanError::ZeroVector);
    }
    let proj = q * (q.adjoint() * x);
    Ok((x - proj).norm() / nx)
}

/// Orthonormal basis of the column span of `m` (numerical rank at `tol`).
pub fn orthonormal_span(m: &CMat, tol: f64) -> CMat {
    let (values, u, _) = singular_sorted(m);
    let top = values.first().copied().unwrap_or(0.0);
    let rank = values.iter().filter(|&&s| s > tol * top.max(1e-300)).count();
    u.columns(0, rank).into_owned()
}
