use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::{CayleyOperator, SpectralError};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Dense,
    Iterative,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Dense => "dense",
            Method::Iterative => "iterative",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IterativeOptions<T> {
    pub max_iterations: usize,
    pub tolerance: T,
    pub seed: u64,
    /// Krylov basis width per restart cycle.
    pub krylov: usize,
}

impl<T: Real> Default for IterativeOptions<T> {
    fn default() -> Self {
        // f32 cannot reach 1e-9 residuals; use a few hundred ulps instead
        let floor = T::default_epsilon() * T::lit(256.0);
        Self {
            max_iterations: 100_000,
            tolerance: T::lit(1e-9).max(floor),
            seed: 0,
            krylov: 60,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport<T> {
    pub lambda1: T,
    pub lambda2: T,
    pub gap: T,
    pub method: Method,
    pub residual: T,
    pub iterations: usize,
    pub disconnected: bool,
}

/// All eigenvalues of `M`, in descending order.
pub fn dense_spectrum<T: Real>(op: &CayleyOperator<T>) -> Result<Vec<T>, SpectralError> {
    let m = op.to_dense()?;
    let mut ev: Vec<T> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    Ok(ev)
}

pub fn spectrum_top2<T: Real>(
    op: &CayleyOperator<T>,
    method: Method,
    opts: &IterativeOptions<T>,
) -> Result<SpectrumReport<T>, SpectralError> {
    match method {
        Method::Dense => {
            let ev = dense_spectrum(op)?;
            let lambda1 = ev[0];
            let lambda2 = if ev.len() > 1 { ev[1] } else { ev[0] };
            Ok(SpectrumReport {
                lambda1,
                lambda2,
                gap: T::one() - lambda2,
                method,
                residual: T::zero(),
                iterations: 0,
                disconnected: op.components() > 1,
            })
        }
        Method::Iterative => lanczos_deflated(op, opts),
    }
}

/// Below this length vector kernels run on one thread.
const PAR_MIN: usize = 4096;

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.par_iter()
        .with_min_len(PAR_MIN)
        .zip(b.par_iter().with_min_len(PAR_MIN))
        .map(|(&x, &y)| x * y)
        .reduce(T::zero, |x, y| x + y)
}

fn axpy<T: Real>(y: &mut [T], a: T, x: &[T]) {
    y.par_iter_mut()
        .with_min_len(PAR_MIN)
        .zip(x.par_iter().with_min_len(PAR_MIN))
        .for_each(|(y, &x)| *y += a * x);
}

fn scale<T: Real>(v: &mut [T], a: T) {
    v.par_iter_mut().with_min_len(PAR_MIN).for_each(|x| *x *= a);
}

fn project_out_constant<T: Real>(v: &mut [T]) {
    let mean = v.iter().fold(T::zero(), |acc, &x| acc + x) / T::lit(v.len() as f64);
    v.par_iter_mut().with_min_len(PAR_MIN).for_each(|x| *x -= mean);
}

fn residual_norm<T: Real>(op: &CayleyOperator<T>, u: &[T], lambda: T, scratch: &mut [T]) -> T {
    op.apply(u, scratch);
    axpy(scratch, -lambda, u);
    dot(scratch, scratch).sqrt()
}

/// Thick-restart Lanczos on the complement of the constant vector. The basis
/// is fully reorthogonalized and `Q^T M Q` is formed explicitly from the stored
/// images `M q_j`, which stays correct when the three-term relation degrades.
/// A restart keeps the leading third of the Ritz vectors and expands from the
/// residual of the top one; plain power iteration (or a single-vector restart)
/// stalls when `λ2` has a close neighbour. The largest Ritz value of the
/// deflated operator is `λ2`, accepted on its true residual `‖M u - λ u‖₂`.
fn lanczos_deflated<T: Real>(
    op: &CayleyOperator<T>,
    opts: &IterativeOptions<T>,
) -> Result<SpectrumReport<T>, SpectralError> {
    let n = op.n();
    let report = |lambda2: T, residual: T, iterations: usize, disconnected: bool| SpectrumReport {
        lambda1: T::one(),
        lambda2,
        gap: T::one() - lambda2,
        method: Method::Iterative,
        residual,
        iterations,
        disconnected,
    };
    if op.components() > 1 {
        // a second component carries another locally constant eigenvector
        return Ok(report(T::one(), T::zero(), 0, true));
    }
    if n < 2 {
        return Ok(report(T::one(), T::zero(), 0, false));
    }
    let width = opts.krylov.clamp(2, n - 1);
    let keep = (width / 3).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<T> = (0..n).map(|_| T::lit(rng.gen::<f64>() - 0.5)).collect();
    project_out_constant(&mut start);
    let norm = dot(&start, &start).sqrt();
    scale(&mut start, T::one() / norm);
    let mut basis: Vec<Vec<T>> = vec![start];
    let mut images: Vec<Vec<T>> = Vec::with_capacity(width);
    let mut scratch = vec![T::zero(); n];
    let mut matvecs = 0;
    let mut residual;
    loop {
        let before = matvecs;
        loop {
            while images.len() < basis.len() && matvecs < opts.max_iterations {
                let mut mq = vec![T::zero(); n];
                op.apply(&basis[images.len()], &mut mq);
                matvecs += 1;
                images.push(mq);
            }
            if images.len() < basis.len() || basis.len() == width {
                break;
            }
            // the newest basis vector is the one being refined
            let mut w = images.last().expect("nonempty").clone();
            for _pass in 0..2 {
                project_out_constant(&mut w);
                for q in &basis {
                    let c = dot(q, &w);
                    axpy(&mut w, -c, q);
                }
            }
            let b = dot(&w, &w).sqrt();
            // exhausted Krylov space; a noisy direction would be harmless
            // under explicit Rayleigh–Ritz, a zero one is not
            if b <= T::default_epsilon() * T::lit(64.0) {
                break;
            }
            scale(&mut w, T::one() / b);
            project_out_constant(&mut w);
            basis.push(w);
        }
        basis.truncate(images.len());
        let k = basis.len();
        let h = DMatrix::<T>::from_fn(k, k, |i, j| {
            (dot(&basis[i], &images[j]) + dot(&basis[j], &images[i])) * T::lit(0.5)
        });
        let eig = h.symmetric_eigen();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[y].partial_cmp(&eig.eigenvalues[x]).expect("finite"));
        let combine = |vs: &[Vec<T>], c: usize| {
            let mut out = vec![T::zero(); n];
            for (i, v) in vs.iter().enumerate() {
                axpy(&mut out, eig.eigenvectors[(i, c)], v);
            }
            out
        };
        let lambda = eig.eigenvalues[order[0]];
        let u = combine(&basis, order[0]);
        let mut r = combine(&images, order[0]);
        axpy(&mut r, -lambda, &u);
        if dot(&r, &r).sqrt() <= opts.tolerance {
            residual = residual_norm(op, &u, lambda, &mut scratch);
            matvecs += 1;
            if residual <= opts.tolerance {
                return Ok(report(lambda, residual, matvecs, false));
            }
        } else {
            residual = dot(&r, &r).sqrt();
        }
        if matvecs >= opts.max_iterations || matvecs == before {
            break;
        }
        // thick restart, top Ritz vector last so expansion continues from it
        let kept: Vec<usize> = order.iter().take(keep.min(k)).rev().copied().collect();
        let new_basis: Vec<Vec<T>> = kept.iter().map(|&c| combine(&basis, c)).collect();
        let new_images: Vec<Vec<T>> = kept.iter().map(|&c| combine(&images, c)).collect();
        basis = new_basis;
        images = new_images;
    }
    Err(SpectralError::NoConvergence {
        iterations: matvecs,
        residual: residual.as_f64(),
    })
}
