use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::embed::{CMat, EmbeddingSet};
use super::exact::{ExactGroup, IntMat};
use super::generic::{attractors, symmetrize, Attractor, PREDICATE_TOL};
use super::linalg::{adjoint, distance_to_subspace, projective_distance, CVec};
use super::ArchimedeanError;
use crate::walks::free::{alphabet, Letter};

#[derive(Debug, Clone)]
pub struct PowerUpOptions {
    pub m_max: u32,
    /// Reduced words up to this length are checked for distinctness.
    pub l_check: usize,
    /// Sample points per `Q_g`.
    pub samples: usize,
    pub seed: u64,
}

impl Default for PowerUpOptions {
    fn default() -> Self {
        Self {
            m_max: 64,
            l_check: 8,
            samples: 1000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeometricCertificate {
    /// `Q_g` is the complement of the `δ`-neighborhood of `V̄_g`.
    pub delta: f64,
    /// Radius of the target neighborhoods `U_g` around `z̄_g`.
    pub radius: f64,
    /// Smallest `d(z̄_{g'}, V̄_g)` over `g g' ≠ 1`.
    pub margin_i: f64,
    /// Largest `d(ρ(g^M) x̄, z̄_g)` over sampled `x̄ ∈ Q_g`; below `radius / 2`.
    pub max_image_distance: f64,
    /// Largest distance ratio over sampled pairs; below 1.
    pub max_contraction: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FreeCertificate {
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "L_check")]
    pub l_check: usize,
    pub words_checked: usize,
    pub free: bool,
    pub margins: Option<GeometricCertificate>,
    /// Why no geometric certificate was attempted, if none was.
    pub geometric_skipped: Option<String>,
    /// `S' = {g^M}` (inverses implied).
    #[serde(skip)]
    pub powered: Vec<IntMat>,
}

fn format_word(w: &[Letter]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

/// Evaluates all reduced words of length `≤ l_max` over `gens^{±1}` in exact
/// arithmetic and fails on the first pair of distinct words with equal value.
pub fn exact_freeness(
    group: &ExactGroup,
    gens: &[IntMat],
    l_max: usize,
) -> Result<usize, ArchimedeanError> {
    let letters = symmetrize(group, gens);
    let value = |l: Letter| &letters[2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0)];
    fn rec(
        group: &ExactGroup,
        value: &dyn Fn(Letter) -> IntMat,
        alphabet: &[Letter],
        l_max: usize,
        word: &mut Vec<Letter>,
        prefix: &IntMat,
        out: &mut Vec<(IntMat, Vec<Letter>)>,
    ) {
        out.push((prefix.clone(), word.clone()));
        if word.len() == l_max {
            return;
        }
        for &x in alphabet {
            if word.last() == Some(&-x) {
                continue;
            }
            word.push(x);
            let next = group.mul(prefix, &value(x));
            rec(group, value, alphabet, l_max, word, &next, out);
            word.pop();
        }
    }
    let owned = |l: Letter| value(l).clone();
    let alpha = alphabet(gens.len());
    let chunks: Vec<Vec<(IntMat, Vec<Letter>)>> = alpha
        .par_iter()
        .map(|&first| {
            let mut out = Vec::new();
            if l_max > 0 {
                let mut word = vec![first];
                rec(group, &owned, &alpha, l_max, &mut word, &owned(first), &mut out);
            }
            out
        })
        .collect();
    let mut seen: HashMap<IntMat, Vec<Letter>> = HashMap::from([(group.identity(), Vec::new())]);
    for (m, w) in chunks.into_iter().flatten() {
        if let Some(prev) = seen.get(&m) {
            return Err(ArchimedeanError::FreenessUnverified {
                first: format_word(prev),
                second: format_word(&w),
            });
        }
        seen.insert(m, w);
    }
    Ok(seen.len())
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    let v = CVec::from_fn(n, |_, _| {
        num_complex::Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let norm = v.norm();
    v / num_complex::Complex64::new(norm, 0.0)
}

/// Points of `Q_g`: random points at distance `≥ δ` from `V̄_g`, plus
/// points near every `z̄_{g'}` with `g g' ≠ 1`.
fn sample_q(
    rng: &mut ChaCha8Rng,
    att: &[Attractor],
    x: usize,
    partners: &[usize],
    delta: f64,
    radius: f64,
    samples: usize,
) -> Result<Vec<CVec>, ArchimedeanError> {
    let n = att[x].z.len();
    let mut pts = Vec::with_capacity(samples);
    for &y in partners {
        for _ in 0..8 {
            let jitter = random_point(rng, n) * num_complex::Complex64::new(radius / 2.0, 0.0);
            pts.push(&att[y].z + jitter);
        }
    }
    let mut attempts = 0;
    while pts.len() < samples && attempts < 50 * samples {
        attempts += 1;
        let p = random_point(rng, n);
        if distance_to_subspace(&p, &att[x].v)? >= delta {
            pts.push(p);
        }
    }
    Ok(pts)
}

struct Trial {
    max_image: f64,
    max_contraction: f64,
}

fn trial(powers: &[CMat], att: &[Attractor], points: &[Vec<CVec>]) -> Result<Trial, ArchimedeanError> {
    let mut max_image: f64 = 0.0;
    let mut max_contraction: f64 = 0.0;
    for (x, pts) in points.iter().enumerate() {
        let images: Vec<CVec> = pts.iter().map(|p| &powers[x] * p).collect();
        for im in &images {
            max_image = max_image.max(projective_distance(im, &att[x].z)?);
        }
        for k in 1..pts.len() {
            let before = projective_distance(&pts[k - 1], &pts[k])?;
            if before > 1e-12 {
                let after = projective_distance(&images[k - 1], &images[k])?;
                max_contraction = max_contraction.max(after / before);
            }
        }
    }
    Ok(Trial {
        max_image,
        max_contraction,
    })
}

/// Finds the smallest `M ≤ m_max` for which the ping-pong conditions hold on
/// a deterministic sample of every `Q_g` under the adjoint representation of
/// each listed embedding, then checks exactly that reduced words of length
/// `≤ l_check` over `{g^M}` are pairwise distinct.
///
/// When some letter is not proximal (unipotent or torsion generators) the
/// geometric step is skipped, `M = 1`, and freeness rests on the exact check.
pub fn power_up(
    group: &ExactGroup,
    emb: &EmbeddingSet,
    a: &[IntMat],
    embeddings: &[usize],
    opts: &PowerUpOptions,
) -> Result<FreeCertificate, ArchimedeanError> {
    if a.is_empty() {
        return Err(ArchimedeanError::InvalidParameter("empty generating set"));
    }
    if embeddings.iter().any(|&e| e >= emb.len()) {
        return Err(ArchimedeanError::InvalidParameter("embedding index out of range"));
    }
    let letters = symmetrize(group, a);
    let mut geometry: Vec<(usize, Vec<Attractor>)> = Vec::new();
    let mut skipped = None;
    for &e in embeddings {
        match attractors(group, emb, &letters, e)? {
            Ok(att) => geometry.push((e, att)),
            Err(k) => {
                skipped = Some(format!("letter {k} is not proximal under embedding {e}"));
                break;
            }
        }
    }
    let n = letters.len();
    let partners = |x: usize| -> Vec<usize> {
        (0..n)
            .filter(|&y| !group.is_identity(&group.mul(&letters[x], &letters[y])))
            .collect()
    };
    let mut margins = None;
    let mut m_found = 1;
    if skipped.is_none() {
        let mut margin_i = f64::INFINITY;
        for (_, att) in &geometry {
            for x in 0..n {
                for y in partners(x) {
                    margin_i = margin_i.min(distance_to_subspace(&att[y].z, &att[x].v)?);
                }
            }
        }
        if margin_i <= PREDICATE_TOL {
            skipped = Some("condition (i) fails: an attracting line meets a repelling complement".into());
        } else {
            let delta = margin_i / 2.0;
            let radius = margin_i / 4.0;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut points = Vec::new();
            for (_, att) in &geometry {
                let per: Vec<Vec<CVec>> = (0..n)
                    .map(|x| sample_q(&mut rng, att, x, &partners(x), delta, radius, opts.samples))
                    .collect::<Result<_, _>>()?;
                points.push(per);
            }
            let base: Vec<Vec<CMat>> = geometry
                .iter()
                .map(|(e, _)| {
                    letters
                        .iter()
                        .map(|g| adjoint(&emb.sigma(group, g, *e)?))
                        .collect::<Result<_, _>>()
                })
                .collect::<Result<_, _>>()?;
            let mut powers = base.clone();
            let mut found = None;
            for m in 1..=opts.m_max {
                if m > 1 {
                    for (pw, b) in powers.iter_mut().zip(&base) {
                        for (p, g) in pw.iter_mut().zip(b) {
                            *p = &*p * g;
                            let s = p.norm();
                            *p /= num_complex::Complex64::new(s, 0.0);
                        }
                    }
                }
                let mut max_image: f64 = 0.0;
                let mut max_contraction: f64 = 0.0;
                for (k, (_, att)) in geometry.iter().enumerate() {
                    let t = trial(&powers[k], att, &points[k])?;
                    max_image = max_image.max(t.max_image);
                    max_contraction = max_contraction.max(t.max_contraction);
                }
                if max_image < radius / 2.0 && max_contraction < 1.0 {
                    found = Some((m, max_image, max_contraction));
                    break;
                }
            }
            let (m, max_image, max_contraction) =
                found.ok_or(ArchimedeanError::NoSuchM { m_max: opts.m_max })?;
            m_found = m;
            margins = Some(GeometricCertificate {
                delta,
                radius,
                margin_i,
                max_image_distance: max_image,
                max_contraction,
                samples: opts.samples,
            });
        }
    }
    let powered: Vec<IntMat> = a.iter().map(|g| group.pow(g, i64::from(m_found))).collect();
    let words_checked = exact_freeness(group, &powered, opts.l_check)?;
    Ok(FreeCertificate {
        m: m_found,
        l_check: opts.l_check,
        words_checked,
        free: true,
        margins,
        geometric_skipped: skipped,
        powered,
    })
}
