use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::GrowthError;
use crate::algebra::FiniteField;
use crate::groups::{bfs_closure, GroupElem, GroupSpec, DEFAULT_ENUMERATION_CAP};

/// Default cap on the word length searched by [`find_nondegenerate`].
pub const DEFAULT_R_MAX: usize = 12;

type Fq = Vec<u64>;

/// `w(a) = a + a⁻¹`.
pub fn w(field: &FiniteField, a: &[u64]) -> Result<Fq, GrowthError> {
    let inv = field.inv(a).ok_or(GrowthError::ZeroElement)?;
    Ok(field.add(a, &inv))
}

/// `w(a)w(b) = w(ab) + w(ab⁻¹)` for one pair of units.
pub fn w_identity_holds(field: &FiniteField, a: &[u64], b: &[u64]) -> Result<bool, GrowthError> {
    let b_inv = field.inv(b).ok_or(GrowthError::ZeroElement)?;
    let lhs = field.mul(&w(field, a)?, &w(field, b)?);
    let rhs = field.add(&w(field, &field.mul(a, b))?, &w(field, &field.mul(a, &b_inv))?);
    Ok(lhs == rhs)
}

#[derive(Debug, Clone, Serialize)]
pub struct AmplifyReport {
    pub lambda_size: usize,
    /// `|∏₄Λ|`.
    pub product_size: usize,
    /// `|{a₁w(bc) + a₂w(bc⁻¹) : b, c ∈ ∏₄Λ}|`.
    pub output_size: usize,
    /// `|a₁w(Λ₁) + a₂w(Λ₁)|` with `Λ₁ = Λ².Λ²` (`Λ²` the squares).
    pub core_size: usize,
    /// `|w(Λ²)|`.
    pub w_squares_size: usize,
    /// Degrees of the proper subfields containing `w(Λ²)`.
    pub containing_subfields: Vec<usize>,
    /// `a₁/a₂` lies outside every subfield in `containing_subfields`.
    pub ratio_outside: bool,
    /// The core set sits inside the output.
    pub core_in_output: bool,
    /// When `w(Λ²)` lies in a proper subfield and the side condition holds,
    /// `core_size ≥ w_squares_size²`; vacuously true otherwise.
    pub dichotomy_ok: bool,
    #[serde(skip)]
    pub output: Vec<Fq>,
}

fn check_element(field: &FiniteField, a: &[u64]) -> Result<(), GrowthError> {
    if a.len() != field.degree() || a.iter().any(|&c| c >= field.characteristic()) {
        return Err(GrowthError::InvalidSet("malformed field element"));
    }
    Ok(())
}

fn products(field: &FiniteField, a: &BTreeSet<Fq>, b: &BTreeSet<Fq>) -> BTreeSet<Fq> {
    a.iter().flat_map(|x| b.iter().map(move |y| field.mul(x, y))).collect()
}

/// The sum-product amplification set built from `Λ` (which must contain 1
/// and be closed under inverses), with the subfield side condition.
pub fn trace_amplify(
    field: &FiniteField,
    lambda: &[Fq],
    a1: &[u64],
    a2: &[u64],
    cap: usize,
) -> Result<AmplifyReport, GrowthError> {
    for x in lambda.iter().map(Vec::as_slice).chain([a1, a2]) {
        check_element(field, x)?;
        if field.is_zero(x) {
            return Err(GrowthError::ZeroElement);
        }
    }
    let set: BTreeSet<Fq> = lambda.iter().cloned().collect();
    if !set.contains(&field.one()) {
        return Err(GrowthError::InvalidSet("Λ must contain 1"));
    }
    if set.iter().any(|x| !set.contains(&field.inv(x).expect("unit"))) {
        return Err(GrowthError::InvalidSet("Λ must be closed under inverses"));
    }
    let two = products(field, &set, &set);
    let four = products(field, &two, &two);
    if four.len() > cap {
        return Err(GrowthError::TooLarge { size: four.len(), cap });
    }
    let four: Vec<Fq> = four.into_iter().collect();
    let mut output: HashSet<Fq> = HashSet::new();
    for b in &four {
        for c in &four {
            let c_inv = field.inv(c).expect("unit");
            let u = w(field, &field.mul(b, c))?;
            let v = w(field, &field.mul(b, &c_inv))?;
            output.insert(field.add(&field.mul(a1, &u), &field.mul(a2, &v)));
        }
    }

    let squares: BTreeSet<Fq> = set.iter().map(|x| field.mul(x, x)).collect();
    let lambda1 = products(field, &squares, &squares);
    let w_lambda1: Vec<Fq> = lambda1.iter().map(|x| w(field, x)).collect::<Result<_, _>>()?;
    let core: HashSet<Fq> = w_lambda1
        .iter()
        .flat_map(|u| w_lambda1.iter().map(move |v| field.add(&field.mul(a1, u), &field.mul(a2, v))))
        .collect();
    let w_squares: BTreeSet<Fq> = squares.iter().map(|x| w(field, x)).collect::<Result<_, _>>()?;
    let containing_subfields: Vec<usize> = field
        .proper_subfield_degrees()
        .into_iter()
        .filter(|&k| w_squares.iter().all(|x| field.in_subfield(x, k)))
        .collect();
    let ratio = field.mul(a1, &field.inv(a2).expect("unit"));
    let ratio_outside = containing_subfields.iter().all(|&k| !field.in_subfield(&ratio, k));
    let bound = w_squares.len() * w_squares.len();
    let dichotomy_ok = containing_subfields.is_empty() || !ratio_outside || core.len() >= bound;
    let mut output: Vec<Fq> = output.into_iter().collect();
    output.sort_unstable();
    Ok(AmplifyReport {
        lambda_size: set.len(),
        product_size: four.len(),
        output_size: output.len(),
        core_size: core.len(),
        w_squares_size: w_squares.len(),
        containing_subfields,
        ratio_outside,
        core_in_output: core.iter().all(|x| output.binary_search(x).is_ok()),
        dichotomy_ok,
        output,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NondegenerateWitness {
    #[serde(skip)]
    pub x: GroupElem,
    /// Word length: `x ∈ ∏_R S`.
    pub r: usize,
    /// `ad/(bc)` as coefficients.
    pub ratio: Fq,
}

/// Breadth-first search over `∏_R S`, `R = 1, 2, …, r_max`, for
/// `x = [[a, b], [c, d]]` with `abcd ≠ 0` and `ad/bc` outside the subfield of
/// degree `sub_degree`. `spec` must be `SL_2` over a single field.
pub fn find_nondegenerate(
    spec: &GroupSpec,
    s: &[GroupElem],
    sub_degree: usize,
    r_max: usize,
) -> Result<NondegenerateWitness, GrowthError> {
    let fields = spec.ring().fields();
    if spec.dim() != 2 || fields.len() != 1 {
        return Err(GrowthError::Unsupported("SL_2 over a single field only"));
    }
    let field = &fields[0];
    if !field.proper_subfield_degrees().contains(&sub_degree) {
        return Err(GrowthError::InvalidParameter("not the degree of a proper subfield"));
    }
    if s.is_empty() {
        return Err(GrowthError::EmptyResult);
    }
    for g in s {
        spec.check_elem(g)?;
    }
    let closure = bfs_closure(spec, s, DEFAULT_ENUMERATION_CAP)?;
    if closure.len() as u128 != spec.order() {
        return Err(GrowthError::NotGenerating);
    }
    let witness = |x: &GroupElem| -> Option<Fq> {
        let [a, b, c, d] = [(0, 0), (0, 1), (1, 0), (1, 1)].map(|(i, j)| spec.entry(x, i, j));
        if [a, b, c, d].iter().any(|e| field.is_zero(e)) {
            return None;
        }
        let ratio = field.mul(&field.mul(a, d), &field.inv(&field.mul(b, c)).expect("unit"));
        (!field.in_subfield(&ratio, sub_degree)).then_some(ratio)
    };
    let base: BTreeSet<GroupElem> = s.iter().cloned().collect();
    let mut layer = base.clone();
    for r in 1..=r_max {
        if r > 1 {
            layer = layer.iter().flat_map(|x| base.iter().map(move |y| spec.mul(x, y))).collect();
        }
        if let Some((x, ratio)) = layer.iter().find_map(|x| witness(x).map(|q| (x.clone(), q))) {
            return Ok(NondegenerateWitness { x, r, ratio });
        }
    }
    Err(GrowthError::SearchExhausted { r_max })
}
