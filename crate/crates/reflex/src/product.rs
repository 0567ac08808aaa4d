//! Product candidates modeled by their principal parts.
//!
//! A candidate is a labeled principal part: finitely many terms, each a
//! strictly negative rational exponent with a multiset of cosets, plus
//! an optional constant coefficient and an optional weight. The module
//! validates exponent/coset consistency, extracts the reflective
//! divisor, decides the compatibility relation used to form star sets,
//! and performs the weight bookkeeping.

use crate::exact::{rat, rem_euclid, Int, Rat};
use crate::lattice::{Coset, DiscriminantGroup};
use crate::reflect::{classify_reflective, induced_reflection, ReflectError, ReflectiveClass};
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProductError {
    #[error("candidates live on different lattices")]
    MixedLattices,
    #[error(transparent)]
    Reflect(#[from] ReflectError),
}

/// One term of a principal part: an exponent and the cosets it carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub exponent: Rat,
    pub cosets: Vec<Coset>,
}

/// The principal part of a candidate: negative-exponent terms and an
/// optional constant coefficient (the coefficient of the zero exponent
/// on the trivial coset).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PrincipalPart {
    pub terms: Vec<Term>,
    pub constant_coefficient: Option<Int>,
}

/// A labeled candidate attached to a discriminant group.
#[derive(Clone, Debug)]
pub struct ProductCandidate {
    label: String,
    group: DiscriminantGroup,
    principal_part: PrincipalPart,
    weight: Option<Rat>,
    tags: Vec<String>,
}

/// The reflective classes of a candidate's divisor, with the terms that
/// fail the reflectivity condition listed separately.
#[derive(Clone, Debug)]
pub struct ReflectiveDivisorSet {
    pub classes: Vec<ReflectiveClass>,
    /// (coset, exact norm −2·exponent) pairs that are not reflective.
    pub non_reflective: Vec<(Coset, Rat)>,
}

/// Outcome of validating one candidate: an empty issue list means the
/// candidate is consistent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateReport {
    pub label: String,
    pub issues: Vec<String>,
}

impl CandidateReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for CandidateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "{}: ok", self.label)
        } else {
            write!(f, "{}: {}", self.label, self.issues.join("; "))
        }
    }
}

impl ProductCandidate {
    pub fn new(
        label: impl Into<String>,
        group: DiscriminantGroup,
        principal_part: PrincipalPart,
        weight: Option<Rat>,
        tags: Vec<String>,
    ) -> Self {
        ProductCandidate {
            label: label.into(),
            group,
            principal_part,
            weight,
            tags,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn group(&self) -> &DiscriminantGroup {
        &self.group
    }

    pub fn principal_part(&self) -> &PrincipalPart {
        &self.principal_part
    }

    pub fn weight(&self) -> Option<&Rat> {
        self.weight.as_ref()
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }

    /// Every coset appearing in any term, in term order.
    pub fn all_cosets(&self) -> impl Iterator<Item = &Coset> {
        self.principal_part.terms.iter().flat_map(|t| t.cosets.iter())
    }
}

/// Consistency checks for one candidate: coset/group membership,
/// strictly negative exponents, the congruence
/// `exponent ≡ −norm/2 (mod 1)` per coset, and agreement of weight with
/// the constant coefficient when both are present.
pub fn validate(pc: &ProductCandidate) -> CandidateReport {
    let mut issues = Vec::new();
    for (i, term) in pc.principal_part.terms.iter().enumerate() {
        if !term.exponent.is_negative() {
            issues.push(format!(
                "term {}: exponent {} is not strictly negative",
                i, term.exponent
            ));
        }
        if term.cosets.is_empty() {
            issues.push(format!("term {}: empty coset list", i));
        }
        for coset in &term.cosets {
            if !pc.group.same_group_as(coset) {
                issues.push(format!(
                    "term {}: coset {} belongs to a different group",
                    i, coset
                ));
                continue;
            }
            let expected = rem_euclid(&(-coset.norm() / rat(2, 1)), &Rat::one());
            let actual = rem_euclid(&term.exponent, &Rat::one());
            if expected != actual {
                issues.push(format!(
                    "term {}: exponent {} is incompatible with coset {} of norm {} \
                     ({} required mod 1)",
                    i, term.exponent, coset, coset.norm(), expected
                ));
            }
        }
    }
    if let (Some(c0), Some(w)) = (&pc.principal_part.constant_coefficient, &pc.weight) {
        if &weight_from_constant(c0) != w {
            issues.push(format!(
                "weight {} does not match constant coefficient {} (expected {})",
                w,
                c0,
                weight_from_constant(c0)
            ));
        }
    }
    CandidateReport { label: pc.label.clone(), issues }
}

/// Classify every (coset, −2·exponent) pair of the principal part.
/// Non-reflective pairs are collected, not fatal.
pub fn reflective_divisor(pc: &ProductCandidate) -> Result<ReflectiveDivisorSet, ProductError> {
    let mut classes = Vec::new();
    let mut non_reflective = Vec::new();
    for term in &pc.principal_part.terms {
        let t = rat(-2, 1) * &term.exponent;
        for coset in &term.cosets {
            match classify_reflective(coset, &t)? {
                Some(rc) => classes.push(rc),
                None => non_reflective.push((coset.clone(), t.clone())),
            }
        }
    }
    Ok(ReflectiveDivisorSet { classes, non_reflective })
}

/// The one-sided compatibility test: every reflective class of `b`'s
/// divisor must send every coset of `a`'s principal part to itself or
/// its negative. The star-set graph uses the relation in both
/// directions; on the shipped datasets it is symmetric.
pub fn compatible(a: &ProductCandidate, b: &ProductCandidate) -> Result<bool, ProductError> {
    if a.group.token() != b.group.token() {
        return Err(ProductError::MixedLattices);
    }
    let divisor = reflective_divisor(b)?;
    for rc in &divisor.classes {
        let sigma = induced_reflection(&b.group, rc)?;
        for v in a.all_cosets() {
            let image = sigma.apply(v)?;
            if &image != v && image != v.neg() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Mutual compatibility, the edge relation of the star-set graph.
pub fn mutually_compatible(
    a: &ProductCandidate,
    b: &ProductCandidate,
) -> Result<bool, ProductError> {
    Ok(compatible(a, b)? && compatible(b, a)?)
}

/// Weight of the Jacobian of n+1 forms on an n-dimensional variety:
/// `n + Σ weights`.
pub fn jacobian_weight(n: usize, weights: &[Rat]) -> Rat {
    let sum: Rat = weights.iter().fold(Rat::zero(), |acc, w| acc + w);
    Rat::from(Int::from(n)) + sum
}

/// Warning when the form count does not match the variety dimension
/// plus one (the Jacobian construction needs exactly n+1 forms).
pub fn jacobian_arity_warning(n: usize, weights: &[Rat]) -> Option<String> {
    (weights.len() != n + 1).then(|| {
        format!(
            "jacobian of dimension {} expects {} forms, got {}",
            n,
            n + 1,
            weights.len()
        )
    })
}

/// Standard weight of a product with constant coefficient c0: c0/2.
pub fn weight_from_constant(c0: &Int) -> Rat {
    assert!(!c0.is_negative(), "constant coefficient must be non-negative");
    Rat::new(c0.clone(), Int::from(2))
}

/// Singular weight of a lattice of signature (p, 2): (p − 2)/2.
pub fn singular_weight(group: &DiscriminantGroup) -> Option<Rat> {
    let (p, q) = group.lattice().signature();
    (q == 2 && p >= 2).then(|| rat(p as i64 - 2, 2))
}

/// Outcome of summing candidate weights against an expected total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccountingReport {
    pub total: Rat,
    pub expected: Rat,
    pub missing_weights: Vec<String>,
}

impl AccountingReport {
    pub fn is_valid(&self) -> bool {
        self.missing_weights.is_empty() && self.total == self.expected
    }
}

/// Sum the weights of the given candidates and compare with the
/// expected total. Candidates without a weight are reported.
pub fn weight_accounting(
    candidates: &[&ProductCandidate],
    expected_total: &Rat,
) -> AccountingReport {
    let mut total = Rat::zero();
    let mut missing = Vec::new();
    for pc in candidates {
        match &pc.weight {
            Some(w) => total += w,
            None => missing.push(pc.label.clone()),
        }
    }
    AccountingReport {
        total,
        expected: expected_total.clone(),
        missing_weights: missing,
    }
}

/// One row of the generator/Jacobian weight table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Row {
    pub group_name: String,
    pub n: usize,
    pub jacobian_weight: Rat,
    pub generator_weights: Vec<Rat>,
    /// (weight, multiplicity) pairs decomposing the square of the
    /// Jacobian into irreducible generators.
    pub square_decomposition: Vec<(Rat, usize)>,
}

/// Check one table row: the Jacobian weight must equal n plus the sum
/// of the generator weights, and the square decomposition must sum to
/// twice the Jacobian weight.
pub fn table1_check(row: &Table1Row) -> CandidateReport {
    let mut issues = Vec::new();
    if let Some(w) = jacobian_arity_warning(row.n, &row.generator_weights) {
        issues.push(w);
    }
    let kj = jacobian_weight(row.n, &row.generator_weights);
    if kj != row.jacobian_weight {
        issues.push(format!(
            "jacobian weight {} does not equal n + sum of generator weights = {}",
            row.jacobian_weight, kj
        ));
    }
    let decomposition_total: Rat = row
        .square_decomposition
        .iter()
        .fold(Rat::zero(), |acc, (w, count)| {
            acc + w * Rat::from(Int::from(*count))
        });
    let doubled = rat(2, 1) * &row.jacobian_weight;
    if decomposition_total != doubled {
        issues.push(format!(
            "square decomposition sums to {}, expected 2·{} = {}",
            decomposition_total, row.jacobian_weight, doubled
        ));
    }
    CandidateReport { label: row.group_name.clone(), issues }
}
