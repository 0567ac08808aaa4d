//! Reflective cosets and their induced action on the discriminant group.
//!
//! A coset `u` with positive rational norm parameter `t` is *reflective*
//! when `d = 2/t` is a positive integer and the order of `u` is `d` or
//! `d/2`. Such a class induces the permutation
//! `x ↦ x − d·(u,x)·u` of the discriminant group, which is an involution
//! preserving both the quadratic form and the pairing. The coefficient
//! always uses `d` from the class, never the exact norm of the stored
//! representative (those differ by an even integer in general).

use crate::exact::{rat, rem_euclid, Int, IntMatrix, Rat};
use crate::lattice::{Coset, DiscriminantGroup, LatticeError};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReflectError {
    #[error("norm parameter {t} is not congruent to the coset norm {norm} mod 2")]
    NormMismatch { t: Rat, norm: Rat },
    #[error("matrix does not preserve the gram form")]
    NotIsometry,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A coset together with the positive integer `d` encoding the norm
/// `2/d` of its reflecting vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectiveClass {
    coset: Coset,
    d: Int,
    exact_norm: Rat,
}

impl ReflectiveClass {
    pub fn coset(&self) -> &Coset {
        &self.coset
    }

    pub fn d(&self) -> &Int {
        &self.d
    }

    /// Norm 2/d of the reflecting vectors.
    pub fn exact_norm(&self) -> &Rat {
        &self.exact_norm
    }
}

/// A permutation of the full discriminant group, stored as an image
/// table over the lexicographic element order.
#[derive(Clone)]
pub struct DiscPermutation {
    domain: DiscriminantGroup,
    images: Arc<Vec<u32>>,
}

impl DiscPermutation {
    pub fn identity(domain: &DiscriminantGroup) -> Result<Self, ReflectError> {
        let n = domain.all_cosets()?.len();
        Ok(DiscPermutation {
            domain: domain.clone(),
            images: Arc::new((0..n as u32).collect()),
        })
    }

    pub fn domain(&self) -> &DiscriminantGroup {
        &self.domain
    }

    pub fn image_table(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, c: &Coset) -> Result<Coset, ReflectError> {
        let i = self.domain.index_of(c)?;
        Ok(self.domain.all_cosets()?[self.images[i] as usize].clone())
    }

    /// Composition: `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &DiscPermutation) -> Result<Self, ReflectError> {
        if self.domain.token() != other.domain.token() {
            return Err(LatticeError::MixedGroups.into());
        }
        let images = other
            .images
            .iter()
            .map(|&i| self.images[i as usize])
            .collect();
        Ok(DiscPermutation {
            domain: self.domain.clone(),
            images: Arc::new(images),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i as u32 == im)
    }
}

impl PartialEq for DiscPermutation {
    fn eq(&self, other: &Self) -> bool {
        self.domain.token() == other.domain.token() && self.images == other.images
    }
}
impl Eq for DiscPermutation {}

impl fmt::Debug for DiscPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiscPermutation")
            .field("degree", &self.images.len())
            .field("identity", &self.is_identity())
            .finish()
    }
}

/// Classify the coset `u` against the norm parameter `t`.
///
/// Returns `Ok(None)` when `d = 2/t` fails to be a positive integer or
/// the order of `u` is neither `d` nor `d/2`. The parameter must agree
/// with the coset norm modulo 2.
pub fn classify_reflective(
    u: &Coset,
    t: &Rat,
) -> Result<Option<ReflectiveClass>, ReflectError> {
    if !t.is_positive() {
        return Err(ReflectError::NormMismatch { t: t.clone(), norm: u.norm().clone() });
    }
    if !rem_euclid(&(t - u.norm()), &rat(2, 1)).is_zero() {
        return Err(ReflectError::NormMismatch { t: t.clone(), norm: u.norm().clone() });
    }
    let d_rat = rat(2, 1) / t;
    if !d_rat.is_integer() {
        return Ok(None);
    }
    let d = d_rat.to_integer();
    let ord = u.order();
    let half_matches = d.is_even() && *ord == Int::from(&d / 2);
    if *ord != d && !half_matches {
        return Ok(None);
    }
    Ok(Some(ReflectiveClass { coset: u.clone(), exact_norm: t.clone(), d }))
}

/// The permutation of D induced by the reflection in a vector of the
/// class: `x ↦ x − d·(u,x)·u`. Representative-independent; memoized per
/// (coset, d) on the group.
pub fn induced_reflection(
    dg: &DiscriminantGroup,
    rc: &ReflectiveClass,
) -> Result<DiscPermutation, ReflectError> {
    if !dg.same_group_as(&rc.coset) {
        return Err(LatticeError::MixedGroups.into());
    }
    let key = (rc.coset.coords().to_vec(), rc.d.clone());
    let images = dg.reflection_memo(key, || {
        let elements = dg.all_cosets()?;
        let u = rc.coset.coords();
        let d = Rat::from(rc.d.clone());
        let mut table = Vec::with_capacity(elements.len());
        for x in elements {
            let coeff = &d * dg.lattice().eval(u, x.coords());
            debug_assert!(coeff.is_integer(), "d * (u, x) must be integral");
            let image: Vec<Rat> = x
                .coords()
                .iter()
                .zip(u)
                .map(|(xi, ui)| xi - &coeff * ui)
                .collect();
            let image = dg.coset(&image)?;
            table.push(dg.index_of(&image)? as u32);
        }
        Ok(table)
    })?;
    Ok(DiscPermutation { domain: dg.clone(), images })
}

/// True iff the permutation acts trivially on the whole discriminant
/// group (the corresponding reflection lies in the kernel subgroup).
pub fn in_discriminant_kernel(p: &DiscPermutation) -> bool {
    p.is_identity()
}

/// Apply an integral isometry `P` (with `P^T G P = G`) to a coset,
/// returning the canonical coset of `P·u`.
pub fn apply_isometry(
    dg: &DiscriminantGroup,
    p: &IntMatrix,
    u: &Coset,
) -> Result<Coset, ReflectError> {
    if !dg.same_group_as(u) {
        return Err(LatticeError::MixedGroups.into());
    }
    if !dg.lattice().is_isometry(p) {
        return Err(ReflectError::NotIsometry);
    }
    let image = p.mul_rat_vec(u.coords()).expect("rank checked by is_isometry");
    Ok(dg.coset(&image)?)
}

/// Every `t = 2/d` for `d` up to `2·exponent(D)` that classifies `u` as
/// reflective; used to check uniqueness of the parameter.
pub fn reflective_parameters(
    dg: &DiscriminantGroup,
    u: &Coset,
) -> Result<Vec<ReflectiveClass>, ReflectError> {
    let exponent = dg
        .invariant_factors()
        .last()
        .cloned()
        .unwrap_or_else(Int::one);
    let bound = (Int::from(2) * exponent).to_u64().unwrap_or(u64::MAX);
    let mut out = Vec::new();
    for d in 1..=bound {
        let t = rat(2, d as i64);
        if !rem_euclid(&(&t - u.norm()), &rat(2, 1)).is_zero() {
            continue;
        }
        if let Some(rc) = classify_reflective(u, &t)? {
            out.push(rc);
        }
    }
    Ok(out)
}
