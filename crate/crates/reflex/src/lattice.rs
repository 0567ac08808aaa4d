//! Even lattices, their discriminant groups, and cosets.
//!
//! A lattice is given by an integer Gram matrix `G` with even diagonal.
//! The discriminant group `D = M'/M` (dual modulo lattice) is finite of
//! order `|det G|`; its elements are represented by rational coordinate
//! vectors in the lattice basis with entries reduced into `[0, 1)`.
//! `D` carries the quadratic form `Q(u) = (u,u) mod 2` (stored in
//! `[0, 2)`) and the pairing `b(u,v) = (u,v) mod 1` (stored in `[0, 1)`).

use crate::exact::{self, det, rem_euclid, signature, snf, Int, IntMatrix, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::OnceCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use thiserror::Error;

/// Exhaustive enumeration refuses discriminant groups larger than this.
pub const ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix has an odd diagonal entry (not an even lattice)")]
    OddDiagonal,
    #[error("gram matrix is singular")]
    SingularMatrix,
    #[error("vector is not in the dual lattice: {0}")]
    NotInDual(String),
    #[error("cosets belong to different discriminant groups")]
    MixedGroups,
    #[error("coset set is not closed under negation: missing -{0}")]
    NotNegationClosed(String),
    #[error("discriminant group of order {0} exceeds the enumeration cap")]
    TooLarge(Int),
}

/// An even lattice: symmetric integer Gram matrix with even diagonal
/// and nonzero determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    signature: (usize, usize),
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_square() || !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        for i in 0..gram.rows() {
            if gram[(i, i)].is_odd() {
                return Err(LatticeError::OddDiagonal);
            }
        }
        let signature = match signature(&gram) {
            Ok(s) => s,
            Err(exact::ExactError::SingularMatrix) => return Err(LatticeError::SingularMatrix),
            Err(_) => return Err(LatticeError::NotSymmetric),
        };
        Ok(Lattice { gram, signature })
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    /// Exact bilinear value x^T G y (no modular reduction).
    pub fn eval(&self, x: &[Rat], y: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.rank(), "vector length mismatch");
        assert_eq!(y.len(), self.rank(), "vector length mismatch");
        let mut acc = Rat::zero();
        for i in 0..self.rank() {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.rank() {
                if y[j].is_zero() {
                    continue;
                }
                acc += &x[i] * Rat::from(self.gram[(i, j)].clone()) * &y[j];
            }
        }
        acc
    }

    /// Does P preserve the form, i.e. P^T G P = G with P integral?
    pub fn is_isometry(&self, p: &IntMatrix) -> bool {
        p.is_square()
            && p.rows() == self.rank()
            && p.transpose()
                .mul(&self.gram)
                .and_then(|m| m.mul(p))
                .map(|m| m == self.gram)
                .unwrap_or(false)
    }
}

/// A coset of the lattice inside its dual: canonical coordinates in
/// `[0, 1)`, with the group order of the class and its discriminant
/// norm `Q` cached.
#[derive(Clone, Debug)]
pub struct Coset {
    token: u64,
    coords: Vec<Rat>,
    order: Int,
    norm: Rat,
}

impl Coset {
    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    /// Least k >= 1 with k * coords integral.
    pub fn order(&self) -> &Int {
        &self.order
    }

    /// Q(u) = (u,u) mod 2, as its representative in [0, 2).
    pub fn norm(&self) -> &Rat {
        &self.norm
    }

    /// The inverse class -u, canonicalized. Order and norm are preserved.
    pub fn neg(&self) -> Coset {
        let coords: Vec<Rat> = self
            .coords
            .iter()
            .map(|x| if x.is_zero() { x.clone() } else { Rat::one() - x })
            .collect();
        Coset {
            token: self.token,
            coords,
            order: self.order.clone(),
            norm: self.norm.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.order.is_one()
    }

    fn same_group(&self, other: &Coset) -> bool {
        self.token == other.token
    }
}

impl PartialEq for Coset {
    fn eq(&self, other: &Self) -> bool {
        self.token == other.token && self.coords == other.coords
    }
}
impl Eq for Coset {}

impl PartialOrd for Coset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coords
            .cmp(&other.coords)
            .then_with(|| self.token.cmp(&other.token))
    }
}

impl std::hash::Hash for Coset {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Display for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(Rat::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A ± class {u, -u} with the lexicographically smaller representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PmClass {
    pub rep: Coset,
    /// The other member, absent when u = -u.
    pub partner: Option<Coset>,
}

struct Elements {
    list: Vec<Coset>,
    index: HashMap<Vec<Rat>, u32>,
}

struct DiscInner {
    lattice: Lattice,
    token: u64,
    invariant_factors: Vec<Int>,
    order: Int,
    generators: Vec<(Vec<Rat>, Int)>,
    elements: OnceCell<Result<Elements, LatticeError>>,
    reflection_memo: Mutex<HashMap<(Vec<Rat>, Int), Arc<Vec<u32>>>>,
}

/// The finite quadratic module D = M'/M of an even lattice.
///
/// Cheap to clone (shared interior). Cosets remember which group they
/// came from; operations mixing groups fail with `MixedGroups`.
#[derive(Clone)]
pub struct DiscriminantGroup {
    inner: Arc<DiscInner>,
}

static NEXT_TOKEN: AtomicU64 = AtomicU64::new(1);

impl DiscriminantGroup {
    pub fn new(lattice: Lattice) -> Self {
        let (_, s, v) = snf(lattice.gram());
        let n = lattice.rank();
        let mut invariant_factors = Vec::new();
        let mut order = Int::one();
        let mut generators = Vec::new();
        for i in 0..n {
            let d = s[(i, i)].clone();
            debug_assert!(d.is_positive(), "nonsingular gram yields positive factors");
            order *= &d;
            if d.is_one() {
                continue;
            }
            let coords: Vec<Rat> = (0..n)
                .map(|r| rem_euclid(&Rat::new(v[(r, i)].clone(), d.clone()), &Rat::one()))
                .collect();
            generators.push((coords, d.clone()));
            invariant_factors.push(d);
        }
        debug_assert_eq!(order, det(lattice.gram()).unwrap().abs());
        DiscriminantGroup {
            inner: Arc::new(DiscInner {
                lattice,
                token: NEXT_TOKEN.fetch_add(1, Ordering::Relaxed),
                invariant_factors,
                order,
                generators,
                elements: OnceCell::new(),
                reflection_memo: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.inner.lattice
    }

    /// Invariant factors d1 | d2 | ..., units dropped.
    pub fn invariant_factors(&self) -> &[Int] {
        &self.inner.invariant_factors
    }

    /// |D| = |det G|.
    pub fn order(&self) -> &Int {
        &self.inner.order
    }

    pub(crate) fn token(&self) -> u64 {
        self.inner.token
    }

    pub fn same_group_as(&self, coset: &Coset) -> bool {
        self.inner.token == coset.token
    }

    /// Canonical coset from arbitrary rational coordinates.
    pub fn coset(&self, v: &[Rat]) -> Result<Coset, LatticeError> {
        let n = self.lattice().rank();
        assert_eq!(v.len(), n, "coordinate length mismatch");
        let coords: Vec<Rat> = v.iter().map(|x| rem_euclid(x, &Rat::one())).collect();
        let image = self
            .lattice()
            .gram()
            .mul_rat_vec(&coords)
            .expect("rank checked above");
        if image.iter().any(|x| !x.is_integer()) {
            let parts: Vec<String> = v.iter().map(Rat::to_string).collect();
            return Err(LatticeError::NotInDual(format!("({})", parts.join(", "))));
        }
        let order = coords
            .iter()
            .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
        let norm = rem_euclid(&self.lattice().eval(&coords, &coords), &exact::rat(2, 1));
        Ok(Coset { token: self.inner.token, coords, order, norm })
    }

    pub fn zero_coset(&self) -> Coset {
        self.coset(&vec![Rat::zero(); self.lattice().rank()])
            .expect("zero vector is in every dual")
    }

    /// Pairing b(x, y) = (x, y) mod 1 in [0, 1).
    pub fn pairing(&self, x: &Coset, y: &Coset) -> Result<Rat, LatticeError> {
        if !self.same_group_as(x) || !self.same_group_as(y) || !x.same_group(y) {
            return Err(LatticeError::MixedGroups);
        }
        Ok(rem_euclid(&self.lattice().eval(&x.coords, &y.coords), &Rat::one()))
    }

    /// Exact bilinear value (x, y) of the canonical representatives.
    pub fn eval(&self, x: &Coset, y: &Coset) -> Result<Rat, LatticeError> {
        if !self.same_group_as(x) || !self.same_group_as(y) {
            return Err(LatticeError::MixedGroups);
        }
        Ok(self.lattice().eval(&x.coords, &y.coords))
    }

    fn elements(&self) -> Result<&Elements, LatticeError> {
        self.inner
            .elements
            .get_or_init(|| self.build_elements())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn build_elements(&self) -> Result<Elements, LatticeError> {
        match self.inner.order.to_u64() {
            Some(o) if o <= ENUMERATION_CAP => {}
            _ => return Err(LatticeError::TooLarge(self.inner.order.clone())),
        }
        let n = self.lattice().rank();
        let mut list = Vec::new();
        let zero = vec![Rat::zero(); n];
        // walk the product of cyclic factors, extending one generator at a time
        fn walk(
            dg: &DiscriminantGroup,
            level: usize,
            current: &mut Vec<Rat>,
            out: &mut Vec<Coset>,
        ) {
            if level == dg.inner.generators.len() {
                out.push(dg.coset(current).expect("generator combinations lie in the dual"));
                return;
            }
            let (gen_coords, d) = &dg.inner.generators[level];
            let d = d.to_u64().expect("factor bounded by enumeration cap");
            let saved = current.clone();
            for c in 0..d {
                if c > 0 {
                    for (cur, g) in current.iter_mut().zip(gen_coords) {
                        *cur = rem_euclid(&(&*cur + g), &Rat::one());
                    }
                }
                walk(dg, level + 1, current, out);
            }
            *current = saved;
        }
        let mut current = zero;
        walk(self, 0, &mut current, &mut list);
        debug_assert_eq!(Int::from(list.len()), self.inner.order);
        list.sort_by(|a, b| a.coords.cmp(&b.coords));
        let index = list
            .iter()
            .enumerate()
            .map(|(i, c)| (c.coords.clone(), i as u32))
            .collect();
        Ok(Elements { list, index })
    }

    /// All |D| cosets in lexicographic coordinate order.
    pub fn all_cosets(&self) -> Result<&[Coset], LatticeError> {
        Ok(&self.elements()?.list)
    }

    /// Position of a coset in the lexicographic element order.
    pub fn index_of(&self, coset: &Coset) -> Result<usize, LatticeError> {
        if !self.same_group_as(coset) {
            return Err(LatticeError::MixedGroups);
        }
        Ok(self.elements()?.index[&coset.coords] as usize)
    }

    /// Cosets matching the optional order and norm filters, in
    /// lexicographic coordinate order. The norm filter is reduced mod 2.
    pub fn enumerate_cosets(
        &self,
        order_filter: Option<&Int>,
        norm_filter: Option<&Rat>,
    ) -> Result<Vec<Coset>, LatticeError> {
        let norm = norm_filter.map(|q| rem_euclid(q, &exact::rat(2, 1)));
        Ok(self
            .elements()?
            .list
            .iter()
            .filter(|c| order_filter.map_or(true, |o| &c.order == o))
            .filter(|c| norm.as_ref().map_or(true, |q| &c.norm == q))
            .cloned()
            .collect())
    }

    pub(crate) fn reflection_memo(
        &self,
        key: (Vec<Rat>, Int),
        build: impl FnOnce() -> Result<Vec<u32>, LatticeError>,
    ) -> Result<Arc<Vec<u32>>, LatticeError> {
        if let Some(hit) = self.inner.reflection_memo.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let table = Arc::new(build()?);
        self.inner
            .reflection_memo
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| table.clone());
        Ok(table)
    }
}

impl fmt::Debug for DiscriminantGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiscriminantGroup")
            .field("invariant_factors", &self.inner.invariant_factors)
            .field("order", &self.inner.order)
            .finish()
    }
}

/// Partition a negation-closed coset list into ± classes, each holding
/// its lexicographically smaller representative. Classes are returned
/// sorted by representative.
pub fn pm_classes(cosets: &[Coset]) -> Result<Vec<PmClass>, LatticeError> {
    let pool: HashMap<&Vec<Rat>, &Coset> = cosets.iter().map(|c| (&c.coords, c)).collect();
    let mut seen: Vec<bool> = vec![false; cosets.len()];
    let mut classes = Vec::new();
    for (i, c) in cosets.iter().enumerate() {
        if seen[i] {
            continue;
        }
        let neg = c.neg();
        let Some(&partner) = pool.get(&neg.coords) else {
            return Err(LatticeError::NotNegationClosed(c.to_string()));
        };
        seen[i] = true;
        if partner.coords == c.coords {
            classes.push(PmClass { rep: c.clone(), partner: None });
        } else {
            for (j, other) in cosets.iter().enumerate() {
                if other.coords == partner.coords {
                    seen[j] = true;
                }
            }
            let (rep, mate) = if c.coords < partner.coords {
                (c.clone(), partner.clone())
            } else {
                (partner.clone(), c.clone())
            };
            classes.push(PmClass { rep, partner: Some(mate) });
        }
    }
    classes.sort_by(|a, b| a.rep.coords.cmp(&b.rep.coords));
    Ok(classes)
}
