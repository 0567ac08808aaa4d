//! Exact arithmetic for even lattices and their discriminant forms,
//! with the combinatorics built on top of them: reflective cosets,
//! compatibility graphs, star sets, and weight accounting.
//!
//! Everything is computed over arbitrary-precision rationals — there is
//! no floating point anywhere in this crate — so every reported number
//! is exact, and every check against a recorded dataset either matches
//! or fails loudly.
//!
//! The layers, bottom to top:
//!
//! - [`exact`]: big integers and rationals, integer matrices, Smith
//!   normal form, Bareiss determinants, exact linear solving.
//! - [`lattice`]: even lattices, their discriminant groups, cosets of
//!   the dual lattice, and enumeration by order and norm.
//! - [`reflect`]: the reflective-coset classification and the
//!   permutation each reflective class induces on the discriminant
//!   group.
//! - [`product`]: product candidates (principal parts, weights, tags),
//!   their validation, and weight bookkeeping.
//! - [`combin`]: compatibility graphs, maximal cliques, strongly
//!   regular parameters, permutation groups, and graph automorphisms.
//! - [`dataset`]: the JSON dataset format shipping lattices,
//!   candidates, and recorded expected values.
//! - [`verify`]: evaluation of every recorded check against a fresh
//!   computation, producing [`report`] records.

pub mod combin;
pub mod dataset;
pub mod exact;
pub mod lattice;
pub mod product;
pub mod reflect;
pub mod report;
pub mod verify;

/// Doc-tested copies of the guide chapters, so the book's examples are
/// compiled and run by `cargo test`.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(ch01_lattices, "../../../book/src/lattices.md");
    chapter!(ch02_discriminant_groups, "../../../book/src/discriminant-groups.md");
    chapter!(ch03_reflective_cosets, "../../../book/src/reflective-cosets.md");
    chapter!(ch04_candidates, "../../../book/src/candidates.md");
    chapter!(ch05_star_sets, "../../../book/src/star-sets.md");
    chapter!(ch06_datasets, "../../../book/src/datasets.md");
}
