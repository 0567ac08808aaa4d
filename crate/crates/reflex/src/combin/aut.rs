//! Exact automorphism-group order of a compatibility graph.
//!
//! Strategy: color vertices by equitable refinement (degree, then
//! iterated neighbor-color multisets), then walk the natural base
//! 0, 1, 2, …: at level v, for every color-compatible target not yet in
//! the orbit of v under the stabilizer of 0..v−1, run a complete
//! backtracking search for an automorphism that fixes 0..v−1 pointwise
//! and maps v to the target. Every discovered automorphism feeds a
//! permutation group; its order — the product of the fundamental orbit
//! lengths — is exactly the number of graph automorphisms. Complete and
//! edgeless graphs short-circuit to n!.

use super::perm::{Permutation, PermutationGroup};
use super::{factorial, CombinError, CompatibilityGraph, MAX_VERTICES};
use crate::exact::Int;
use std::collections::BTreeMap;

pub fn automorphism_order(g: &CompatibilityGraph) -> Result<Int, CombinError> {
    let n = g.vertex_count();
    if n > MAX_VERTICES {
        return Err(CombinError::TooLarge(n));
    }
    if g.is_complete() || g.is_edgeless() {
        return Ok(factorial(n));
    }
    let colors = equitable_colors(g);
    let mut group = PermutationGroup::trivial(n);
    for level in 0..n {
        for target in (level + 1) as u32..n as u32 {
            if colors[level] != colors[target as usize] {
                continue;
            }
            if group.prefix_orbit_contains(level, target) {
                continue;
            }
            if let Some(p) = find_extension(g, &colors, level, target) {
                group.add_generator(p);
            }
        }
    }
    Ok(group.order())
}

/// Stable vertex coloring refined until the multiset of neighbor
/// colors is constant on each color class. Deterministic: classes are
/// renumbered by lexicographic signature order each round.
fn equitable_colors(g: &CompatibilityGraph) -> Vec<u32> {
    let n = g.vertex_count();
    let mut colors: Vec<u32> = vec![0; n];
    loop {
        let signatures: Vec<(u32, Vec<(u32, u32)>)> = (0..n)
            .map(|v| {
                let mut neighbor_colors: BTreeMap<u32, u32> = BTreeMap::new();
                neighbor_colors.insert(u32::MAX, g.degree(v) as u32);
                for w in 0..n {
                    if g.adjacent(v, w) {
                        *neighbor_colors.entry(colors[w]).or_insert(0) += 1;
                    }
                }
                (colors[v], neighbor_colors.into_iter().collect())
            })
            .collect();
        let mut ranked: Vec<&(u32, Vec<(u32, u32)>)> = signatures.iter().collect();
        ranked.sort();
        ranked.dedup();
        let next: Vec<u32> = signatures
            .iter()
            .map(|s| ranked.binary_search(&s).expect("own signature present") as u32)
            .collect();
        if next == colors {
            return colors;
        }
        colors = next;
    }
}

/// Search for an automorphism fixing 0..level−1 pointwise and mapping
/// `level` to `target`; vertices are assigned in natural order, each
/// candidate image constrained by color and by adjacency to the fully
/// mapped prefix. Returns the first (lexicographically least) match.
fn find_extension(
    g: &CompatibilityGraph,
    colors: &[u32],
    level: usize,
    target: u32,
) -> Option<Permutation> {
    let n = g.vertex_count();
    let below: u128 = (1u128 << level) - 1;
    if g.neighbors_mask(level) & below != g.neighbors_mask(target as usize) & below {
        return None;
    }
    let mut images: Vec<u32> = (0..n as u32).collect();
    images[level] = target;
    let used = below | 1 << target;
    fn assign(
        g: &CompatibilityGraph,
        colors: &[u32],
        images: &mut Vec<u32>,
        used: u128,
        v: usize,
    ) -> bool {
        let n = g.vertex_count();
        if v == n {
            return true;
        }
        let mut need: u128 = 0;
        let mut mapped_neighbors = g.neighbors_mask(v) & ((1u128 << v) - 1);
        while mapped_neighbors != 0 {
            let u = mapped_neighbors.trailing_zeros() as usize;
            mapped_neighbors &= mapped_neighbors - 1;
            need |= 1 << images[u];
        }
        for w in 0..n as u32 {
            if used >> w & 1 == 1 || colors[w as usize] != colors[v] {
                continue;
            }
            if g.neighbors_mask(w as usize) & used != need {
                continue;
            }
            images[v] = w;
            if assign(g, colors, images, used | 1 << w, v + 1) {
                return true;
            }
        }
        images[v] = v as u32;
        false
    }
    assign(g, colors, &mut images, used, level + 1).then(|| Permutation::from_images(images))
}

#[cfg(test)]
mod tests {
    use super::super::graph_fixtures::*;
    use super::*;
    use crate::exact::int;

    /// Count automorphisms by checking all n! permutations.
    fn brute_force_order(g: &CompatibilityGraph) -> usize {
        let n = g.vertex_count();
        let mut points: Vec<u32> = (0..n as u32).collect();
        let mut count = 0;
        permute(&mut points, 0, &mut |perm| {
            let ok = (0..n).all(|i| {
                (i + 1..n).all(|j| {
                    g.adjacent(i, j) == g.adjacent(perm[i] as usize, perm[j] as usize)
                })
            });
            if ok {
                count += 1;
            }
        });
        count
    }

    fn permute(points: &mut Vec<u32>, k: usize, visit: &mut impl FnMut(&[u32])) {
        if k == points.len() {
            visit(points);
            return;
        }
        for i in k..points.len() {
            points.swap(k, i);
            permute(points, k + 1, visit);
            points.swap(k, i);
        }
    }

    #[test]
    fn complete_and_edgeless_are_fully_symmetric() {
        assert_eq!(automorphism_order(&complete(5)).unwrap(), int(120));
        assert_eq!(automorphism_order(&named(4, &[])).unwrap(), int(24));
        assert_eq!(automorphism_order(&named(0, &[])).unwrap(), int(1));
        assert_eq!(automorphism_order(&named(1, &[])).unwrap(), int(1));
    }

    #[test]
    fn cycles_have_dihedral_symmetry() {
        assert_eq!(automorphism_order(&cycle(5)).unwrap(), int(10));
        assert_eq!(automorphism_order(&cycle(6)).unwrap(), int(12));
    }

    #[test]
    fn path_and_pendant_graphs() {
        // path 0-1-2: only the end swap
        assert_eq!(automorphism_order(&named(3, &[(0, 1), (1, 2)])).unwrap(), int(2));
        // one edge plus an isolated vertex
        assert_eq!(automorphism_order(&named(3, &[(0, 1)])).unwrap(), int(2));
    }

    #[test]
    fn petersen_graph_order() {
        assert_eq!(automorphism_order(&petersen()).unwrap(), int(120));
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20260818);
        for n in 2..=7usize {
            for _ in 0..25 {
                let mut edges = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        if rng.gen_bool(0.4) {
                            edges.push((i, j));
                        }
                    }
                }
                let g = named(n, &edges);
                assert_eq!(
                    automorphism_order(&g).unwrap(),
                    int(brute_force_order(&g) as i64),
                    "n={n} edges={edges:?}"
                );
            }
        }
    }
}
