//! Graphs on product candidates and permutation-group machinery.
//!
//! The compatibility graph has the candidates as vertices and an edge
//! wherever the compatibility relation holds in both directions. Star
//! sets are its maximal cliques; pair statistics, the exceptional-pair
//! contraction, strong-regularity parameters, and the automorphism
//! group order are computed from the same structure.

mod aut;
mod clique;
mod perm;

pub use aut::automorphism_order;
pub use clique::maximal_cliques;
pub use perm::{group_order, orbits, Permutation, PermutationGroup};

use crate::exact::Int;
use crate::product::{mutually_compatible, ProductCandidate, ProductError};
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

/// Adjacency is stored in one machine word per vertex.
pub const MAX_VERTICES: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinError {
    #[error("graph has {0} vertices, more than the supported {MAX_VERTICES}")]
    TooLarge(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error(transparent)]
    Product(#[from] ProductError),
}

/// An undirected graph without self-loops on at most 128 labeled
/// vertices, with bitmask adjacency rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityGraph {
    labels: Vec<String>,
    adj: Vec<u128>,
}

impl CompatibilityGraph {
    pub fn from_edges(
        labels: Vec<String>,
        edges: &[(usize, usize)],
    ) -> Result<Self, CombinError> {
        let n = labels.len();
        if n > MAX_VERTICES {
            return Err(CombinError::TooLarge(n));
        }
        let mut adj = vec![0u128; n];
        for &(i, j) in edges {
            assert!(i < n && j < n && i != j, "edge out of range or self-loop");
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        Ok(CompatibilityGraph { labels, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i] >> j & 1 == 1
    }

    pub fn neighbors_mask(&self, i: usize) -> u128 {
        self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Common degree when the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let n = self.vertex_count();
        if n == 0 {
            return None;
        }
        let k = self.degree(0);
        (1..n).all(|i| self.degree(i) == k).then_some(k)
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertex_count();
        self.edge_count() == n * n.saturating_sub(1) / 2
    }

    pub fn is_edgeless(&self) -> bool {
        self.edge_count() == 0
    }
}

/// Build the compatibility graph over the given candidates: edge
/// {i, j} iff i ≠ j and the compatibility relation holds both ways.
/// Pairs are evaluated independently (and in parallel); the result does
/// not depend on evaluation order.
pub fn build_graph(candidates: &[ProductCandidate]) -> Result<CompatibilityGraph, CombinError> {
    let n = candidates.len();
    if n > MAX_VERTICES {
        return Err(CombinError::TooLarge(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let evaluated: Vec<Result<((usize, usize), bool), ProductError>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            mutually_compatible(&candidates[i], &candidates[j]).map(|ok| ((i, j), ok))
        })
        .collect();
    let mut edges = Vec::new();
    for item in evaluated {
        let ((i, j), ok) = item?;
        if ok {
            edges.push((i, j));
        }
    }
    let labels = candidates.iter().map(|c| c.label().to_string()).collect();
    CompatibilityGraph::from_edges(labels, &edges)
}

/// Membership counts per vertex and per unordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueStats {
    /// cliques containing each vertex.
    pub per_vertex: Vec<usize>,
    /// multiplicity of each pair that occurs in at least one clique.
    pub pair_counts: BTreeMap<(u32, u32), usize>,
    /// multiplicity -> number of unordered pairs with that multiplicity
    /// (including multiplicity 0).
    pub pair_histogram: BTreeMap<usize, usize>,
}

pub fn clique_stats(cliques: &[Vec<u32>], n_vertices: usize) -> CliqueStats {
    let mut per_vertex = vec![0usize; n_vertices];
    let mut pair_counts: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for clique in cliques {
        for (a, &v) in clique.iter().enumerate() {
            per_vertex[v as usize] += 1;
            for &w in &clique[a + 1..] {
                let key = if v < w { (v, w) } else { (w, v) };
                *pair_counts.entry(key).or_insert(0) += 1;
            }
        }
    }
    let total_pairs = n_vertices * n_vertices.saturating_sub(1) / 2;
    let mut pair_histogram: BTreeMap<usize, usize> = BTreeMap::new();
    pair_histogram.insert(0, total_pairs - pair_counts.len());
    for &count in pair_counts.values() {
        *pair_histogram.entry(count).or_insert(0) += 1;
    }
    CliqueStats { per_vertex, pair_counts, pair_histogram }
}

/// Strong-regularity parameters (n, k, lambda, mu), or `None` when the
/// graph is not strongly regular. Complete and edgeless graphs are
/// excluded by convention.
pub fn srg_params(g: &CompatibilityGraph) -> Option<(usize, usize, usize, usize)> {
    let n = g.vertex_count();
    let k = g.regular_degree()?;
    if g.is_complete() || g.is_edgeless() {
        return None;
    }
    let mut lambda: Option<usize> = None;
    let mut mu: Option<usize> = None;
    for i in 0..n {
        for j in i + 1..n {
            let common = (g.neighbors_mask(i) & g.neighbors_mask(j)).count_ones() as usize;
            let slot = if g.adjacent(i, j) { &mut lambda } else { &mut mu };
            match slot {
                Some(c) if *c != common => return None,
                Some(_) => {}
                None => *slot = Some(common),
            }
        }
    }
    Some((n, k, lambda.unwrap_or(0), mu.unwrap_or(0)))
}

/// Connected components of the relation "pair lies in at least two
/// cliques", singletons included, each component sorted, components
/// ordered by least member.
pub fn exceptional_classes(stats: &CliqueStats, n_vertices: usize) -> Vec<Vec<u32>> {
    let mut parent: Vec<u32> = (0..n_vertices as u32).collect();
    fn find(parent: &mut [u32], x: u32) -> u32 {
        let mut root = x;
        while parent[root as usize] != root {
            root = parent[root as usize];
        }
        let mut cur = x;
        while parent[cur as usize] != root {
            let next = parent[cur as usize];
            parent[cur as usize] = root;
            cur = next;
        }
        root
    }
    for (&(a, b), &count) in &stats.pair_counts {
        if count >= 2 {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                parent[ra.max(rb) as usize] = ra.min(rb);
            }
        }
    }
    let mut classes: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for v in 0..n_vertices as u32 {
        classes.entry(find(&mut parent, v)).or_default().push(v);
    }
    classes.into_values().collect()
}

/// Quotient graph over a partition of the vertex set: two distinct
/// classes are adjacent iff at least one cross edge exists. Class
/// vertices are ordered by least member; each class label joins its
/// member labels with '+'.
pub fn contract(
    g: &CompatibilityGraph,
    partition: &[Vec<u32>],
) -> Result<CompatibilityGraph, CombinError> {
    let n = g.vertex_count();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut classes: Vec<&Vec<u32>> = partition.iter().collect();
    classes.sort_by_key(|c| c.iter().min().copied());
    for (ci, class) in classes.iter().enumerate() {
        if class.is_empty() {
            return Err(CombinError::InvalidPartition("empty class".into()));
        }
        for &v in class.iter() {
            let slot = owner
                .get_mut(v as usize)
                .ok_or_else(|| CombinError::InvalidPartition(format!("vertex {v} out of range")))?;
            if slot.is_some() {
                return Err(CombinError::InvalidPartition(format!(
                    "vertex {v} appears in two classes"
                )));
            }
            *slot = Some(ci);
        }
    }
    if let Some(v) = owner.iter().position(Option::is_none) {
        return Err(CombinError::InvalidPartition(format!(
            "vertex {v} is not covered"
        )));
    }
    let labels: Vec<String> = classes
        .iter()
        .map(|class| {
            class
                .iter()
                .map(|&v| g.labels()[v as usize].clone())
                .collect::<Vec<_>>()
                .join("+")
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if g.adjacent(i, j) {
                let (ci, cj) = (owner[i].unwrap(), owner[j].unwrap());
                if ci != cj {
                    edges.push((ci, cj));
                }
            }
        }
    }
    CompatibilityGraph::from_edges(labels, &edges)
}

pub(crate) fn factorial(n: usize) -> Int {
    (1..=n).fold(Int::from(1), |acc, k| acc * Int::from(k))
}

#[cfg(test)]
pub(crate) mod graph_fixtures {
    use super::*;

    pub fn named(n: usize, edges: &[(usize, usize)]) -> CompatibilityGraph {
        let labels = (0..n).map(|i| format!("v{i}")).collect();
        CompatibilityGraph::from_edges(labels, edges).unwrap()
    }

    pub fn petersen() -> CompatibilityGraph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        named(10, &edges)
    }

    pub fn complete(n: usize) -> CompatibilityGraph {
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        named(n, &edges)
    }

    pub fn cycle(n: usize) -> CompatibilityGraph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        named(n, &edges)
    }
}
