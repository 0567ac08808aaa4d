//! Permutations on a finite point set and a deterministic
//! Schreier–Sims engine: exact group order and orbit partitions from a
//! generator list.
//!
//! The stabilizer chain uses the natural base 0, 1, 2, …: level `i`
//! holds generators fixing all points below `i`, the orbit of `i` under
//! them, and a transversal. The chain stops as soon as the generator
//! supply is exhausted; the group order is the product of the orbit
//! lengths. Construction is deterministic (fixed BFS and generator
//! order), so identical generator lists give identical chains.

use crate::exact::Int;
use once_cell::sync::OnceCell;
use std::collections::{HashMap, HashSet};

/// A permutation stored as its image table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    /// Panics unless `images` is a bijection on 0..len.
    pub fn from_images(images: Vec<u32>) -> Self {
        let mut seen = vec![false; images.len()];
        for &im in &images {
            assert!(
                (im as usize) < images.len() && !seen[im as usize],
                "image table is not a bijection"
            );
            seen[im as usize] = true;
        }
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn image_table(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i as u32 == im)
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im as usize] = i as u32;
        }
        Permutation { images }
    }
}

struct Level {
    /// Orbit of the base point, in discovery order (base first).
    orbit: Vec<u32>,
    /// point -> permutation mapping the base point to it.
    transversal: HashMap<u32, Permutation>,
}

struct Chain {
    levels: Vec<Level>,
}

/// A permutation group given by generators, with a lazily built
/// stabilizer chain over the natural base.
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceCell<Chain>,
}

impl PermutationGroup {
    pub fn trivial(degree: usize) -> Self {
        PermutationGroup { degree, generators: Vec::new(), chain: OnceCell::new() }
    }

    pub fn from_generators(degree: usize, generators: Vec<Permutation>) -> Self {
        for g in &generators {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
        }
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        PermutationGroup { degree, generators, chain: OnceCell::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Add a generator, invalidating the memoized chain.
    pub fn add_generator(&mut self, p: Permutation) {
        assert_eq!(p.degree(), self.degree, "generator degree mismatch");
        if !p.is_identity() {
            self.generators.push(p);
            self.chain = OnceCell::new();
        }
    }

    fn chain(&self) -> &Chain {
        self.chain.get_or_init(|| build_chain(self.degree, &self.generators))
    }

    /// Exact group order: the product of the fundamental orbit lengths.
    pub fn order(&self) -> Int {
        self.chain()
            .levels
            .iter()
            .fold(Int::from(1), |acc, level| acc * Int::from(level.orbit.len()))
    }

    /// Is `target` in the orbit of point `level` under the stabilizer
    /// of all points below `level`?
    pub fn prefix_orbit_contains(&self, level: usize, target: u32) -> bool {
        match self.chain().levels.get(level) {
            Some(l) => l.orbit.contains(&target),
            None => level as u32 == target,
        }
    }

    /// Does the group contain the permutation? (Sift through the chain.)
    pub fn contains(&self, p: &Permutation) -> bool {
        assert_eq!(p.degree(), self.degree, "degree mismatch");
        let mut residue = p.clone();
        for (base, level) in self.chain().levels.iter().enumerate() {
            let image = residue.apply(base as u32);
            match level.transversal.get(&image) {
                Some(rep) => residue = rep.inverse().compose(&residue),
                None => return false,
            }
        }
        residue.is_identity()
    }
}

fn build_chain(degree: usize, generators: &[Permutation]) -> Chain {
    let mut levels = Vec::new();
    let mut current: Vec<Permutation> = Vec::new();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for g in generators {
        if !g.is_identity() && seen.insert(g.images.clone()) {
            current.push(g.clone());
        }
    }
    for base in 0..degree as u32 {
        if current.is_empty() {
            break;
        }
        let (orbit, transversal) = orbit_with_transversal(degree, &current, base);
        let mut next: Vec<Permutation> = Vec::new();
        let mut next_seen: HashSet<Vec<u32>> = HashSet::new();
        for point in &orbit {
            let rep = &transversal[point];
            for g in &current {
                let target_rep = &transversal[&g.apply(*point)];
                let schreier = target_rep.inverse().compose(g).compose(rep);
                if !schreier.is_identity() && next_seen.insert(schreier.images.clone()) {
                    next.push(schreier);
                }
            }
        }
        levels.push(Level { orbit, transversal });
        current = next;
    }
    Chain { levels }
}

fn orbit_with_transversal(
    degree: usize,
    generators: &[Permutation],
    base: u32,
) -> (Vec<u32>, HashMap<u32, Permutation>) {
    let mut orbit = vec![base];
    let mut transversal = HashMap::new();
    transversal.insert(base, Permutation::identity(degree));
    let mut frontier = 0;
    while frontier < orbit.len() {
        let point = orbit[frontier];
        frontier += 1;
        for g in generators {
            let image = g.apply(point);
            if !transversal.contains_key(&image) {
                let rep = g.compose(&transversal[&point]);
                transversal.insert(image, rep);
                orbit.push(image);
            }
        }
    }
    (orbit, transversal)
}

/// Exact order of the group generated by the given permutations.
pub fn group_order(group: &PermutationGroup) -> Int {
    group.order()
}

/// Orbit partition of the given points: two points share a class iff
/// some group element connects them (possibly through points outside
/// the list). Classes are sorted internally and ordered by least
/// member.
pub fn orbits(group: &PermutationGroup, points: &[u32]) -> Vec<Vec<u32>> {
    for &p in points {
        assert!((p as usize) < group.degree(), "point {p} outside the domain");
    }
    let member: HashSet<u32> = points.iter().copied().collect();
    let mut assigned: HashMap<u32, usize> = HashMap::new();
    let mut classes: Vec<Vec<u32>> = Vec::new();
    let mut sorted: Vec<u32> = member.iter().copied().collect();
    sorted.sort_unstable();
    for &start in &sorted {
        if assigned.contains_key(&start) {
            continue;
        }
        // full-domain closure so orbits passing through outside points merge
        let mut reached = vec![false; group.degree()];
        reached[start as usize] = true;
        let mut queue = vec![start];
        let mut frontier = 0;
        while frontier < queue.len() {
            let point = queue[frontier];
            frontier += 1;
            for g in group.generators() {
                for image in [g.apply(point), g.inverse().apply(point)] {
                    if !reached[image as usize] {
                        reached[image as usize] = true;
                        queue.push(image);
                    }
                }
            }
        }
        let class_index = classes.len();
        let class: Vec<u32> = sorted
            .iter()
            .copied()
            .filter(|p| reached[*p as usize])
            .collect();
        for &p in &class {
            assigned.insert(p, class_index);
        }
        classes.push(class);
    }
    classes
}
