//! Maximal-clique enumeration: pivoted Bron–Kerbosch over a degeneracy
//! ordering of the vertices. Output is canonical: each clique sorted
//! ascending, the clique list sorted lexicographically.

use super::CompatibilityGraph;

/// All maximal cliques of the graph (an isolated vertex is a maximal
/// clique of size one). Deterministic canonical output.
pub fn maximal_cliques(g: &CompatibilityGraph) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let mut out: Vec<u128> = Vec::new();
    if n == 0 {
        return Vec::new();
    }
    let order = degeneracy_order(g);
    let mut earlier: u128 = 0;
    for &v in &order {
        let nv = g.neighbors_mask(v as usize);
        let p = nv & !earlier & !(1 << v);
        let x = nv & earlier;
        expand(g, 1 << v, p, x, &mut out);
        earlier |= 1 << v;
    }
    let mut cliques: Vec<Vec<u32>> = out
        .into_iter()
        .map(|mask: u128| bits(mask).collect())
        .collect();
    cliques.sort();
    cliques
}

/// Bron–Kerbosch with pivot: extend clique `r` using candidates `p`,
/// excluding `x`.
fn expand(g: &CompatibilityGraph, r: u128, mut p: u128, mut x: u128, out: &mut Vec<u128>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    let pivot = bits(p | x)
        .max_by_key(|&u| ((g.neighbors_mask(u as usize) & p).count_ones(), u32::MAX - u))
        .expect("p | x is nonempty");
    let branch = p & !g.neighbors_mask(pivot as usize);
    for v in bits(branch) {
        let nv = g.neighbors_mask(v as usize);
        expand(g, r | 1 << v, p & nv, x & nv, out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

/// Repeatedly remove a minimum-degree vertex (least index on ties).
fn degeneracy_order(g: &CompatibilityGraph) -> Vec<u32> {
    let n = g.vertex_count();
    let mut remaining: u128 = if n == 128 { !0 } else { (1 << n) - 1 };
    let mut order = Vec::with_capacity(n);
    while remaining != 0 {
        let v = bits(remaining)
            .min_by_key(|&v| {
                (
                    (g.neighbors_mask(v as usize) & remaining).count_ones(),
                    v,
                )
            })
            .expect("remaining is nonempty");
        order.push(v);
        remaining &= !(1 << v);
    }
    order
}

fn bits(mut mask: u128) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros();
            mask &= mask - 1;
            Some(v)
        }
    })
}
