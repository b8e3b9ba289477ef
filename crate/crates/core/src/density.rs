//! Exact density functionals: rooted density, density `m(H)` and 2-density.
//!
//! All values are exact rationals; maximisation and minimisation run over
//! explicit vertex subsets, so these are for desk-scale graphs only.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graph::{Graph, RootedGraph, Vertex};

pub type Rational = Ratio<i64>;

/// Largest number of free vertices a subset enumeration will accept.
pub const SUBSET_LIMIT: usize = 24;

/// An optimal value together with the vertex set attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Density {
    pub value: Rational,
    pub witness: Vec<Vertex>,
}

fn check_budget(k: usize) -> Result<()> {
    if k > SUBSET_LIMIT {
        return Err(Error::budget(
            "subset enumeration (vertices)",
            k as u64,
            SUBSET_LIMIT as u64,
        ));
    }
    Ok(())
}

/// Number of edges of `g` with at least one endpoint in `set`.
pub fn edges_meeting(g: &Graph, set: &[Vertex]) -> usize {
    let mut inside = vec![false; g.n()];
    for &v in set {
        inside[v] = true;
    }
    g.edges().iter().filter(|&&(u, v)| inside[u] || inside[v]).count()
}

/// Minimum of `e_S / |S|` over nonempty sets `S` of non-root vertices, where
/// `e_S` counts edges meeting `S`.
pub fn rooted_density(g: &RootedGraph) -> Result<Density> {
    let free = g.non_roots();
    if free.is_empty() {
        return Err(Error::NoFreeVertex);
    }
    check_budget(free.len())?;
    let mut slot = vec![usize::MAX; g.n()];
    for (i, &v) in free.iter().enumerate() {
        slot[v] = i;
    }
    let bit = |v: Vertex| if slot[v] == usize::MAX { 0u32 } else { 1 << slot[v] };
    let edge_masks: Vec<u32> = g
        .graph()
        .edges()
        .iter()
        .map(|&(u, v)| bit(u) | bit(v))
        .filter(|&m| m != 0)
        .collect();

    let (mut best_e, mut best_s, mut best_mask) = (u64::MAX, 1u64, 0u32);
    for mask in 1u32..(1u32 << free.len()) {
        let e = edge_masks.iter().filter(|&&em| em & mask != 0).count() as u64;
        let s = mask.count_ones() as u64;
        if e * best_s < best_e.saturating_mul(s) {
            (best_e, best_s, best_mask) = (e, s, mask);
        }
    }
    let witness = free
        .iter()
        .enumerate()
        .filter(|(i, _)| best_mask >> i & 1 == 1)
        .map(|(_, &v)| v)
        .collect();
    Ok(Density {
        value: Rational::new(best_e as i64, best_s as i64),
        witness,
    })
}

/// Whether the rooted density equals `e / (v - |R|)`.
pub fn is_balanced(g: &RootedGraph) -> Result<bool> {
    let rho = rooted_density(g)?;
    let free = (g.n() - g.roots().len()) as i64;
    Ok(rho.value == Rational::new(g.m() as i64, free))
}

fn adjacency_masks(h: &Graph) -> Vec<u32> {
    (0..h.n())
        .map(|v| h.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect()
}

fn induced_edges(adj: &[u32], mask: u32) -> u32 {
    let mut total = 0;
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        total += (adj[v] & mask).count_ones();
    }
    total / 2
}

fn mask_connected(adj: &[u32], mask: u32) -> bool {
    let start = mask & mask.wrapping_neg();
    let mut seen = start;
    let mut frontier = start;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & mask & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == mask
}

fn mask_vertices(mask: u32) -> Vec<Vertex> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// `max (e(F') - 1) / (v(F') - 2)` over subgraphs with at least two edges.
/// The witness is the vertex set of an optimal induced subgraph.
///
/// Connected candidates suffice unless `h` is a matching: a union `A + B`
/// with `A` connected on at least two edges never beats the larger of
/// `d2(A)` and `e(B) / v(B)`, and `e(B) / v(B) <= d2(B)` for connected `B`.
/// A matching gives `1/2` on any two of its edges.
pub fn two_density(h: &Graph) -> Result<Density> {
    if h.m() < 2 {
        return Err(Error::TooFewEdges(h.m()));
    }
    check_budget(h.n())?;
    let adj = adjacency_masks(h);
    let (mut best_num, mut best_den, mut best_mask) = (0i64, 1i64, 0u32);
    for mask in 1u32..(1u32 << h.n()) {
        let v = mask.count_ones() as i64;
        if v < 3 {
            continue;
        }
        let e = induced_edges(&adj, mask) as i64;
        if e < 2 {
            continue;
        }
        let (num, den) = (e - 1, v - 2);
        if (best_mask == 0 || num * best_den > best_num * den) && mask_connected(&adj, mask) {
            (best_num, best_den, best_mask) = (num, den, mask);
        }
    }
    if best_mask == 0 {
        let (a, b) = (h.edges()[0], h.edges()[1]);
        let mut witness = vec![a.0, a.1, b.0, b.1];
        witness.sort_unstable();
        return Ok(Density {
            value: Rational::new(1, 2),
            witness,
        });
    }
    Ok(Density {
        value: Rational::new(best_num, best_den),
        witness: mask_vertices(best_mask),
    })
}

/// `m(H) = max e(H') / v(H')` over nonempty subgraphs.
pub fn density_m(h: &Graph) -> Result<Density> {
    if h.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    check_budget(h.n())?;
    let adj = adjacency_masks(h);
    let (mut best_e, mut best_v, mut best_mask) = (0i64, 1i64, 1u32);
    for mask in 1u32..(1u32 << h.n()) {
        let v = mask.count_ones() as i64;
        let e = induced_edges(&adj, mask) as i64;
        if e * best_v > best_e * v {
            (best_e, best_v, best_mask) = (e, v, mask);
        }
    }
    Ok(Density {
        value: Rational::new(best_e, best_v),
        witness: mask_vertices(best_mask),
    })
}
