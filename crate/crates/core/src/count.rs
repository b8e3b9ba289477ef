//! Exact subgraph counting.
//!
//! A *copy* of a rooted graph `f` extending a root placement is the edge set
//! of an embedding of `f` that sends the roots to the placement pointwise; two
//! embeddings with the same edge set are the same copy.

use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::graph::{Graph, RootedGraph, Vertex};
use crate::iso::{automorphism_count, Embedder};

/// Number of subgraphs of `g` isomorphic to `h`.
pub fn count_subgraph_copies(g: &Graph, h: &Graph) -> u64 {
    if h.n() > g.n() {
        return 0;
    }
    let embeddings = Embedder::new(h, g).count();
    embeddings / automorphism_count(h, None)
}

/// Whether `g` contains a subgraph isomorphic to `h`.
pub fn contains_subgraph(g: &Graph, h: &Graph) -> bool {
    Embedder::new(h, g).exists()
}

fn image_edges(f: &Graph, map: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    let mut edges: Vec<_> = f
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (map[u], map[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    edges
}

/// The distinct copies of `f` in `g` extending `placement` (root `i` of `f`
/// goes to `placement[i]`), one vertex map per copy, in discovery order.
pub fn rooted_copies(g: &Graph, f: &RootedGraph, placement: &[Vertex]) -> Vec<Vec<Vertex>> {
    assert_eq!(placement.len(), f.roots().len(), "placement must cover every root");
    let mut seen = HashSet::new();
    let mut copies = Vec::new();
    let pins = f.roots().iter().copied().zip(placement.iter().copied());
    let _ = Embedder::new(f.graph(), g).fix(pins).for_each(|map| {
        if seen.insert(image_edges(f.graph(), map)) {
            copies.push(map.to_vec());
        }
        ControlFlow::Continue(())
    });
    copies
}

/// Number of copies of `f` in `g` extending the root placement.
pub fn count_rooted_extensions(g: &Graph, f: &RootedGraph, placement: &[Vertex]) -> u64 {
    rooted_copies(g, f, placement).len() as u64
}

/// Whether every non-root vertex of `f` has an edge. When it does, two
/// root-fixing embeddings with the same edge set differ by a root-fixing
/// automorphism, so copies = embeddings / |Aut_R(f)|.
fn copies_are_orbit_counts(f: &RootedGraph) -> bool {
    f.non_roots().iter().all(|&v| f.graph().degree(v) > 0)
}

/// Counts of copies of `f` per injective root placement, over all placements
/// with at least one copy.
pub struct ExtensionCounts {
    n: usize,
    r: usize,
    store: Store,
}

enum Store {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u64>),
}

/// Placement spaces up to this size are counted in a flat array.
const DENSE_SPACE: u128 = 1 << 25;

impl ExtensionCounts {
    pub fn get(&self, placement: &[Vertex]) -> u64 {
        let idx = self.index(placement);
        match &self.store {
            Store::Dense(v) => v[idx as usize] as u64,
            Store::Sparse(m) => m.get(&idx).copied().unwrap_or(0),
        }
    }

    fn index(&self, placement: &[Vertex]) -> u64 {
        placement.iter().fold(0u64, |acc, &x| acc * self.n as u64 + x as u64)
    }

    fn decode(&self, mut idx: u64) -> Vec<Vertex> {
        let mut out = vec![0; self.r];
        for slot in out.iter_mut().rev() {
            *slot = (idx % self.n as u64) as Vertex;
            idx /= self.n as u64;
        }
        out
    }

    fn nonzero(&self) -> Box<dyn Iterator<Item = (u64, u64)> + '_> {
        match &self.store {
            Store::Dense(v) => Box::new(
                v.iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(i, &c)| (i as u64, c as u64)),
            ),
            Store::Sparse(m) => {
                let mut items: Vec<_> = m.iter().filter(|(_, &c)| c > 0).map(|(&k, &c)| (k, c)).collect();
                items.sort_unstable();
                Box::new(items.into_iter())
            }
        }
    }

    /// `(placement, copies)` pairs sorted by placement.
    pub fn entries(&self) -> Vec<(Vec<Vertex>, u64)> {
        self.nonzero().map(|(k, c)| (self.decode(k), c)).collect()
    }

    /// Placements with more than `threshold` copies, sorted.
    pub fn above(&self, threshold: u64) -> Vec<(Vec<Vertex>, u64)> {
        self.nonzero()
            .filter(|&(_, c)| c > threshold)
            .map(|(k, c)| (self.decode(k), c))
            .collect()
    }

    pub fn max(&self) -> u64 {
        self.nonzero().map(|(_, c)| c).max().unwrap_or(0)
    }

    /// Histogram `copies -> number of placements` over placements with a copy.
    pub fn histogram(&self) -> Vec<(u64, u64)> {
        let mut h: HashMap<u64, u64> = HashMap::new();
        for (_, c) in self.nonzero() {
            *h.entry(c).or_default() += 1;
        }
        let mut h: Vec<_> = h.into_iter().collect();
        h.sort_unstable();
        h
    }
}

/// Default bound on the placement space `n^r`.
pub const DEFAULT_PLACEMENT_CAP: u128 = 1_000_000_000_000;

/// Copies of `f` per root placement in `g`, computed by enumerating every
/// embedding once and bucketing it by where the roots land. `cap` bounds
/// `n^r`, the size of the placement space.
pub fn rooted_extension_counts(g: &Graph, f: &RootedGraph, cap: u128) -> Result<ExtensionCounts> {
    let r = f.roots().len();
    let space = (g.n() as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if space > cap {
        return Err(Error::budget("root placements n^r", space, cap));
    }
    let n = g.n().max(1);
    let roots = f.roots();
    let key = |map: &[Vertex]| roots.iter().fold(0u64, |acc, &x| acc * n as u64 + map[x] as u64);
    let store = if copies_are_orbit_counts(f) {
        let aut = automorphism_count(f.graph(), Some(&f.pointwise_colors()));
        if space <= DENSE_SPACE {
            let mut v = vec![0u32; space as usize];
            let _ = Embedder::new(f.graph(), g).for_each(|map| {
                v[key(map) as usize] += 1;
                ControlFlow::Continue(())
            });
            if aut > 1 {
                v.iter_mut().for_each(|c| *c /= aut as u32);
            }
            Store::Dense(v)
        } else {
            let mut m: HashMap<u64, u64> = HashMap::new();
            let _ = Embedder::new(f.graph(), g).for_each(|map| {
                *m.entry(key(map)).or_default() += 1;
                ControlFlow::Continue(())
            });
            m.values_mut().for_each(|c| *c /= aut);
            Store::Sparse(m)
        }
    } else {
        let mut sets: HashMap<u64, HashSet<Vec<(Vertex, Vertex)>>> = HashMap::new();
        let _ = Embedder::new(f.graph(), g).for_each(|map| {
            sets.entry(key(map)).or_default().insert(image_edges(f.graph(), map));
            ControlFlow::Continue(())
        });
        Store::Sparse(sets.into_iter().map(|(k, s)| (k, s.len() as u64)).collect())
    };
    Ok(ExtensionCounts { n, r, store })
}
