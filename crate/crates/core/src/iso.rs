//! Backtracking search for injective homomorphisms (embeddings) between small
//! pattern graphs and host graphs, with optional vertex colours and pinned
//! vertices. Isomorphism testing, automorphism counting and subgraph counting
//! are all built on top of it.

use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::graph::{Graph, Vertex};

/// One search problem: embed `pattern` into `host`.
pub struct Embedder<'a> {
    pattern: &'a Graph,
    host: &'a Graph,
    colors: Option<(&'a [u32], &'a [u32])>,
    fixed: Vec<(Vertex, Vertex)>,
}

struct Plan {
    order: Vec<Vertex>,
    anchor: Vec<Option<Vertex>>,
    back: Vec<Vec<Vertex>>,
}

impl<'a> Embedder<'a> {
    pub fn new(pattern: &'a Graph, host: &'a Graph) -> Self {
        Embedder {
            pattern,
            host,
            colors: None,
            fixed: Vec::new(),
        }
    }

    /// Only map pattern vertex `v` onto host vertices of the same colour.
    pub fn colors(mut self, pattern: &'a [u32], host: &'a [u32]) -> Self {
        assert_eq!(pattern.len(), self.pattern.n());
        assert_eq!(host.len(), self.host.n());
        self.colors = Some((pattern, host));
        self
    }

    /// Pin pattern vertex `p` to host vertex `h`.
    pub fn fix(mut self, pins: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        self.fixed.extend(pins);
        self
    }

    fn plan(&self) -> Plan {
        let n = self.pattern.n();
        let mut placed = vec![false; n];
        for &(p, _) in &self.fixed {
            placed[p] = true;
        }
        let mut order = Vec::new();
        let mut anchor = Vec::new();
        let mut back = Vec::new();
        for _ in 0..n - self.fixed.len() {
            // Most already-placed neighbours first, then highest degree.
            let v = (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let k = self.pattern.neighbors(v).iter().filter(|&&w| placed[w]).count();
                    (k, self.pattern.degree(v), std::cmp::Reverse(v))
                })
                .unwrap();
            let earlier: Vec<Vertex> = self
                .pattern
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| placed[w])
                .collect();
            let anchor_v = earlier.iter().copied().min_by_key(|&w| {
                self.fixed
                    .iter()
                    .find(|&&(p, _)| p == w)
                    .map(|&(_, h)| self.host.degree(h))
                    .unwrap_or(usize::MAX)
            });
            order.push(v);
            anchor.push(anchor_v);
            back.push(earlier);
            placed[v] = true;
        }
        Plan { order, anchor, back }
    }

    fn fixed_consistent(&self, map: &mut [Vertex], used: &mut [bool]) -> bool {
        for &(p, h) in &self.fixed {
            if p >= self.pattern.n() || h >= self.host.n() || used[h] || map[p] != usize::MAX {
                return false;
            }
            if let Some((pc, hc)) = self.colors {
                if pc[p] != hc[h] {
                    return false;
                }
            }
            map[p] = h;
            used[h] = true;
        }
        self.fixed.iter().all(|&(p, _)| {
            self.pattern
                .neighbors(p)
                .iter()
                .all(|&w| map[w] == usize::MAX || self.host.has_edge(map[p], map[w]))
        })
    }

    /// Calls `visit` with the full vertex map (indexed by pattern vertex) for
    /// every embedding; stops early when `visit` breaks.
    pub fn for_each(&self, mut visit: impl FnMut(&[Vertex]) -> ControlFlow<()>) -> ControlFlow<()> {
        if self.pattern.n() > self.host.n() {
            return ControlFlow::Continue(());
        }
        let mut map = vec![usize::MAX; self.pattern.n()];
        let mut used = vec![false; self.host.n()];
        if !self.fixed_consistent(&mut map, &mut used) {
            return ControlFlow::Continue(());
        }
        let plan = self.plan();
        self.search(&plan, 0, &mut map, &mut used, &mut visit)
    }

    fn search(
        &self,
        plan: &Plan,
        depth: usize,
        map: &mut [Vertex],
        used: &mut [bool],
        visit: &mut impl FnMut(&[Vertex]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if depth == plan.order.len() {
            return visit(map);
        }
        let v = plan.order[depth];
        let need = self.pattern.degree(v);
        let mut try_candidate = |c: Vertex, map: &mut [Vertex], used: &mut [bool]| {
            if used[c] || self.host.degree(c) < need {
                return ControlFlow::Continue(());
            }
            if let Some((pc, hc)) = self.colors {
                if pc[v] != hc[c] {
                    return ControlFlow::Continue(());
                }
            }
            if !plan.back[depth].iter().all(|&w| self.host.has_edge(c, map[w])) {
                return ControlFlow::Continue(());
            }
            map[v] = c;
            used[c] = true;
            let flow = self.search(plan, depth + 1, map, used, visit);
            used[c] = false;
            map[v] = usize::MAX;
            flow
        };
        match plan.anchor[depth] {
            Some(a) => {
                for &c in self.host.neighbors(map[a]) {
                    try_candidate(c, map, used)?;
                }
            }
            None => {
                for c in 0..self.host.n() {
                    try_candidate(c, map, used)?;
                }
            }
        }
        ControlFlow::Continue(())
    }

    pub fn count(&self) -> u64 {
        let mut count = 0u64;
        let _ = self.for_each(|_| {
            count += 1;
            ControlFlow::Continue(())
        });
        count
    }

    pub fn first(&self) -> Option<Vec<Vertex>> {
        let mut found = None;
        let _ = self.for_each(|m| {
            found = Some(m.to_vec());
            ControlFlow::Break(())
        });
        found
    }

    pub fn exists(&self) -> bool {
        self.first().is_some()
    }
}

/// Number of colour-preserving automorphisms.
pub fn automorphism_count(g: &Graph, colors: Option<&[u32]>) -> u64 {
    let e = Embedder::new(g, g);
    match colors {
        Some(c) => e.colors(c, c).count(),
        None => e.count(),
    }
}

/// All colour-preserving automorphisms as vertex permutations.
pub fn automorphisms(g: &Graph, colors: Option<&[u32]>) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let e = Embedder::new(g, g);
    let e = match colors {
        Some(c) => e.colors(c, c),
        None => e,
    };
    let _ = e.for_each(|m| {
        out.push(m.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// Cheap isomorphism invariant: order, size and the sorted multiset of
/// per-vertex (colour, degree, neighbour-degree-sum, triangles) tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    n: usize,
    m: usize,
    vertices: Vec<(u32, usize, usize, usize)>,
}

pub fn signature(g: &Graph, colors: &[u32]) -> Signature {
    let mut vertices: Vec<_> = (0..g.n())
        .map(|v| {
            let nbrs = g.neighbors(v);
            let deg_sum = nbrs.iter().map(|&w| g.degree(w)).sum();
            let mut tri = 0;
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if g.has_edge(a, b) {
                        tri += 1;
                    }
                }
            }
            (colors[v], nbrs.len(), deg_sum, tri)
        })
        .collect();
    vertices.sort_unstable();
    Signature {
        n: g.n(),
        m: g.m(),
        vertices,
    }
}

/// Colour-preserving isomorphism test.
pub fn are_isomorphic(a: &Graph, ca: &[u32], b: &Graph, cb: &[u32]) -> bool {
    if a.n() != b.n() || a.m() != b.m() {
        return false;
    }
    if signature(a, ca) != signature(b, cb) {
        return false;
    }
    // An injective homomorphism between graphs of equal order and size is an isomorphism.
    Embedder::new(a, b).colors(ca, cb).exists()
}

/// A set of coloured graphs kept up to colour-preserving isomorphism.
#[derive(Debug)]
pub struct IsoClasses<T> {
    buckets: HashMap<Signature, Vec<usize>>,
    items: Vec<(Graph, Vec<u32>, T)>,
}

impl<T> Default for IsoClasses<T> {
    fn default() -> Self {
        IsoClasses {
            buckets: HashMap::new(),
            items: Vec::new(),
        }
    }
}

impl<T> IsoClasses<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index of the class containing `(g, colors)`, if any.
    pub fn find(&self, g: &Graph, colors: &[u32]) -> Option<usize> {
        let sig = signature(g, colors);
        self.find_with(&sig, g, colors)
    }

    fn find_with(&self, sig: &Signature, g: &Graph, colors: &[u32]) -> Option<usize> {
        self.buckets.get(sig)?.iter().copied().find(|&i| {
            let (h, ch, _) = &self.items[i];
            Embedder::new(g, h).colors(colors, ch).exists()
        })
    }

    /// Inserts unless an isomorphic copy is present. Returns the class index
    /// and whether it was new.
    pub fn insert(&mut self, g: Graph, colors: Vec<u32>, payload: T) -> (usize, bool) {
        let sig = signature(&g, &colors);
        if let Some(i) = self.find_with(&sig, &g, &colors) {
            return (i, false);
        }
        let i = self.items.len();
        self.items.push((g, colors, payload));
        self.buckets.entry(sig).or_default().push(i);
        (i, true)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, i: usize) -> &(Graph, Vec<u32>, T) {
        &self.items[i]
    }

    pub fn get_mut(&mut self, i: usize) -> &mut T {
        &mut self.items[i].2
    }

    pub fn into_items(self) -> Vec<(Graph, Vec<u32>, T)> {
        self.items
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Graph, Vec<u32>, T)> {
        self.items.iter()
    }
}
