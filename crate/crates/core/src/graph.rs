//! Simple undirected graphs, rooted graphs and their text format.
//!
//! The text format is line oriented: a header `n m`, then `m` lines `u v`
//! with `0 <= u < v < n`, and for rooted graphs a trailing `roots r1 r2 ...`
//! line. Every line is LF-terminated.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Graphs up to this order also carry a dense adjacency bit matrix.
const DENSE_LIMIT: usize = 8192;

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
    bits: Option<Vec<u64>>,
    words: usize,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph, rejecting loops, out-of-range endpoints and repeated edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {u}-{v} out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!("repeated edge {}-{}", e.0, e.1)));
            }
            list.push(e);
        }
        Ok(Self::from_sorted_unique(n, list))
    }

    /// Like [`Graph::new`] but silently drops repeated edges.
    pub fn from_edges_dedup(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut set = HashSet::new();
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidGraph(format!("bad edge {u}-{v} for {n} vertices")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self::from_sorted_unique(n, set))
    }

    /// Caller guarantees normalised (u < v), in-range, loop-free, distinct edges.
    pub(crate) fn from_sorted_unique(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut edges: Vec<_> = edges.into_iter().collect();
        edges.sort_unstable();
        debug_assert!(edges.windows(2).all(|w| w[0] != w[1]));
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            debug_assert!(u < v && v < n);
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let words = n.div_ceil(64);
        let bits = (n <= DENSE_LIMIT).then(|| {
            let mut bits = vec![0u64; n * words];
            for &(u, v) in &edges {
                bits[u * words + v / 64] |= 1 << (v % 64);
                bits[v * words + u / 64] |= 1 << (u % 64);
            }
            bits
        });
        Graph {
            n,
            edges,
            adj,
            bits,
            words,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_unique(n, [])
    }

    pub fn complete(n: usize) -> Self {
        Self::from_sorted_unique(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    /// Path on `n` vertices `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Self::from_sorted_unique(n, (1..n).map(|v| (v - 1, v)))
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        Self::from_sorted_unique(n, (1..n).map(|v| (v - 1, v)).chain([(0, n - 1)]))
    }

    /// `K_{s,t}` with parts `0..s` and `s..s+t`.
    pub fn complete_bipartite(s: usize, t: usize) -> Self {
        Self::from_sorted_unique(s + t, (0..s).flat_map(|u| (s..s + t).map(move |v| (u, v))))
    }

    /// `K_{1,s}` with centre 0.
    pub fn star(s: usize) -> Self {
        Self::complete_bipartite(1, s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Sorted neighbour list.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        match &self.bits {
            Some(bits) => bits[u * self.words + v / 64] >> (v % 64) & 1 == 1,
            None => {
                let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
                    (u, v)
                } else {
                    (v, u)
                };
                self.adj[a].binary_search(&b).is_ok()
            }
        }
    }

    /// Induced subgraph on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[Vertex]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = self.edges.iter().filter_map(|&(u, v)| {
            let (a, b) = (index[u], index[v]);
            (a != usize::MAX && b != usize::MAX).then(|| (a.min(b), a.max(b)))
        });
        Graph::from_sorted_unique(vertices.len(), edges)
    }

    /// Same vertex set, restricted to the edges for which `keep` holds.
    pub fn filter_edges(&self, mut keep: impl FnMut(Vertex, Vertex) -> bool) -> Graph {
        let edges: Vec<_> = self.edges.iter().copied().filter(|&(u, v)| keep(u, v)).collect();
        Graph::from_sorted_unique(self.n, edges)
    }

    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Result<Graph> {
        Graph::new(self.n, self.edges.iter().copied().chain([(u, v)]))
    }

    pub fn is_edge_subset_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges.iter().all(|&(u, v)| other.has_edge(u, v))
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    pub fn is_forest(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n, self.m()).unwrap();
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    /// Parses the unrooted text format; a `roots` line is rejected.
    pub fn from_text(text: &str) -> Result<Graph> {
        let (g, roots) = parse_text(text)?;
        if roots.is_some() {
            return Err(Error::Parse {
                line: 0,
                msg: "unexpected roots line for an unrooted graph".into(),
            });
        }
        Ok(g)
    }
}

fn parse_text(text: &str) -> Result<(Graph, Option<Vec<Vertex>>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let parse_err = |line, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };
    let number = |line, tok: &str| -> Result<usize> {
        tok.parse()
            .map_err(|_| parse_err(line, &format!("expected a non-negative integer, got {tok:?}")))
    };

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(parse_err(hline, "header must be `n m`"));
    }
    let n = number(hline, head[0])?;
    let m = number(hline, head[1])?;

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, l) = lines
            .next()
            .ok_or_else(|| parse_err(hline, "fewer edge lines than declared"))?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(parse_err(line, "edge line must be `u v`"));
        }
        let (u, v) = (number(line, toks[0])?, number(line, toks[1])?);
        if !(u < v && v < n) {
            return Err(parse_err(line, "edge must satisfy 0 <= u < v < n"));
        }
        edges.push((u, v));
    }
    let graph = Graph::new(n, edges).map_err(|e| parse_err(hline, &e.to_string()))?;

    let mut roots = None;
    if let Some((line, l)) = lines.next() {
        let mut toks = l.split_whitespace();
        if toks.next() != Some("roots") {
            return Err(parse_err(line, "trailing content after edge list"));
        }
        roots = Some(toks.map(|t| number(line, t)).collect::<Result<Vec<_>>>()?);
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "trailing content after roots line"));
    }
    Ok((graph, roots))
}

/// A graph with an ordered list of distinct roots forming a proper subset of the vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedGraph {
    graph: Graph,
    roots: Vec<Vertex>,
}

impl RootedGraph {
    pub fn new(graph: Graph, roots: Vec<Vertex>) -> Result<Self> {
        let mut seen = vec![false; graph.n()];
        for &r in &roots {
            if r >= graph.n() {
                return Err(Error::InvalidGraph(format!("root {r} out of range")));
            }
            if std::mem::replace(&mut seen[r], true) {
                return Err(Error::InvalidGraph(format!("root {r} repeated")));
            }
        }
        if roots.len() >= graph.n() {
            return Err(Error::NoFreeVertex);
        }
        Ok(RootedGraph { graph, roots })
    }

    /// Skips the proper-subset check; used for intermediate objects such as
    /// induced pieces of a quotient, where every vertex may be a root.
    pub(crate) fn new_unchecked(graph: Graph, roots: Vec<Vertex>) -> Self {
        RootedGraph { graph, roots }
    }

    pub fn unrooted(graph: Graph) -> Self {
        RootedGraph {
            graph,
            roots: Vec::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn roots(&self) -> &[Vertex] {
        &self.roots
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.graph.m()
    }

    pub fn is_root(&self, v: Vertex) -> bool {
        self.roots.contains(&v)
    }

    pub fn non_roots(&self) -> Vec<Vertex> {
        let mut is_root = vec![false; self.n()];
        for &r in &self.roots {
            is_root[r] = true;
        }
        (0..self.n()).filter(|&v| !is_root[v]).collect()
    }

    /// Vertex colours that pin every root individually: root `i` gets `i + 1`,
    /// non-roots get 0.
    pub fn pointwise_colors(&self) -> Vec<u32> {
        let mut colors = vec![0; self.n()];
        for (i, &r) in self.roots.iter().enumerate() {
            colors[r] = i as u32 + 1;
        }
        colors
    }

    /// Vertex colours that only distinguish roots from non-roots.
    pub fn set_colors(&self) -> Vec<u32> {
        let mut colors = vec![0; self.n()];
        for &r in &self.roots {
            colors[r] = 1;
        }
        colors
    }

    pub fn to_text(&self) -> String {
        let mut out = self.graph.to_text();
        out.push_str("roots");
        for r in &self.roots {
            write!(out, " {r}").unwrap();
        }
        out.push('\n');
        out
    }

    /// Parses the text format; a missing `roots` line means no roots.
    pub fn from_text(text: &str) -> Result<RootedGraph> {
        let (graph, roots) = parse_text(text)?;
        RootedGraph::new(graph, roots.unwrap_or_default())
    }
}

/// Named rooted trees used throughout the tests and experiments.
pub mod fixtures {
    use super::*;

    /// `K_{1,s}` rooted at its leaves (centre 0).
    pub fn star_at_leaves(s: usize) -> RootedGraph {
        RootedGraph::new(Graph::star(s), (1..=s).collect()).unwrap()
    }

    /// Path on `k` vertices rooted at both endpoints.
    pub fn path_at_ends(k: usize) -> RootedGraph {
        assert!(k >= 3);
        RootedGraph::new(Graph::path(k), vec![0, k - 1]).unwrap()
    }

    /// `K_{1,3}` with one edge subdivided, rooted at its three leaves.
    /// Centre 0, subdivision vertex 1, leaves 2, 3, 4 (leaf 4 hangs off 1).
    pub fn subdivided_claw() -> RootedGraph {
        let g = Graph::new(5, [(0, 1), (0, 2), (0, 3), (1, 4)]).unwrap();
        RootedGraph::new(g, vec![2, 3, 4]).unwrap()
    }

    /// Spider with `legs` legs of length two, rooted at the leg ends.
    pub fn spider_at_feet(legs: usize) -> RootedGraph {
        let n = 1 + 2 * legs;
        let edges = (0..legs).flat_map(|i| [(0, 1 + 2 * i), (1 + 2 * i, 2 + 2 * i)]);
        let g = Graph::new(n, edges).unwrap();
        RootedGraph::new(g, (0..legs).map(|i| 2 + 2 * i).collect()).unwrap()
    }

    /// Double star: two adjacent centres 0 and 1, with `a` and `b` leaves
    /// respectively, rooted at all leaves.
    pub fn double_star_at_leaves(a: usize, b: usize) -> RootedGraph {
        let edges = std::iter::once((0, 1))
            .chain((0..a).map(|i| (0, 2 + i)))
            .chain((0..b).map(|i| (1, 2 + a + i)));
        let g = Graph::new(2 + a + b, edges).unwrap();
        RootedGraph::new(g, (2..2 + a + b).collect()).unwrap()
    }

    /// The trees used by the edge-bound suite.
    pub fn tree_suite() -> Vec<(&'static str, RootedGraph)> {
        vec![
            ("star3", star_at_leaves(3)),
            ("path4", path_at_ends(4)),
            ("subdivided-claw", subdivided_claw()),
            ("double-star-2-2", double_star_at_leaves(2, 2)),
            ("spider3", spider_at_feet(3)),
        ]
    }
}
