//! Brute-force oracles and generators shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treepow::iso::IsoClasses;
use treepow::{Graph, LocalMap, Rational, RootedGraph, Vertex};

/// Minimum of (edges meeting S) / |S| over nonempty non-root sets, by
/// listing every subset and counting edges directly.
pub fn naive_rooted_density(g: &RootedGraph) -> Rational {
    let free = g.non_roots();
    let mut best: Option<Rational> = None;
    for mask in 1u32..(1 << free.len()) {
        let set: Vec<Vertex> = (0..free.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| free[i])
            .collect();
        let e = g
            .graph()
            .edges()
            .iter()
            .filter(|(u, v)| set.contains(u) || set.contains(v))
            .count();
        let r = Rational::new(e as i64, set.len() as i64);
        best = Some(best.map_or(r, |b| b.min(r)));
    }
    best.expect("at least one free vertex")
}

/// Number of injective maps V(h) -> V(g) sending edges to edges, by trying
/// every injective map.
pub fn naive_embeddings(g: &Graph, h: &Graph) -> u64 {
    fn rec(g: &Graph, h: &Graph, i: usize, map: &mut Vec<Vertex>, used: &mut Vec<bool>) -> u64 {
        if i == h.n() {
            let ok = h.edges().iter().all(|&(u, v)| g.has_edge(map[u], map[v]));
            return ok as u64;
        }
        let mut total = 0;
        for w in 0..g.n() {
            if !used[w] {
                used[w] = true;
                map.push(w);
                total += rec(g, h, i + 1, map, used);
                map.pop();
                used[w] = false;
            }
        }
        total
    }
    rec(g, h, 0, &mut Vec::new(), &mut vec![false; g.n()])
}

/// Random forest on `n` vertices: each vertex after the first attaches to a
/// uniformly chosen earlier vertex with probability 0.8.
pub fn random_forest<R: Rng>(n: usize, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        if rng.gen::<f64>() < 0.8 {
            edges.push((rng.gen_range(0..v), v));
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Random rooted forest with 2..=max_n vertices; each vertex is a root with
/// probability 0.3, always leaving at least one non-root.
pub fn random_rooted_forest<R: Rng>(max_n: usize, rng: &mut R) -> RootedGraph {
    let n = rng.gen_range(2..=max_n);
    let g = random_forest(n, rng);
    let mut roots: Vec<Vertex> = (0..n).filter(|_| rng.gen::<f64>() < 0.3).collect();
    if roots.len() == n {
        roots.pop();
    }
    RootedGraph::new(g, roots).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All forests on `n` vertices up to isomorphism, from parent arrays.
pub fn all_forests(n: usize) -> Vec<Graph> {
    let mut classes: IsoClasses<()> = IsoClasses::new();
    let mut parent = vec![usize::MAX; n];
    fn rec(v: usize, parent: &mut Vec<usize>, classes: &mut IsoClasses<()>) {
        let n = parent.len();
        if v == n {
            let edges = (0..n).filter(|&u| parent[u] != usize::MAX).map(|u| (parent[u], u));
            let g = Graph::new(n, edges).unwrap();
            let c = vec![0; n];
            classes.insert(g, c, ());
            return;
        }
        for p in std::iter::once(usize::MAX).chain(0..v) {
            parent[v] = p;
            rec(v + 1, parent, classes);
        }
    }
    rec(0, &mut parent, &mut classes);
    classes.into_items().into_iter().map(|(g, _, _)| g).collect()
}

/// Checks a good set from scratch against the target vertex set `x`:
/// non-roots, mapped bijectively onto `x`, injective on the edges meeting
/// the set, each landing on an edge meeting `x`. Returns the number of
/// source edges meeting the set.
pub fn check_good_set(map: &LocalMap, set: &[Vertex], x: &[Vertex]) -> Result<usize, String> {
    let src = map.source();
    if set.iter().any(|&v| src.is_root(v)) {
        return Err("root in good set".into());
    }
    let mut images: Vec<Vertex> = set.iter().map(|&v| map.apply(v)).collect();
    images.sort_unstable();
    let mut want = x.to_vec();
    want.sort_unstable();
    if images != want {
        return Err(format!("images {images:?} are not a bijection onto {want:?}"));
    }
    let meeting: Vec<(Vertex, Vertex)> = src
        .graph()
        .edges()
        .iter()
        .copied()
        .filter(|(u, v)| set.contains(u) || set.contains(v))
        .collect();
    for (i, &e) in meeting.iter().enumerate() {
        let (a, b) = map.edge_image(e);
        if !map.target().graph().has_edge(a, b) || !(x.contains(&a) || x.contains(&b)) {
            return Err(format!("edge {e:?} lands on ({a}, {b})"));
        }
        for &f in &meeting[..i] {
            let (c, d) = map.edge_image(f);
            if (a.min(b), a.max(b)) == (c.min(d), c.max(d)) {
                return Err(format!("edges {e:?} and {f:?} share an image"));
            }
        }
    }
    Ok(meeting.len())
}

/// Edges of `g` meeting `set`.
pub fn edges_meeting(g: &Graph, set: &[Vertex]) -> usize {
    g.edges()
        .iter()
        .filter(|(u, v)| set.contains(u) || set.contains(v))
        .count()
}

/// Rank over F_q of the given vectors, by Gaussian elimination.
pub fn rank_mod(mut rows: Vec<Vec<u64>>, q: u64) -> usize {
    let inv = |x: u64| (1..q).find(|y| x * y % q == 1).unwrap();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(q)) else {
            continue;
        };
        rows.swap(rank, p);
        let s = inv(rows[rank][c] % q);
        for x in rows[rank].iter_mut() {
            *x = *x * s % q;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_multiple_of(q) {
                let f = rows[r][c] % q;
                let pivot = rows[rank].clone();
                for (x, p) in rows[r].iter_mut().zip(&pivot) {
                    *x = (*x + q * q - f * p % q) % q;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Evaluation functional of the pair (x, y) on the symmetrised basis of
/// polynomials of per-block degree at most d, written out term by term.
pub fn pair_functional(q: u64, b: usize, d: u32, x: &[u64], y: &[u64]) -> Vec<u64> {
    let monos = treepow::poly::monomials(b, d);
    let val = |m: &Vec<u32>, p: &[u64]| m.iter().zip(p).fold(1u64, |acc, (&e, &c)| acc * c.pow(e) % q);
    let mut out = Vec::new();
    for i in 0..monos.len() {
        for j in i..monos.len() {
            let t = val(&monos[i], x) * val(&monos[j], y) % q;
            out.push(if i == j {
                t
            } else {
                (t + val(&monos[j], x) * val(&monos[i], y)) % q
            });
        }
    }
    out
}

/// Common neighbours of `u` and `v`, by scanning every vertex.
pub fn common_neighbours(g: &Graph, u: Vertex, v: Vertex) -> usize {
    (0..g.n())
        .filter(|&w| w != u && w != v && g.has_edge(u, w) && g.has_edge(v, w))
        .count()
}

/// Maximum over vertex subsets `S` with `|S| >= 3` of `(e(S) - 1) / (|S| - 2)`,
/// with `1/2` for a single edge; induced subgraphs suffice for a maximum.
pub fn naive_two_density(g: &Graph) -> Rational {
    let mut best = Rational::new(1, 2);
    for mask in 0u32..(1 << g.n()) {
        let set: Vec<Vertex> = (0..g.n()).filter(|i| mask >> i & 1 == 1).collect();
        if set.len() >= 3 {
            let e = g
                .edges()
                .iter()
                .filter(|(u, v)| set.contains(u) && set.contains(v))
                .count() as i64;
            best = best.max(Rational::new(e - 1, set.len() as i64 - 2));
        }
    }
    best
}

/// Maximum of `e(S) / |S|` over nonempty vertex subsets.
pub fn naive_m(g: &Graph) -> Rational {
    let mut best = Rational::from_integer(0);
    for mask in 1u32..(1 << g.n()) {
        let set: Vec<Vertex> = (0..g.n()).filter(|i| mask >> i & 1 == 1).collect();
        let e = g
            .edges()
            .iter()
            .filter(|(u, v)| set.contains(u) && set.contains(v))
            .count() as i64;
        best = best.max(Rational::new(e, set.len() as i64));
    }
    best
}

/// Unlabelled copies of `h` in `g` from the injective-map oracle.
pub fn naive_copies(g: &Graph, h: &Graph) -> u64 {
    let aut = naive_embeddings(h, h);
    naive_embeddings(g, h) / aut
}
