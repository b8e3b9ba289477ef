//! Random polynomial graphs on `F_q^b` and pruning of overloaded root tuples.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::count::{rooted_extension_counts, ExtensionCounts, DEFAULT_PLACEMENT_CAP};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::graph::{Graph, RootedGraph, Vertex};
use crate::poly::{monomial_values, monomials, SymmetricPolynomial};

/// Largest vertex count `q^b` the builder accepts.
pub const VERTEX_LIMIT: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyGraphParams {
    pub field: PrimeField,
    pub b: usize,
    pub a: usize,
    /// The rooted graphs whose powers are to be avoided.
    pub family: Vec<RootedGraph>,
    /// The graph whose copies are counted.
    pub h: Graph,
    pub s: u32,
    pub d: u32,
    pub prune_threshold: u64,
}

impl PolyGraphParams {
    /// `s = 1 + a e(H) + b max(|R_i| - 1)` and `d = s max e(F_i)`.
    pub fn derive(
        q: u64,
        b: usize,
        a: usize,
        family: Vec<RootedGraph>,
        h: Graph,
        prune_threshold: u64,
    ) -> Result<Self> {
        let field = PrimeField::new(q)?;
        if b == 0 {
            return Err(Error::Precondition("b must be positive".into()));
        }
        if family.is_empty() {
            return Err(Error::Precondition("the rooted family is empty".into()));
        }
        let max_roots = family.iter().map(|f| f.roots().len()).max().unwrap_or(0);
        let max_edges = family.iter().map(RootedGraph::m).max().unwrap_or(0);
        let s = 1 + a * h.m() + b * max_roots.saturating_sub(1);
        let d = s * max_edges;
        Ok(PolyGraphParams {
            field,
            b,
            a,
            family,
            h,
            s: s as u32,
            d: (d as u32).max(1),
            prune_threshold,
        })
    }

    pub fn with_degree(mut self, d: u32) -> Self {
        self.d = d;
        self
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    /// `q^b`, saturating.
    pub fn vertex_count(&self) -> u64 {
        self.q().checked_pow(self.b as u32).unwrap_or(u64::MAX)
    }
}

/// Coordinates of vertex `id`: its base-`q` digits, most significant first.
pub fn point_of(id: u64, q: u64, b: usize) -> Vec<u64> {
    let mut out = vec![0; b];
    let mut rest = id;
    for slot in out.iter_mut().rev() {
        *slot = rest % q;
        rest /= q;
    }
    out
}

/// The `k`-th polynomial of a graph seeded with `seed`: stream `k` of the
/// generator seeded by `seed`.
pub fn polynomial_for(params: &PolyGraphParams, seed: u64, k: usize) -> SymmetricPolynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    SymmetricPolynomial::sample(params.field, params.b, params.d, &mut rng)
}

/// The graph on `F_q^b` in which `x ~ y` iff all `a` sampled polynomials
/// vanish at `(x, y)`.
pub fn build_poly_graph(params: &PolyGraphParams, seed: u64) -> Result<Graph> {
    let n = params.vertex_count();
    if n > VERTEX_LIMIT {
        return Err(Error::budget("polynomial graph vertices q^b", n, VERTEX_LIMIT));
    }
    let n = n as usize;
    if params.a == 0 {
        return Ok(Graph::complete(n));
    }
    let field = params.field;
    let q = field.q();
    let monos = monomials(params.b, params.d);
    let k = monos.len();
    let values: Vec<Vec<u64>> = (0..n as u64)
        .map(|id| monomial_values(&field, &monos, &point_of(id, q, params.b)))
        .collect();
    // halves[p][y] = C_p m(y)
    let halves: Vec<Vec<u64>> = (0..params.a)
        .map(|p| {
            let poly = polynomial_for(params, seed, p);
            values.iter().flat_map(|my| poly.half_evaluate(my)).collect()
        })
        .collect();
    // Dot products of length k with entries below q fit without reduction.
    let lazy = (q - 1)
        .checked_mul(q - 1)
        .and_then(|x| x.checked_mul(k as u64))
        .is_some();
    let dot = |x: &[u64], w: &[u64]| -> u64 {
        if lazy {
            x.iter().zip(w).map(|(a, b)| a * b).sum::<u64>() % q
        } else {
            x.iter().zip(w).fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
        }
    };
    let rows: Vec<Vec<(Vertex, Vertex)>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mx = &values[x];
            (x + 1..n)
                .filter(|&y| halves.iter().all(|h| dot(mx, &h[y * k..(y + 1) * k]) == 0))
                .map(|y| (x, y))
                .collect()
        })
        .collect();
    Ok(Graph::from_sorted_unique(n, rows.into_iter().flatten()))
}

/// Injective root placements with more than `threshold` copies of `f`,
/// sorted, with their copy counts.
pub fn find_bad_root_tuples(g: &Graph, f: &RootedGraph, threshold: u64) -> Result<Vec<(Vec<Vertex>, u64)>> {
    Ok(rooted_extension_counts(g, f, DEFAULT_PLACEMENT_CAP)?.above(threshold))
}

/// Copy counts of `f` over all placements, for inspecting how the counts
/// are distributed.
pub fn extension_histogram(g: &Graph, f: &RootedGraph) -> Result<Vec<(u64, u64)>> {
    let counts: ExtensionCounts = rooted_extension_counts(g, f, DEFAULT_PLACEMENT_CAP)?;
    Ok(counts.histogram())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pruned {
    /// The induced graph on the surviving vertices, relabelled in order.
    pub graph: Graph,
    /// Original id of each surviving vertex.
    pub kept: Vec<Vertex>,
    /// Deleted original ids, sorted.
    pub deleted: Vec<Vertex>,
    /// Bad tuples found before deletion, summed over the family.
    pub bad_tuples: usize,
}

/// For each family member and each bad tuple not already hit, deletes the
/// lowest vertex of the tuple. Copy counts only drop when vertices go, so one
/// pass suffices; a rescan of the result confirms it.
pub fn prune_bad_roots(g: &Graph, family: &[RootedGraph], threshold: u64) -> Result<Pruned> {
    let mut deleted = vec![false; g.n()];
    let mut bad_tuples = 0;
    for f in family {
        let bad = find_bad_root_tuples(g, f, threshold)?;
        bad_tuples += bad.len();
        for (tuple, _) in bad {
            if tuple.iter().any(|&v| deleted[v]) {
                continue;
            }
            let v = *tuple.iter().min().expect("tuples are nonempty");
            deleted[v] = true;
        }
    }
    let kept: Vec<Vertex> = (0..g.n()).filter(|&v| !deleted[v]).collect();
    let graph = g.induced(&kept);
    for f in family {
        if let Some((tuple, count)) = find_bad_root_tuples(&graph, f, threshold)?.into_iter().next() {
            return Err(Error::Certificate(format!(
                "placement {tuple:?} still has {count} > {threshold} copies after pruning"
            )));
        }
    }
    Ok(Pruned {
        graph,
        kept,
        deleted: (0..g.n()).filter(|&v| deleted[v]).collect(),
        bad_tuples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use crate::power::{is_power_free, TreePowerSpec};

    fn star_params(q: u64, a: usize) -> PolyGraphParams {
        PolyGraphParams::derive(q, 2, a, vec![fixtures::star_at_leaves(2)], Graph::path(2), 4).unwrap()
    }

    #[test]
    fn derived_parameters() {
        let p = star_params(11, 1);
        assert_eq!((p.s, p.d), (4, 8));
        assert_eq!(p.vertex_count(), 121);
        let p = PolyGraphParams::derive(5, 3, 1, vec![fixtures::star_at_leaves(3)], Graph::path(2), 4).unwrap();
        assert_eq!((p.s, p.d), (8, 24));
        assert!(PolyGraphParams::derive(9, 2, 1, vec![fixtures::star_at_leaves(2)], Graph::path(2), 4).is_err());
    }

    #[test]
    fn point_digits() {
        assert_eq!(point_of(0, 5, 2), vec![0, 0]);
        assert_eq!(point_of(7, 5, 2), vec![1, 2]);
        assert_eq!(point_of(24, 5, 2), vec![4, 4]);
    }

    #[test]
    fn no_polynomials_gives_complete_graph() {
        assert_eq!(build_poly_graph(&star_params(5, 0), 1).unwrap(), Graph::complete(25));
    }

    #[test]
    fn edges_match_direct_evaluation() {
        let params = star_params(5, 2).with_degree(3);
        let g = build_poly_graph(&params, 42).unwrap();
        let polys: Vec<_> = (0..2).map(|k| polynomial_for(&params, 42, k)).collect();
        for x in 0..25u64 {
            for y in x + 1..25 {
                let (px, py) = (point_of(x, 5, 2), point_of(y, 5, 2));
                let edge = polys.iter().all(|p| p.evaluate(&px, &py) == 0);
                assert_eq!(edge, g.has_edge(x as usize, y as usize));
            }
        }
        assert_eq!(g, build_poly_graph(&params, 42).unwrap());
    }

    #[test]
    fn vertex_budget() {
        let p = PolyGraphParams::derive(53, 3, 1, vec![fixtures::star_at_leaves(2)], Graph::path(2), 4).unwrap();
        assert!(matches!(build_poly_graph(&p, 0), Err(Error::Budget { .. })));
    }

    #[test]
    fn bad_tuples_in_k32() {
        let g = Graph::complete_bipartite(3, 2);
        let f = fixtures::star_at_leaves(2);
        let bad = find_bad_root_tuples(&g, &f, 2).unwrap();
        assert_eq!(bad, vec![(vec![3, 4], 3), (vec![4, 3], 3)]);
        assert!(find_bad_root_tuples(&g, &f, 5u64.pow(3)).unwrap().is_empty());

        let pruned = prune_bad_roots(&g, std::slice::from_ref(&f), 2).unwrap();
        assert_eq!(pruned.deleted, vec![3]);
        assert_eq!(pruned.bad_tuples, 2);
        let spec = TreePowerSpec::tree(f, 3).unwrap();
        assert!(is_power_free(&pruned.graph, &spec).unwrap());
    }

    #[test]
    fn nothing_to_prune() {
        let g = Graph::cycle(6);
        let pruned = prune_bad_roots(&g, &[fixtures::star_at_leaves(2)], 2).unwrap();
        assert_eq!(pruned.graph, g);
        assert!(pruned.deleted.is_empty());
    }
}
