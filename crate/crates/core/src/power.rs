//! Powers of rooted graphs: unions of `ell` distinct copies that agree
//! pointwise on the roots.
//!
//! Two copies are distinct when their edge sets differ.

use std::collections::HashSet;

use crate::count::{rooted_copies, rooted_extension_counts, DEFAULT_PLACEMENT_CAP};
use crate::error::{Error, Result};
use crate::graph::{Graph, RootedGraph, Vertex};
use crate::iso::IsoClasses;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePowerSpec {
    base: RootedGraph,
    ell: usize,
}

impl TreePowerSpec {
    pub fn new(base: RootedGraph, ell: usize) -> Result<Self> {
        if ell == 0 {
            return Err(Error::Precondition("power ell must be at least 1".into()));
        }
        Ok(TreePowerSpec { base, ell })
    }

    /// Requires the base to be a forest.
    pub fn tree(base: RootedGraph, ell: usize) -> Result<Self> {
        if !base.graph().is_forest() {
            return Err(Error::NotAForest);
        }
        Self::new(base, ell)
    }

    pub fn base(&self) -> &RootedGraph {
        &self.base
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn with_ell(&self, ell: usize) -> Result<Self> {
        Self::new(self.base.clone(), ell)
    }
}

/// A union of labelled copies of a base graph, with the copies as witness:
/// `copies[i][v]` is the union vertex playing base vertex `v` in copy `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledUnion {
    pub union: RootedGraph,
    pub copies: Vec<Vec<Vertex>>,
}

impl LabeledUnion {
    /// Checks that every copy is an embedding of `base` that agrees with the
    /// union's roots, that copies have distinct edge sets, and that together
    /// they cover every edge of the union.
    pub fn check(&self, base: &RootedGraph) -> Result<()> {
        let bad = |msg: String| Err(Error::MissingWitness(msg));
        let mut covered = HashSet::new();
        let mut distinct = HashSet::new();
        for (i, copy) in self.copies.iter().enumerate() {
            if copy.len() != base.n() {
                return bad(format!("copy {i} has the wrong length"));
            }
            if copy.iter().collect::<HashSet<_>>().len() != copy.len() || copy.iter().any(|&v| v >= self.union.n()) {
                return bad(format!("copy {i} is not injective into the union"));
            }
            let rooted = base
                .roots()
                .iter()
                .zip(self.union.roots())
                .all(|(&r, &ur)| copy[r] == ur);
            if !rooted || base.roots().len() != self.union.roots().len() {
                return bad(format!("copy {i} does not agree with the union roots"));
            }
            let mut edges = Vec::new();
            for &(u, v) in base.graph().edges() {
                let (a, b) = (copy[u].min(copy[v]), copy[u].max(copy[v]));
                if !self.union.graph().has_edge(a, b) {
                    return bad(format!("copy {i} uses a non-edge {a}-{b}"));
                }
                covered.insert((a, b));
                edges.push((a, b));
            }
            edges.sort_unstable();
            if !distinct.insert(edges) {
                return bad(format!("copy {i} repeats an earlier copy"));
            }
        }
        if covered.len() != self.union.m() {
            return bad("copies do not cover the union".into());
        }
        Ok(())
    }
}

/// Relabels the base so that root `i` becomes vertex `i` and the non-roots
/// follow in increasing order. Returns the relabelled graph and the map
/// original -> new.
fn roots_first(base: &RootedGraph) -> (RootedGraph, Vec<Vertex>) {
    let r = base.roots().len();
    let mut map = vec![usize::MAX; base.n()];
    for (i, &v) in base.roots().iter().enumerate() {
        map[v] = i;
    }
    for (i, v) in base.non_roots().into_iter().enumerate() {
        map[v] = r + i;
    }
    let edges = base.graph().edges().iter().map(|&(u, v)| (map[u], map[v]));
    let g = Graph::new(base.n(), edges).expect("relabelling preserves simplicity");
    (RootedGraph::new_unchecked(g, (0..r).collect()), map)
}

/// `F^ell`: `ell` copies of the base glued only along the roots. Copy 0 keeps
/// the base's own labels.
pub fn build_full_power(spec: &TreePowerSpec) -> LabeledUnion {
    let base = &spec.base;
    let free = base.non_roots();
    let n = base.roots().len() + spec.ell * free.len();
    let mut copies = Vec::with_capacity(spec.ell);
    copies.push((0..base.n()).collect::<Vec<_>>());
    let mut next = base.n();
    for _ in 1..spec.ell {
        let mut copy: Vec<Vertex> = (0..base.n()).collect();
        for &v in &free {
            copy[v] = next;
            next += 1;
        }
        copies.push(copy);
    }
    let edges = copies
        .iter()
        .flat_map(|c| base.graph().edges().iter().map(move |&(u, v)| (c[u], c[v])));
    let g = Graph::new(n, edges).expect("copies glued on roots only");
    LabeledUnion {
        union: RootedGraph::new_unchecked(g, base.roots().to_vec()),
        copies,
    }
}

#[derive(Clone)]
struct State {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    copies: Vec<Vec<Vertex>>,
}

impl State {
    fn graph(&self) -> Graph {
        Graph::from_sorted_unique(self.n, self.edges.iter().copied())
    }
}

fn copy_edges(base: &Graph, copy: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    let mut e: Vec<_> = base
        .edges()
        .iter()
        .map(|&(u, v)| (copy[u].min(copy[v]), copy[u].max(copy[v])))
        .collect();
    e.sort_unstable();
    e
}

/// Every way to place one more copy onto `state`: each free base vertex goes
/// to an unused existing free vertex or to a fresh one (fresh ones numbered in
/// order of first use).
fn extensions(base: &RootedGraph, state: &State, out: &mut dyn FnMut(State)) {
    let r = base.roots().len();
    let k = base.n() - r;
    let mut copy: Vec<Vertex> = (0..base.n()).collect();
    let mut used = vec![false; state.n + k];
    let existing: HashSet<Vec<(Vertex, Vertex)>> = state.copies.iter().map(|c| copy_edges(base.graph(), c)).collect();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        fresh: usize,
        base: &RootedGraph,
        state: &State,
        copy: &mut Vec<Vertex>,
        used: &mut Vec<bool>,
        existing: &HashSet<Vec<(Vertex, Vertex)>>,
        out: &mut dyn FnMut(State),
    ) {
        let r = base.roots().len();
        if i == base.n() {
            let edges = copy_edges(base.graph(), copy);
            if existing.contains(&edges) {
                return;
            }
            let mut all: Vec<_> = state.edges.iter().copied().chain(edges).collect();
            all.sort_unstable();
            all.dedup();
            let mut copies = state.copies.clone();
            copies.push(copy.clone());
            out(State {
                n: state.n + fresh,
                edges: all,
                copies,
            });
            return;
        }
        for target in r..state.n + fresh + 1 {
            let is_fresh = target == state.n + fresh;
            if used[target] {
                continue;
            }
            copy[i] = target;
            used[target] = true;
            rec(i + 1, fresh + is_fresh as usize, base, state, copy, used, existing, out);
            used[target] = false;
        }
    }
    rec(r, 0, base, state, &mut copy, &mut used, &existing, out);
}

/// Members of the power family up to isomorphism of rooted graphs, each with
/// a witness of exactly `ell` distinct copies whose union is the member.
///
/// A graph is a member iff it is a union of at most `ell` distinct copies and
/// contains at least `ell` distinct copies; unions are grown one copy at a
/// time and deduplicated up to root-fixing isomorphism at every level.
pub fn enumerate_power_family(spec: &TreePowerSpec, max_members: usize) -> Result<Vec<LabeledUnion>> {
    let (base, relabel) = roots_first(&spec.base);
    let r = base.roots().len();
    let colors = |n: usize| -> Vec<u32> { (0..n).map(|v| if v < r { v as u32 + 1 } else { 0 }).collect() };

    let start = State {
        n: base.n(),
        edges: base.graph().edges().to_vec(),
        copies: vec![(0..base.n()).collect()],
    };
    let mut all: IsoClasses<State> = IsoClasses::new();
    all.insert(start.graph(), colors(start.n), start.clone());
    let mut frontier = vec![start];
    for _ in 1..spec.ell {
        let mut level: IsoClasses<State> = IsoClasses::new();
        let mut overflow = None;
        for state in &frontier {
            extensions(&base, state, &mut |next| {
                if overflow.is_some() {
                    return;
                }
                let g = next.graph();
                let c = colors(next.n);
                if level.insert(g, c, next).1 && level.len() > max_members {
                    overflow = Some(level.len());
                }
            });
            if let Some(reached) = overflow {
                return Err(Error::budget("power family unions", reached as u64, max_members as u64));
            }
        }
        frontier = level.into_items().into_iter().map(|(_, _, s)| s).collect();
        for s in &frontier {
            all.insert(s.graph(), colors(s.n), s.clone());
        }
    }

    let placement: Vec<Vertex> = (0..r).collect();
    let mut members: IsoClasses<LabeledUnion> = IsoClasses::new();
    for (g, _, state) in all.into_items() {
        let found = rooted_copies(&g, &base, &placement);
        if found.len() < spec.ell {
            continue;
        }
        let mut copies = state.copies.clone();
        let mut have: HashSet<_> = copies.iter().map(|c| copy_edges(base.graph(), c)).collect();
        for c in found {
            if copies.len() == spec.ell {
                break;
            }
            if have.insert(copy_edges(base.graph(), &c)) {
                copies.push(c);
            }
        }
        // Back to the caller's labelling of the base.
        let copies = copies
            .into_iter()
            .map(|c| (0..spec.base.n()).map(|v| c[relabel[v]]).collect())
            .collect();
        let union = LabeledUnion {
            union: RootedGraph::new_unchecked(g.clone(), (0..r).collect()),
            copies,
        };
        let set_colors = union.union.set_colors();
        members.insert(g, set_colors, union);
        if members.len() > max_members {
            return Err(Error::budget(
                "power family members",
                members.len() as u64,
                max_members as u64,
            ));
        }
    }
    Ok(members.into_items().into_iter().map(|(_, _, u)| u).collect())
}

/// Witness that a graph contains a member of the power family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerViolation {
    pub placement: Vec<Vertex>,
    /// `ell` distinct copies (vertex maps from the base) extending the placement.
    pub copies: Vec<Vec<Vertex>>,
}

/// `None` when `g` contains no member of the power family, otherwise a root
/// placement with `ell` distinct copies extending it.
pub fn power_violation(g: &Graph, spec: &TreePowerSpec) -> Result<Option<PowerViolation>> {
    let counts = rooted_extension_counts(g, &spec.base, DEFAULT_PLACEMENT_CAP)?;
    let Some((placement, _)) = counts.above(spec.ell as u64 - 1).into_iter().next() else {
        return Ok(None);
    };
    let mut copies = rooted_copies(g, &spec.base, &placement);
    copies.truncate(spec.ell);
    Ok(Some(PowerViolation { placement, copies }))
}

pub fn is_power_free(g: &Graph, spec: &TreePowerSpec) -> Result<bool> {
    Ok(power_violation(g, spec)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use crate::iso::are_isomorphic;

    fn plain(g: &Graph) -> Vec<u32> {
        vec![0; g.n()]
    }

    #[test]
    fn full_power_of_star_is_complete_bipartite() {
        for (s, l) in [(2, 3), (3, 2), (4, 1)] {
            let spec = TreePowerSpec::tree(fixtures::star_at_leaves(s), l).unwrap();
            let p = build_full_power(&spec);
            p.check(spec.base()).unwrap();
            let k = Graph::complete_bipartite(l, s);
            assert!(are_isomorphic(p.union.graph(), &plain(p.union.graph()), &k, &plain(&k)));
        }
    }

    #[test]
    fn full_power_counts() {
        for l in 1..=6 {
            let spec = TreePowerSpec::tree(fixtures::subdivided_claw(), l).unwrap();
            let p = build_full_power(&spec);
            assert_eq!((p.union.n(), p.union.m()), (2 * l + 3, 4 * l));
        }
        let spec = TreePowerSpec::tree(fixtures::spider_at_feet(3), 1).unwrap();
        assert_eq!(build_full_power(&spec).union, *spec.base());
    }

    #[test]
    fn star_family_is_single_member() {
        for (s, l) in [(2, 2), (3, 3), (2, 4)] {
            let spec = TreePowerSpec::tree(fixtures::star_at_leaves(s), l).unwrap();
            let fam = enumerate_power_family(&spec, 1000).unwrap();
            assert_eq!(fam.len(), 1);
            let k = Graph::complete_bipartite(l, s);
            let g = fam[0].union.graph();
            assert!(are_isomorphic(g, &plain(g), &k, &plain(&k)));
            fam[0].check(spec.base()).unwrap();
        }
    }

    #[test]
    fn ell_one_family_is_the_base() {
        let spec = TreePowerSpec::tree(fixtures::subdivided_claw(), 1).unwrap();
        let fam = enumerate_power_family(&spec, 10).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam[0].union.m(), 4);
    }

    #[test]
    fn path_squared_is_c4() {
        let spec = TreePowerSpec::tree(fixtures::path_at_ends(3), 2).unwrap();
        let fam = enumerate_power_family(&spec, 10).unwrap();
        assert_eq!(fam.len(), 1);
        let c4 = Graph::cycle(4);
        assert!(are_isomorphic(fam[0].union.graph(), &plain(&c4), &c4, &plain(&c4)));
    }

    #[test]
    fn family_budget() {
        let spec = TreePowerSpec::tree(fixtures::path_at_ends(4), 3).unwrap();
        assert!(matches!(enumerate_power_family(&spec, 1), Err(Error::Budget { .. })));
        let fam = enumerate_power_family(&spec, 1000).unwrap();
        assert!(fam.len() > 1);
        for m in &fam {
            m.check(spec.base()).unwrap();
            assert_eq!(m.copies.len(), 3);
        }
    }

    #[test]
    fn freeness_examples() {
        let (l, s) = (3, 2);
        let spec = TreePowerSpec::tree(fixtures::star_at_leaves(s), l).unwrap();
        let v = power_violation(&Graph::complete_bipartite(l, s), &spec)
            .unwrap()
            .unwrap();
        assert_eq!(v.copies.len(), l);
        assert!(is_power_free(&Graph::complete_bipartite(l - 1, s), &spec).unwrap());
        assert!(is_power_free(&Graph::empty(6), &spec).unwrap());
    }
}
