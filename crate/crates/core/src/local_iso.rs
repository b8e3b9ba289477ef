//! Local isomorphisms between rooted graphs.
//!
//! A map `φ: V(F) -> V(F')` is a local isomorphism when
//! (a) it is surjective and sends roots to roots,
//! (b) it is a homomorphism, and
//! (c) distinct edges sharing a vertex have distinct images.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::density::{edges_meeting, rooted_density, Rational};
use crate::error::{Error, Result};
use crate::graph::{Graph, RootedGraph, Vertex};
use crate::iso::IsoClasses;
use crate::power::{LabeledUnion, TreePowerSpec};

/// Largest source order accepted by the quotient enumeration.
pub const LOCAL_IMAGE_LIMIT: usize = 10;

/// The first condition a candidate map fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Target vertex with no preimage.
    NotSurjective { missed: Vertex },
    /// A root mapped to a non-root.
    RootNotPreserved { root: Vertex, image: Vertex },
    /// A source edge whose image is not an edge (including a collapsed edge).
    NotHomomorphic { edge: (Vertex, Vertex) },
    /// Two distinct source edges at `at` with the same image.
    IncidentEdgesCollide {
        at: Vertex,
        first: (Vertex, Vertex),
        second: (Vertex, Vertex),
    },
}

impl Violation {
    /// The letter of the violated condition: `'a'`, `'b'` or `'c'`.
    pub fn condition(&self) -> char {
        match self {
            Violation::NotSurjective { .. } | Violation::RootNotPreserved { .. } => 'a',
            Violation::NotHomomorphic { .. } => 'b',
            Violation::IncidentEdgesCollide { .. } => 'c',
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSurjective { missed } => write!(f, "(a) target vertex {missed} has no preimage"),
            Violation::RootNotPreserved { root, image } => {
                write!(f, "(a) root {root} maps to non-root {image}")
            }
            Violation::NotHomomorphic { edge: (u, v) } => write!(f, "(b) edge {u}-{v} does not map to an edge"),
            Violation::IncidentEdgesCollide { at, first, second } => write!(
                f,
                "(c) edges {}-{} and {}-{} meet at {at} and share an image",
                first.0, first.1, second.0, second.1
            ),
        }
    }
}

/// A candidate local isomorphism, not necessarily valid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalMap {
    source: RootedGraph,
    target: RootedGraph,
    map: Vec<Vertex>,
}

impl LocalMap {
    /// Checks only that the map is total and lands in the target.
    pub fn new(source: RootedGraph, target: RootedGraph, map: Vec<Vertex>) -> Result<Self> {
        if map.len() != source.n() {
            return Err(Error::InvalidGraph(format!(
                "map has {} entries for {} source vertices",
                map.len(),
                source.n()
            )));
        }
        if let Some(&w) = map.iter().find(|&&w| w >= target.n()) {
            return Err(Error::InvalidGraph(format!("map image {w} out of range")));
        }
        Ok(LocalMap { source, target, map })
    }

    pub fn identity(g: RootedGraph) -> Self {
        let map = (0..g.n()).collect();
        LocalMap {
            source: g.clone(),
            target: g,
            map,
        }
    }

    pub fn source(&self) -> &RootedGraph {
        &self.source
    }

    pub fn target(&self) -> &RootedGraph {
        &self.target
    }

    pub fn map(&self) -> &[Vertex] {
        &self.map
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.map[v]
    }

    /// Image of a source edge, normalised with the smaller endpoint first.
    pub fn edge_image(&self, (u, v): (Vertex, Vertex)) -> (Vertex, Vertex) {
        let (a, b) = (self.map[u], self.map[v]);
        (a.min(b), a.max(b))
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let mut hit = vec![false; self.target.n()];
        for &w in &self.map {
            hit[w] = true;
        }
        if let Some(missed) = hit.iter().position(|&h| !h) {
            return Err(Violation::NotSurjective { missed });
        }
        for &r in self.source.roots() {
            if !self.target.is_root(self.map[r]) {
                return Err(Violation::RootNotPreserved {
                    root: r,
                    image: self.map[r],
                });
            }
        }
        let tg = self.target.graph();
        for &(u, v) in self.source.graph().edges() {
            if !tg.has_edge(self.map[u], self.map[v]) {
                return Err(Violation::NotHomomorphic { edge: (u, v) });
            }
        }
        // With (b) in place, two edges at `u` collide exactly when their far
        // ends share an image.
        let sg = self.source.graph();
        for u in 0..sg.n() {
            let mut seen: HashMap<Vertex, Vertex> = HashMap::new();
            for &w in sg.neighbors(u) {
                if let Some(&w0) = seen.get(&self.map[w]) {
                    return Err(Violation::IncidentEdgesCollide {
                        at: u,
                        first: (u.min(w0), u.max(w0)),
                        second: (u.min(w), u.max(w)),
                    });
                }
                seen.insert(self.map[w], w);
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// `other ∘ self`; requires `self.target == other.source`.
    pub fn then(&self, other: &LocalMap) -> Result<LocalMap> {
        if self.target != other.source {
            return Err(Error::Precondition(
                "maps do not compose: target and source differ".into(),
            ));
        }
        let map = self.map.iter().map(|&v| other.map[v]).collect();
        Ok(LocalMap {
            source: self.source.clone(),
            target: other.target.clone(),
            map,
        })
    }

    /// `map v0→w0 v1→w1 ...`
    pub fn to_line(&self) -> String {
        let mut out = String::from("map");
        for (v, w) in self.map.iter().enumerate() {
            out.push_str(&format!(" {v}→{w}"));
        }
        out
    }

    /// Parses a map line; `->` is accepted in place of `→`.
    pub fn parse_line(line: &str, source_order: usize) -> Result<Vec<Vertex>> {
        let perr = |msg: String| Error::Parse { line: 1, msg };
        let mut toks = line.split_whitespace();
        if toks.next() != Some("map") {
            return Err(perr("expected a line starting with `map`".into()));
        }
        let mut map = vec![None; source_order];
        for tok in toks {
            let (v, w) = tok
                .split_once('→')
                .or_else(|| tok.split_once("->"))
                .ok_or_else(|| perr(format!("bad map entry `{tok}`")))?;
            let v: Vertex = v.parse().map_err(|_| perr(format!("bad vertex `{v}`")))?;
            let w: Vertex = w.parse().map_err(|_| perr(format!("bad vertex `{w}`")))?;
            let slot = map
                .get_mut(v)
                .ok_or_else(|| perr(format!("source vertex {v} out of range")))?;
            if slot.replace(w).is_some() {
                return Err(perr(format!("source vertex {v} mapped twice")));
            }
        }
        map.into_iter()
            .enumerate()
            .map(|(v, w)| w.ok_or_else(|| perr(format!("source vertex {v} unmapped"))))
            .collect()
    }
}

/// Calls `visit` with the block index of every vertex for each set partition
/// of `0..n` into at most `max_blocks` blocks (restricted growth strings).
/// Assignments that put the two ends of an edge together are skipped early.
fn for_each_partition(g: &Graph, max_blocks: usize, visit: &mut dyn FnMut(&[usize], usize)) {
    fn rec(
        g: &Graph,
        v: usize,
        blocks: usize,
        max: usize,
        assign: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize], usize),
    ) {
        if v == g.n() {
            visit(assign, blocks);
            return;
        }
        for b in 0..(blocks + 1).min(max) {
            if g.neighbors(v).iter().any(|&w| w < v && assign[w] == b) {
                continue;
            }
            assign[v] = b;
            rec(g, v + 1, blocks.max(b + 1), max, assign, visit);
        }
    }
    let mut assign = vec![0; g.n()];
    rec(g, 0, 0, max_blocks.max(1), &mut assign, visit);
}

/// The quotient of `f` by a partition, rooted at the images of the roots
/// (first occurrence order). `None` if every target vertex would be a root.
fn quotient(f: &RootedGraph, assign: &[usize], blocks: usize) -> Option<LocalMap> {
    let mut roots = Vec::new();
    for &r in f.roots() {
        if !roots.contains(&assign[r]) {
            roots.push(assign[r]);
        }
    }
    if roots.len() >= blocks {
        return None;
    }
    let edges = f.graph().edges().iter().map(|&(u, v)| (assign[u], assign[v]));
    let g = Graph::from_edges_dedup(blocks, edges).ok()?;
    let target = RootedGraph::new(g, roots).ok()?;
    Some(LocalMap {
        source: f.clone(),
        target,
        map: assign.to_vec(),
    })
}

fn check_order(f: &RootedGraph) -> Result<()> {
    if f.n() > LOCAL_IMAGE_LIMIT {
        return Err(Error::budget(
            "local image enumeration (source order)",
            f.n() as u64,
            LOCAL_IMAGE_LIMIT as u64,
        ));
    }
    Ok(())
}

/// Every valid quotient local isomorphism of `f` onto at most
/// `max_target_order` vertices, one per partition, in partition order.
pub fn local_quotients(f: &RootedGraph, max_target_order: usize) -> Result<Vec<LocalMap>> {
    check_order(f)?;
    let mut out = Vec::new();
    for_each_partition(f.graph(), max_target_order, &mut |assign, blocks| {
        if let Some(m) = quotient(f, assign, blocks) {
            if m.is_valid() {
                out.push(m);
            }
        }
    });
    Ok(out)
}

/// The images of `f` under local isomorphisms, up to isomorphism of rooted
/// graphs (root sets compared as sets), each with one witness map.
pub fn enumerate_local_images(f: &RootedGraph, max_target_order: usize) -> Result<Vec<LocalMap>> {
    let mut classes: IsoClasses<LocalMap> = IsoClasses::new();
    for m in local_quotients(f, max_target_order)? {
        let g = m.target.graph().clone();
        let c = m.target.set_colors();
        classes.insert(g, c, m);
    }
    Ok(classes.into_items().into_iter().map(|(_, _, m)| m).collect())
}

/// A set of source vertices mapped bijectively onto the target, on whose
/// incident edges the induced edge map is injective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodSet {
    /// Sorted.
    pub vertices: Vec<Vertex>,
    /// `(v, φ(v))` for each vertex of the set.
    pub bijection: Vec<(Vertex, Vertex)>,
    /// `(e, φ*(e))` for each source edge meeting the set.
    pub edge_map: Vec<((Vertex, Vertex), (Vertex, Vertex))>,
}

impl GoodSet {
    fn certify(map: &LocalMap, mut vertices: Vec<Vertex>) -> GoodSet {
        vertices.sort_unstable();
        let bijection = vertices.iter().map(|&v| (v, map.apply(v))).collect();
        let mut inside = vec![false; map.source.n()];
        for &v in &vertices {
            inside[v] = true;
        }
        let edge_map = map
            .source
            .graph()
            .edges()
            .iter()
            .filter(|&&(u, v)| inside[u] || inside[v])
            .map(|&e| (e, map.edge_image(e)))
            .collect();
        GoodSet {
            vertices,
            bijection,
            edge_map,
        }
    }
}

/// Independent check of a good-set certificate against the map it claims to
/// be good for. Recomputes everything from `map` rather than trusting the
/// recorded bijection and edge map.
pub fn verify_good_set(map: &LocalMap, set: &GoodSet) -> Result<()> {
    let bad = |msg: String| Err(Error::Certificate(msg));
    let src = &map.source;
    let mut inside = vec![false; src.n()];
    for &v in &set.vertices {
        if v >= src.n() {
            return bad(format!("vertex {v} out of range"));
        }
        if src.is_root(v) {
            return bad(format!("vertex {v} is a root"));
        }
        if std::mem::replace(&mut inside[v], true) {
            return bad(format!("vertex {v} repeated"));
        }
    }
    let mut preimage = vec![None; map.target.n()];
    for &v in &set.vertices {
        if let Some(u) = preimage[map.apply(v)].replace(v) {
            return bad(format!("vertices {u} and {v} share the image {}", map.apply(v)));
        }
    }
    if let Some(w) = preimage.iter().position(Option::is_none) {
        return bad(format!("target vertex {w} is not covered"));
    }
    let mut images: HashMap<(Vertex, Vertex), (Vertex, Vertex)> = HashMap::new();
    let mut meeting = 0;
    for &(u, v) in src.graph().edges() {
        if !(inside[u] || inside[v]) {
            continue;
        }
        meeting += 1;
        let img = map.edge_image((u, v));
        if let Some(e) = images.insert(img, (u, v)) {
            return bad(format!("edges {}-{} and {u}-{v} share an image", e.0, e.1));
        }
    }
    let expected = GoodSet::certify(map, set.vertices.clone());
    if set.bijection != expected.bijection || set.edge_map != expected.edge_map || meeting != set.edge_map.len() {
        return bad("recorded bijection or edge map disagrees with the map".into());
    }
    Ok(())
}

/// Builds a good set by leaf removal: take the lowest vertex `u` of degree at
/// most one; if `φ(u)` has no other preimage, recurse on `T - u -> F - φ(u)`
/// and add `u`; otherwise recurse on `T - u -> F` and, if the neighbour of
/// `u` lies in the returned set, swap `u` in for the vertex sharing its image.
///
/// Requires an unrooted forest source and a valid map. The result is verified
/// before it is returned.
pub fn find_good_set(map: &LocalMap) -> Result<GoodSet> {
    if !map.source.roots().is_empty() {
        return Err(Error::RootedSource);
    }
    if !map.source.graph().is_forest() {
        return Err(Error::NotAForest);
    }
    map.validate().map_err(Error::InvalidLocalMap)?;

    let g = map.source.graph();
    let n = g.n();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut preimages = vec![0usize; map.target.n()];
    for &w in &map.map {
        preimages[w] += 1;
    }

    // Unwind the removals iteratively: record each step, then replay in reverse.
    enum Step {
        Unique(Vertex),
        Shared(Vertex),
    }
    let mut steps = Vec::with_capacity(n);
    for _ in 0..n {
        let u = (0..n)
            .find(|&v| alive[v] && degree[v] <= 1)
            .expect("a forest has a vertex of degree at most one");
        alive[u] = false;
        for &w in g.neighbors(u) {
            if alive[w] {
                degree[w] -= 1;
            }
        }
        preimages[map.map[u]] -= 1;
        steps.push(if preimages[map.map[u]] == 0 {
            Step::Unique(u)
        } else {
            Step::Shared(u)
        });
    }

    let mut in_set = vec![false; n];
    let mut holder: Vec<Option<Vertex>> = vec![None; map.target.n()];
    for step in steps.into_iter().rev() {
        match step {
            Step::Unique(u) => {
                in_set[u] = true;
                holder[map.map[u]] = Some(u);
                alive[u] = true;
            }
            Step::Shared(u) => {
                let neighbour_in_set = g.neighbors(u).iter().any(|&w| alive[w] && in_set[w]);
                if neighbour_in_set {
                    let u2 = holder[map.map[u]].expect("the set covers the target");
                    in_set[u2] = false;
                    in_set[u] = true;
                    holder[map.map[u]] = Some(u);
                }
                alive[u] = true;
            }
        }
    }
    let vertices: Vec<Vertex> = (0..n).filter(|&v| in_set[v]).collect();
    let set = GoodSet::certify(map, vertices);
    verify_good_set(map, &set)?;
    Ok(set)
}

/// The density comparison between a rooted forest and a local image, with
/// the counting argument behind it replayed on the minimising set of the
/// image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneReport {
    pub rho_source: Rational,
    pub rho_target: Rational,
    pub holds: bool,
    /// `None` when the source is not a forest.
    pub certificate: Option<MonotoneCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneCertificate {
    /// Minimising non-root set of the target.
    pub x: Vec<Vertex>,
    /// Good set for the restriction to the preimage of `x`, in source labels.
    pub good_set: Vec<Vertex>,
    /// Edges of the source meeting the good set.
    pub e_v: usize,
    /// Edges of the target meeting `x`.
    pub e_x: usize,
}

fn restrict_to_preimage(map: &LocalMap, x: &[Vertex]) -> (LocalMap, Vec<Vertex>) {
    let mut in_x = vec![false; map.target.n()];
    for &w in x {
        in_x[w] = true;
    }
    let pre: Vec<Vertex> = (0..map.source.n()).filter(|&v| in_x[map.apply(v)]).collect();
    let mut x_index = vec![usize::MAX; map.target.n()];
    for (i, &w) in x.iter().enumerate() {
        x_index[w] = i;
    }
    let src = RootedGraph::unrooted(map.source.graph().induced(&pre));
    let tgt = RootedGraph::unrooted(map.target.graph().induced(x));
    let sub = pre.iter().map(|&v| x_index[map.apply(v)]).collect();
    (
        LocalMap {
            source: src,
            target: tgt,
            map: sub,
        },
        pre,
    )
}

/// Compares rooted densities of the source and target of a valid map. For a
/// forest source, additionally restricts the map to the preimage of the
/// target's minimising set `X`, finds a good set `V` there, and checks that
/// `φ` is a bijection `V -> X` and that the edge map is injective from the
/// edges meeting `V` into the edges meeting `X`.
///
/// A non-forest source yields only the comparison.
pub fn verify_density_monotone(map: &LocalMap) -> Result<MonotoneReport> {
    map.validate().map_err(Error::InvalidLocalMap)?;
    let rho_s = rooted_density(&map.source)?;
    let rho_t = rooted_density(&map.target)?;
    let holds = rho_s.value <= rho_t.value;
    if !map.source.graph().is_forest() {
        return Ok(MonotoneReport {
            rho_source: rho_s.value,
            rho_target: rho_t.value,
            holds,
            certificate: None,
        });
    }

    let x = rho_t.witness;
    let (sub, pre) = restrict_to_preimage(map, &x);
    sub.validate()
        .map_err(|v| Error::Certificate(format!("restriction is not a local isomorphism: {v}")))?;
    let local = find_good_set(&sub)?;
    let v: Vec<Vertex> = local.vertices.iter().map(|&i| pre[i]).collect();

    let mut covered = vec![false; map.target.n()];
    for &u in &v {
        let w = map.apply(u);
        if !x.contains(&w) || std::mem::replace(&mut covered[w], true) {
            return Err(Error::Certificate("good set is not a bijection onto X".into()));
        }
    }
    if v.len() != x.len() {
        return Err(Error::Certificate("good set and X differ in size".into()));
    }
    let mut in_v = vec![false; map.source.n()];
    for &u in &v {
        in_v[u] = true;
    }
    let mut in_x = vec![false; map.target.n()];
    for &w in &x {
        in_x[w] = true;
    }
    let mut images = BTreeMap::new();
    for &(a, b) in map.source.graph().edges() {
        if !(in_v[a] || in_v[b]) {
            continue;
        }
        let img = map.edge_image((a, b));
        if !(in_x[img.0] || in_x[img.1]) {
            return Err(Error::Certificate(format!(
                "edge {a}-{b} maps outside the edges meeting X"
            )));
        }
        if images.insert(img, (a, b)).is_some() {
            return Err(Error::Certificate(format!("edge map not injective at {a}-{b}")));
        }
    }
    let e_v = edges_meeting(map.source.graph(), &v);
    let e_x = edges_meeting(map.target.graph(), &x);
    if e_v > e_x {
        return Err(Error::Certificate(format!("{e_v} edges meet V but only {e_x} meet X")));
    }
    Ok(MonotoneReport {
        rho_source: rho_s.value,
        rho_target: rho_t.value,
        holds,
        certificate: Some(MonotoneCertificate {
            x,
            good_set: v,
            e_v,
            e_x,
        }),
    })
}

/// One isomorphism type among the pieces `F_i = F[φ(V(T_i))]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceGroup {
    /// The type, rooted at the images of the roots (every vertex may be a root).
    pub piece: RootedGraph,
    /// Indices of the copies whose piece has this type.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerImageGrouping {
    pub groups: Vec<PieceGroup>,
    /// Index into `groups` of a largest group.
    pub largest: usize,
    /// Distinct copies of the largest type inside the image, agreeing on the
    /// roots; their union is a power of that type.
    pub witness: LabeledUnion,
}

impl PowerImageGrouping {
    pub fn largest_size(&self) -> usize {
        self.groups[self.largest].members.len()
    }

    pub fn types(&self) -> usize {
        self.groups.len()
    }
}

/// Splits the image of a labelled union of copies of the base into the pieces
/// spanned by each copy and groups them up to root-fixing isomorphism.
pub fn decompose_power_image(spec: &TreePowerSpec, union: &LabeledUnion, map: &LocalMap) -> Result<PowerImageGrouping> {
    if union.copies.is_empty() {
        return Err(Error::MissingWitness("no labelled copies supplied".into()));
    }
    if &union.union != map.source() {
        return Err(Error::MissingWitness("map source is not the labelled union".into()));
    }
    union.check(spec.base())?;
    map.validate().map_err(Error::InvalidLocalMap)?;

    let f = map.target.graph();
    // Roots of each piece, in the order of the union's roots.
    let mut image_roots: Vec<Vertex> = Vec::new();
    for &r in union.union.roots() {
        let w = map.apply(r);
        if !image_roots.contains(&w) {
            image_roots.push(w);
        }
    }
    let mut classes: IsoClasses<(Vec<usize>, Vec<Vec<Vertex>>)> = IsoClasses::new();
    let mut reps: Vec<RootedGraph> = Vec::new();
    for (i, copy) in union.copies.iter().enumerate() {
        let mut verts: Vec<Vertex> = copy.iter().map(|&v| map.apply(v)).collect();
        verts.sort_unstable();
        verts.dedup();
        let piece_graph = f.induced(&verts);
        let local = |w: Vertex| verts.binary_search(&w).expect("roots lie in every piece");
        let piece = RootedGraph::new_unchecked(piece_graph.clone(), image_roots.iter().map(|&w| local(w)).collect());
        let colors = piece.pointwise_colors();
        let (idx, fresh) = classes.insert(piece_graph, colors, (Vec::new(), Vec::new()));
        if fresh {
            reps.push(piece);
        }
        let (members, embeds) = classes.get_mut(idx);
        members.push(i);
        embeds.push(verts);
    }

    let mut groups = Vec::new();
    let mut vertex_sets = Vec::new();
    for ((_, _, (members, sets)), piece) in classes.into_items().into_iter().zip(reps) {
        groups.push(PieceGroup { piece, members });
        vertex_sets.push(sets);
    }
    let largest = (0..groups.len())
        .max_by_key(|&i| (groups[i].members.len(), std::cmp::Reverse(i)))
        .expect("at least one copy");

    let witness = power_witness(f, &groups[largest].piece, &vertex_sets[largest], &image_roots)?;
    Ok(PowerImageGrouping {
        groups,
        largest,
        witness,
    })
}

/// Copies of `piece` on the given vertex sets of `f`, deduplicated by edge
/// set, assembled into a labelled union on the vertices they use.
fn power_witness(f: &Graph, piece: &RootedGraph, sets: &[Vec<Vertex>], image_roots: &[Vertex]) -> Result<LabeledUnion> {
    use crate::iso::Embedder;

    let colors = piece.pointwise_colors();
    let mut copies: Vec<Vec<Vertex>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for verts in sets {
        let target = f.induced(verts);
        let tcolors: Vec<u32> = verts
            .iter()
            .map(|w| image_roots.iter().position(|r| r == w).map_or(0, |i| i as u32 + 1))
            .collect();
        let iso = Embedder::new(piece.graph(), &target)
            .colors(&colors, &tcolors)
            .first()
            .ok_or_else(|| Error::Certificate("piece is not isomorphic to its type".into()))?;
        let copy: Vec<Vertex> = iso.iter().map(|&i| verts[i]).collect();
        let mut edges: Vec<_> = piece
            .graph()
            .edges()
            .iter()
            .map(|&(a, b)| (copy[a].min(copy[b]), copy[a].max(copy[b])))
            .collect();
        edges.sort_unstable();
        if seen.insert(edges) {
            copies.push(copy);
        }
    }

    // Compact onto the vertices used, roots first.
    let mut used: Vec<Vertex> = image_roots.to_vec();
    for c in &copies {
        for &w in c {
            if !used.contains(&w) {
                used.push(w);
            }
        }
    }
    let index: HashMap<Vertex, Vertex> = used.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let copies: Vec<Vec<Vertex>> = copies
        .into_iter()
        .map(|c| c.iter().map(|w| index[w]).collect())
        .collect();
    let edges = copies
        .iter()
        .flat_map(|c| piece.graph().edges().iter().map(move |&(a, b)| (c[a], c[b])));
    let g = Graph::from_edges_dedup(used.len(), edges)?;
    let witness = LabeledUnion {
        union: RootedGraph::new_unchecked(g, (0..image_roots.len()).collect()),
        copies,
    };
    witness.check(piece)?;
    Ok(witness)
}
