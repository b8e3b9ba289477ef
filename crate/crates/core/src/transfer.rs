//! Random graphs, transference through a random map onto a template, and
//! the deletion method.

use std::collections::HashSet;
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::count::count_subgraph_copies;
use crate::density::two_density;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::iso::{automorphisms, Embedder};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GnpConfig {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

/// `G(n, p)`: each pair independently with probability `p`, pairs visited
/// in lexicographic order.
pub fn sample_gnp(cfg: &GnpConfig) -> Result<Graph> {
    if !(0.0..=1.0).contains(&cfg.p) {
        return Err(Error::Precondition(format!("p = {} is not a probability", cfg.p)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut edges = Vec::new();
    for u in 0..cfg.n {
        for v in u + 1..cfg.n {
            if rng.gen::<f64>() < cfg.p {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_sorted_unique(cfg.n, edges))
}

/// Uniform map from `0..n` to `0..m`.
pub fn sample_map<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Vec<Vertex> {
    (0..n).map(|_| rng.gen_range(0..m)).collect()
}

/// Whether the edge `uv` of `host` survives under `phi`: its image must be
/// an edge of `template`, and no other edge at `u` or `v` may share that
/// image. Reads `phi` only on `u`, `v` and their neighbours; returns `None`
/// if one of those is unassigned.
pub fn edge_kept(host: &Graph, template: &Graph, phi: &[Option<Vertex>], u: Vertex, v: Vertex) -> Option<bool> {
    let (pu, pv) = (phi[u]?, phi[v]?);
    let mut kept = template.has_edge(pu, pv);
    for &w in host.neighbors(u) {
        if w != v && phi[w]? == pv {
            kept = false;
        }
    }
    for &w in host.neighbors(v) {
        if w != u && phi[w]? == pu {
            kept = false;
        }
    }
    Some(kept)
}

fn kept_with_full_map(host: &Graph, template: &Graph, phi: &[Vertex], u: Vertex, v: Vertex) -> bool {
    let (pu, pv) = (phi[u], phi[v]);
    template.has_edge(pu, pv)
        && host.neighbors(u).iter().all(|&w| w == v || phi[w] != pv)
        && host.neighbors(v).iter().all(|&w| w == u || phi[w] != pu)
}

/// The subgraph of `host` kept under a given map.
pub fn transfer_with_map(host: &Graph, template: &Graph, phi: &[Vertex]) -> Graph {
    host.filter_edges(|u, v| kept_with_full_map(host, template, phi, u, v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub graph: Graph,
    pub map: Vec<Vertex>,
}

/// Samples a uniform map `V(host) -> V(template)` and keeps the edges that
/// pass [`edge_kept`].
pub fn transfer_subgraph(host: &Graph, template: &Graph, seed: u64) -> Result<Transfer> {
    if template.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let map = sample_map(host.n(), template.n(), &mut rng);
    Ok(Transfer {
        graph: transfer_with_map(host, template, &map),
        map,
    })
}

/// Monte Carlo comparison of the kept copy count against its lower bound.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferReport {
    pub trials: u64,
    pub nh_host: u64,
    pub nh_template: u64,
    pub template_order: usize,
    /// Mean and standard error of `N_H(G')`.
    pub mean_kept: f64,
    pub se_kept: f64,
    /// `½ N_H(M) m^{-v(H)} N_H(G)`.
    pub bound: f64,
    /// Frequency with which the map restricted to a fixed copy `K` is the
    /// canonical isomorphism onto some copy of `H` in the template (the
    /// lexicographically least among its compositions with automorphisms of
    /// `K`), and the exact value `N_H(M) m^{-v(H)}`.
    pub pr_a: f64,
    pub pr_a_exact: f64,
    /// Same for any isomorphism onto a copy; exact value
    /// `|Aut(H)| N_H(M) m^{-v(H)}`.
    pub pr_iso: f64,
    pub pr_iso_exact: f64,
    /// Set when the bound is zero.
    pub vacuous: bool,
}

impl TransferReport {
    fn z(freq: f64, exact: f64, trials: u64) -> f64 {
        let sd = (exact * (1.0 - exact) / trials as f64).sqrt();
        if sd == 0.0 {
            if freq == exact {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (freq - exact).abs() / sd
        }
    }

    pub fn pr_a_z(&self) -> f64 {
        Self::z(self.pr_a, self.pr_a_exact, self.trials)
    }

    pub fn pr_iso_z(&self) -> f64 {
        Self::z(self.pr_iso, self.pr_iso_exact, self.trials)
    }

    /// `mean_kept >= bound - 3 se`.
    pub fn bound_holds(&self) -> bool {
        self.mean_kept >= self.bound - 3.0 * self.se_kept
    }
}

/// Seed of trial `t` derived from a root seed.
pub fn trial_seed(seed: u64, t: u64) -> u64 {
    let mut z = seed ^ t.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Estimates `E[N_H(G')]` and the probability of the event that a fixed copy
/// of `H` in `host` is mapped isomorphically onto a copy in `template`.
/// Requires `m >= 4 e(H) Δ(host)`.
pub fn transfer_expected_count_check(
    host: &Graph,
    template: &Graph,
    h: &Graph,
    trials: u64,
    seed: u64,
) -> Result<TransferReport> {
    let m = template.n();
    if m < 4 * h.m() * host.max_degree() {
        return Err(Error::Precondition(format!(
            "template order {m} is below 4 e(H) Δ = {}",
            4 * h.m() * host.max_degree()
        )));
    }
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let nh_host = count_subgraph_copies(host, h);
    let nh_template = count_subgraph_copies(template, h);
    let scale = (m as f64).powi(-(h.n() as i32));
    let bound = 0.5 * nh_template as f64 * scale * nh_host as f64;
    let auts = automorphisms(h, None);

    // A fixed copy K: the image of the first embedding of H.
    let copy = Embedder::new(h, host).first();

    let (mut sum, mut sum_sq, mut hits_a, mut hits_iso) = (0f64, 0f64, 0u64, 0u64);
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t));
        let phi = sample_map(host.n(), m, &mut rng);
        let kept = transfer_with_map(host, template, &phi);
        let c = count_subgraph_copies(&kept, h) as f64;
        sum += c;
        sum_sq += c * c;
        if let Some(k) = &copy {
            let img: Vec<Vertex> = k.iter().map(|&v| phi[v]).collect();
            if is_isomorphism_onto_copy(h, template, &img) {
                hits_iso += 1;
                // Lexicographically least among img ∘ σ for σ ∈ Aut(H).
                let least = auts.iter().all(|s| {
                    let other: Vec<Vertex> = s.iter().map(|&i| img[i]).collect();
                    img <= other
                });
                hits_a += least as u64;
            }
        }
    }
    let n = trials as f64;
    let mean = sum / n;
    let var = if trials > 1 {
        (sum_sq - n * mean * mean) / (n - 1.0)
    } else {
        0.0
    };
    Ok(TransferReport {
        trials,
        nh_host,
        nh_template,
        template_order: m,
        mean_kept: mean,
        se_kept: (var.max(0.0) / n).sqrt(),
        bound,
        pr_a: hits_a as f64 / n,
        pr_a_exact: nh_template as f64 * scale,
        pr_iso: hits_iso as f64 / n,
        pr_iso_exact: auts.len() as f64 * nh_template as f64 * scale,
        vacuous: bound == 0.0,
    })
}

/// Whether `img` (indexed by the vertices of `h`) is injective and sends
/// every edge of `h` to an edge of `template`.
fn is_isomorphism_onto_copy(h: &Graph, template: &Graph, img: &[Vertex]) -> bool {
    let distinct: HashSet<_> = img.iter().collect();
    distinct.len() == img.len() && h.edges().iter().all(|&(u, v)| template.has_edge(img[u], img[v]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deletion {
    pub graph: Graph,
    /// For each family member, its 2-density-critical subgraph.
    pub critical: Vec<Graph>,
    /// For each family member, the number of copies of the critical subgraph
    /// in the input graph.
    pub copies: Vec<u64>,
    pub deleted_edges: usize,
}

/// Edge sets of all copies of `f` in `g`, each sorted, in sorted order.
fn copy_edge_sets(g: &Graph, f: &Graph) -> Vec<Vec<(Vertex, Vertex)>> {
    let mut seen = HashSet::new();
    let _ = Embedder::new(f, g).for_each(|map| {
        let mut e: Vec<_> = f
            .edges()
            .iter()
            .map(|&(a, b)| (map[a].min(map[b]), map[a].max(map[b])))
            .collect();
        e.sort_unstable();
        seen.insert(e);
        ControlFlow::Continue(())
    });
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// For each family member `F`, takes a subgraph `F'` attaining the
/// 2-density of `F` and deletes the lowest surviving edge of every copy of
/// `F'` in `g` that has not lost an edge yet. The result contains no copy of
/// any `F'`, hence no copy of any `F`.
pub fn deletion_construct(g: &Graph, family: &[Graph]) -> Result<Deletion> {
    let mut removed: HashSet<(Vertex, Vertex)> = HashSet::new();
    let mut critical = Vec::with_capacity(family.len());
    let mut copies = Vec::with_capacity(family.len());
    for f in family {
        let w = two_density(f)?;
        let fp = f.induced(&w.witness);
        let sets = copy_edge_sets(g, &fp);
        copies.push(sets.len() as u64);
        for set in sets {
            if set.iter().any(|e| removed.contains(e)) {
                continue;
            }
            removed.insert(set[0]);
        }
        critical.push(fp);
    }
    let graph = g.filter_edges(|u, v| !removed.contains(&(u, v)));
    Ok(Deletion {
        graph,
        critical,
        copies,
        deleted_edges: removed.len(),
    })
}
