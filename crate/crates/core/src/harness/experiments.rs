//! End-to-end experiments producing one record per trial.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::count::{contains_subgraph, count_subgraph_copies};
use crate::density::{density_m, rooted_density, Rational};
use crate::error::{Error, Result};
use crate::field::next_prime;
use crate::graph::{Graph, RootedGraph};
use crate::local_iso::enumerate_local_images;
use crate::polygraph::{build_poly_graph, prune_bad_roots, PolyGraphParams};
use crate::power::{is_power_free, TreePowerSpec};
use crate::transfer::{deletion_construct, sample_gnp, transfer_subgraph, trial_seed, GnpConfig};

use super::config::{parse_graph_ref, ExperimentConfig, Mode};
use super::record::ExperimentRecord;
use super::stats::{log_log_slope, mean_se, LinearFit};

/// Freeness of a trial graph is checked exactly when the root placement
/// space `n^r` is at most this large.
pub const VERIFY_PLACEMENTS: u128 = 100_000_000;

/// Seed for a labelled sub-task of a run.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(seed, |s, &x| trial_seed(s, x))
}

fn sort_records(records: &mut [ExperimentRecord]) {
    records.sort_by_key(ExperimentRecord::sort_key);
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// `(b, a)` with `b / a` equal to the smallest rooted density in the family.
fn default_ratio(family: &[RootedGraph]) -> Result<(usize, usize)> {
    let mut best: Option<Rational> = None;
    for f in family {
        let r = rooted_density(f)?.value;
        best = Some(best.map_or(r, |b| b.min(r)));
    }
    let r = best.ok_or_else(|| Error::Config("the rooted family is empty".into()))?;
    Ok((*r.numer() as usize, *r.denom() as usize))
}

/// Refuses to run unless every member has rooted density at least `b / a`.
pub fn density_gate(family: &[RootedGraph], a: usize, b: usize) -> Result<()> {
    if a == 0 {
        return Ok(());
    }
    let ratio = Rational::new(b as i64, a as i64);
    for (i, f) in family.iter().enumerate() {
        let rho = rooted_density(f)?.value;
        if rho < ratio {
            return Err(Error::Gate(format!(
                "member {i} has rooted density {rho} < b/a = {ratio}"
            )));
        }
    }
    Ok(())
}

fn power_free_checked(g: &Graph, spec: &TreePowerSpec) -> Result<(bool, bool)> {
    let space = (g.n() as u128)
        .checked_pow(spec.base().roots().len() as u32)
        .unwrap_or(u128::MAX);
    if space > VERIFY_PLACEMENTS {
        return Ok((false, false));
    }
    Ok((true, is_power_free(g, spec)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolygraphExperiment {
    pub family: Vec<RootedGraph>,
    pub h: Graph,
    pub a: usize,
    pub b: usize,
    pub primes: Vec<u64>,
    pub trials: u64,
    pub prune_threshold: u64,
    pub seed: u64,
    pub config_hash: String,
}

impl PolygraphExperiment {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let family = match (&cfg.family, &cfg.tree) {
            (Some(f), _) => f.iter().map(|s| parse_graph_ref(s)).collect::<Result<Vec<_>>>()?,
            (None, Some(_)) => vec![cfg.rooted_tree()?],
            (None, None) => return Err(Error::Config("a tree or family is required".into())),
        };
        let (b0, a0) = default_ratio(&family)?;
        let h = match &cfg.h {
            Some(_) => cfg.graph_field("h", &cfg.h)?,
            None => Graph::path(2),
        };
        Ok(PolygraphExperiment {
            family,
            h,
            a: cfg.a.unwrap_or(a0),
            b: cfg.b.unwrap_or(b0),
            primes: cfg.q.clone().ok_or_else(|| Error::Config("q is required".into()))?,
            trials: cfg.trials.unwrap_or(20),
            prune_threshold: cfg.prune_threshold.unwrap_or(8),
            seed: cfg.seed.expect("validated"),
            config_hash: cfg.hash(),
        })
    }

    /// `v(H) - (a / b) e(H)`.
    pub fn target_slope(&self) -> f64 {
        self.h.n() as f64 - self.a as f64 / self.b as f64 * self.h.m() as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolygraphOutcome {
    #[serde(skip)]
    pub records: Vec<ExperimentRecord>,
    /// Slope of `ln N_H` against `ln q^b` over all trials.
    pub slope: Option<LinearFit>,
    pub target_slope: f64,
}

/// Builds, prunes and measures one polynomial graph per (prime, trial).
pub fn run_polygraph_experiment(exp: &PolygraphExperiment) -> Result<PolygraphOutcome> {
    density_gate(&exp.family, exp.a, exp.b)?;
    let c = exp.prune_threshold;
    let specs = exp
        .family
        .iter()
        .map(|f| TreePowerSpec::new(f.clone(), c as usize + 1))
        .collect::<Result<Vec<_>>>()?;
    let tasks: Vec<(u64, u64)> = exp
        .primes
        .iter()
        .flat_map(|&q| (0..exp.trials).map(move |t| (q, t)))
        .collect();
    let mut records = tasks
        .par_iter()
        .map(|&(q, t)| -> Result<ExperimentRecord> {
            let start = Instant::now();
            let seed = derive_seed(exp.seed, &[q, t]);
            let params = PolyGraphParams::derive(q, exp.b, exp.a, exp.family.clone(), exp.h.clone(), c)?;
            let g = build_poly_graph(&params, seed)?;
            let pruned = prune_bad_roots(&g, &exp.family, c)?;
            let nh = if exp.h == Graph::path(2) {
                pruned.graph.m() as u64
            } else {
                count_subgraph_copies(&pruned.graph, &exp.h)
            };
            let mut free = true;
            for spec in &specs {
                free &= is_power_free(&pruned.graph, spec)?;
            }
            Ok(ExperimentRecord {
                config_hash: exp.config_hash.clone(),
                mode: Mode::Polygraph.name().into(),
                seed,
                n: params.vertex_count(),
                p: 1.0,
                q,
                b: exp.b as u64,
                a: exp.a as u64,
                ell: c + 1,
                m: pruned.graph.n() as u64,
                edges: pruned.graph.m() as u64,
                nh_count: nh,
                bad_tuples: pruned.bad_tuples as u64,
                free_checked: true,
                free,
                runtime_ms: elapsed_ms(start),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    sort_records(&mut records);
    let xs: Vec<f64> = records.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.nh_count as f64).collect();
    Ok(PolygraphOutcome {
        slope: log_log_slope(&xs, &ys),
        target_slope: exp.target_slope(),
        records,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineExperiment {
    pub mode: Mode,
    pub tree: RootedGraph,
    pub h: Graph,
    pub a: usize,
    pub b: usize,
    pub ns: Vec<usize>,
    pub ps: Vec<f64>,
    pub trials: u64,
    pub prune_threshold: u64,
    pub m_multiplier: f64,
    pub seed: u64,
    pub config_hash: String,
}

impl PipelineExperiment {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let mode = cfg.mode()?;
        if !matches!(mode, Mode::GnpPipeline | Mode::Generalized) {
            return Err(Error::Config(format!("mode {} is not a pipeline mode", mode.name())));
        }
        let tree = cfg.rooted_tree()?;
        let (b0, a0) = default_ratio(std::slice::from_ref(&tree))?;
        let h = match (&cfg.h, mode) {
            (Some(_), _) => cfg.graph_field("h", &cfg.h)?,
            (None, Mode::GnpPipeline) => Graph::path(2),
            (None, _) => return Err(Error::Config("h is required".into())),
        };
        Ok(PipelineExperiment {
            mode,
            tree,
            h,
            a: cfg.a.unwrap_or(a0),
            b: cfg.b.unwrap_or(b0),
            ns: cfg.n.clone().ok_or_else(|| Error::Config("n is required".into()))?,
            ps: cfg.p.clone().ok_or_else(|| Error::Config("p is required".into()))?,
            trials: cfg.trials.unwrap_or(20),
            prune_threshold: cfg.prune_threshold.unwrap_or(8),
            m_multiplier: cfg.m_multiplier.unwrap_or(8.0),
            seed: cfg.seed.expect("validated"),
            config_hash: cfg.hash(),
        })
    }

    /// Template order for a given `n` and `p`:
    /// `max(⌈mult · e(H) · p · n⌉, v(H) + 1)`.
    pub fn template_order(&self, n: usize, p: f64) -> usize {
        let m = (self.m_multiplier * self.h.m() as f64 * p * n as f64).ceil() as usize;
        m.max(self.h.n() + 1)
    }

    /// Smallest prime `q` with `q^b >= m`.
    pub fn prime_for(&self, m: usize) -> u64 {
        let mut q = next_prime(2);
        while (q as u128).pow(self.b as u32) < m as u128 {
            q = next_prime(q + 1);
        }
        q
    }

    /// `p n² >= 100` for edges, `p^{m(H)} n >= 100` otherwise.
    pub fn regime_guard(&self, n: usize, p: f64) -> Result<()> {
        let (value, what) = match self.mode {
            Mode::GnpPipeline => (p * (n as f64).powi(2), "p n^2"),
            _ => {
                let mh = density_m(&self.h)?.value;
                let e = *mh.numer() as f64 / *mh.denom() as f64;
                (p.powf(e) * n as f64, "p^m(H) n")
            }
        };
        if value < 100.0 {
            return Err(Error::Gate(format!(
                "{what} = {value:.3} is below 100 at n = {n}, p = {p}"
            )));
        }
        Ok(())
    }

    /// Slope targets `e - (a/b) e` in `p` and `v - (a/b) e` in `n`.
    pub fn targets(&self) -> (f64, f64) {
        let (v, e) = (self.h.n() as f64, self.h.m() as f64);
        let r = self.a as f64 / self.b as f64;
        (e - r * e, v - r * e)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineOutcome {
    #[serde(skip)]
    pub records: Vec<ExperimentRecord>,
    /// Number of rooted local images of the tree used for pruning.
    pub family_size: usize,
    /// Power of the tree the output is guaranteed to avoid.
    pub ell_guard: usize,
    /// For each `n`, the slope of `ln mean N_H(G')` against `ln p`.
    pub p_slopes: Vec<(usize, LinearFit)>,
    /// For each `p`, the slope of `ln mean N_H(G')` against `ln n`.
    pub n_slopes: Vec<(f64, LinearFit)>,
    pub target_p_slope: f64,
    pub target_n_slope: f64,
    /// Trials whose host had maximum degree above `2pn`.
    pub degree_flags: usize,
}

/// Per trial: sample `G(n, p)`, build and prune a polynomial template of
/// order about `m`, transfer, and measure the kept subgraph.
pub fn run_pipeline(exp: &PipelineExperiment) -> Result<PipelineOutcome> {
    let tree = &exp.tree;
    if !tree.graph().is_forest() {
        return Err(Error::NotAForest);
    }
    density_gate(std::slice::from_ref(tree), exp.a, exp.b)?;
    let family: Vec<RootedGraph> = enumerate_local_images(tree, tree.n())?
        .into_iter()
        .map(|m| m.target().clone())
        .collect();
    density_gate(&family, exp.a, exp.b)?;
    let c = exp.prune_threshold;
    let ell_guard = c as usize * family.len() + 1;
    let spec = TreePowerSpec::tree(tree.clone(), ell_guard)?;
    for &n in &exp.ns {
        for &p in &exp.ps {
            exp.regime_guard(n, p)?;
        }
    }

    let mut tasks = Vec::new();
    for &n in &exp.ns {
        for &p in &exp.ps {
            for t in 0..exp.trials {
                tasks.push((n, p, t));
            }
        }
    }
    let results = tasks
        .par_iter()
        .map(|&(n, p, t)| -> Result<(ExperimentRecord, bool)> {
            let start = Instant::now();
            let seed = derive_seed(exp.seed, &[n as u64, p.to_bits(), t]);
            let m = exp.template_order(n, p);
            let q = exp.prime_for(m);
            let params = PolyGraphParams::derive(q, exp.b, exp.a, family.clone(), exp.h.clone(), c)?;
            let raw = build_poly_graph(&params, derive_seed(seed, &[1]))?;
            let template = prune_bad_roots(&raw, &family, c)?;
            let host = sample_gnp(&GnpConfig {
                n,
                p,
                seed: derive_seed(seed, &[0]),
            })?;
            let flagged = host.max_degree() as f64 > 2.0 * p * n as f64;
            let kept = transfer_subgraph(&host, &template.graph, derive_seed(seed, &[2]))?.graph;
            let nh = if exp.h == Graph::path(2) {
                kept.m() as u64
            } else {
                count_subgraph_copies(&kept, &exp.h)
            };
            let (free_checked, free) = power_free_checked(&kept, &spec)?;
            let record = ExperimentRecord {
                config_hash: exp.config_hash.clone(),
                mode: exp.mode.name().into(),
                seed,
                n: n as u64,
                p,
                q,
                b: exp.b as u64,
                a: exp.a as u64,
                ell: ell_guard as u64,
                m: template.graph.n() as u64,
                edges: kept.m() as u64,
                nh_count: nh,
                bad_tuples: template.bad_tuples as u64,
                free_checked,
                free,
                runtime_ms: elapsed_ms(start),
            };
            Ok((record, flagged))
        })
        .collect::<Result<Vec<_>>>()?;
    let degree_flags = results.iter().filter(|(_, f)| *f).count();
    let mut records: Vec<ExperimentRecord> = results.into_iter().map(|(r, _)| r).collect();
    sort_records(&mut records);

    let mean_at = |n: usize, p: f64| {
        let xs: Vec<f64> = records
            .iter()
            .filter(|r| r.n == n as u64 && r.p == p)
            .map(|r| r.nh_count as f64)
            .collect();
        mean_se(&xs).mean
    };
    let p_slopes = exp
        .ns
        .iter()
        .filter_map(|&n| {
            let ys: Vec<f64> = exp.ps.iter().map(|&p| mean_at(n, p)).collect();
            log_log_slope(&exp.ps, &ys).map(|f| (n, f))
        })
        .collect();
    let n_slopes = exp
        .ps
        .iter()
        .filter_map(|&p| {
            let xs: Vec<f64> = exp.ns.iter().map(|&n| n as f64).collect();
            let ys: Vec<f64> = exp.ns.iter().map(|&n| mean_at(n, p)).collect();
            log_log_slope(&xs, &ys).map(|f| (p, f))
        })
        .collect();
    let (target_p_slope, target_n_slope) = exp.targets();
    Ok(PipelineOutcome {
        records,
        family_size: family.len(),
        ell_guard,
        p_slopes,
        n_slopes,
        target_p_slope,
        target_n_slope,
        degree_flags,
    })
}

/// The edge-counting pipeline (`H = K_2`).
pub fn run_random_turan_pipeline(exp: &PipelineExperiment) -> Result<PipelineOutcome> {
    if exp.h != Graph::path(2) || exp.mode != Mode::GnpPipeline {
        return Err(Error::Config("the edge pipeline counts single edges".into()));
    }
    run_pipeline(exp)
}

/// The pipeline counting copies of a general `H`.
pub fn run_generalized_pipeline(exp: &PipelineExperiment) -> Result<PipelineOutcome> {
    if exp.mode != Mode::Generalized {
        return Err(Error::Config("expected mode generalized".into()));
    }
    run_pipeline(exp)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeletionExperiment {
    pub family: Vec<Graph>,
    pub ns: Vec<usize>,
    pub ps: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub config_hash: String,
}

impl DeletionExperiment {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let family = cfg
            .family
            .as_ref()
            .ok_or_else(|| Error::Config("family is required".into()))?
            .iter()
            .map(|s| parse_graph_ref(s).map(|g| g.graph().clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(DeletionExperiment {
            family,
            ns: cfg.n.clone().ok_or_else(|| Error::Config("n is required".into()))?,
            ps: cfg.p.clone().ok_or_else(|| Error::Config("p is required".into()))?,
            trials: cfg.trials.unwrap_or(50),
            seed: cfg.seed.expect("validated"),
            config_hash: cfg.hash(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeletionOutcome {
    #[serde(skip)]
    pub records: Vec<ExperimentRecord>,
    /// `(n, p, mean retained edge fraction, standard error)`.
    pub retained: Vec<(usize, f64, f64, f64)>,
}

/// Samples `G(n, p)` and applies the deletion method for the family. In the
/// records, `m` is the input edge count, `edges` the output edge count,
/// `nh_count` the number of critical copies and `bad_tuples` the number of
/// deleted edges.
pub fn run_deletion_experiment(exp: &DeletionExperiment) -> Result<DeletionOutcome> {
    let mut tasks = Vec::new();
    for &n in &exp.ns {
        for &p in &exp.ps {
            for t in 0..exp.trials {
                tasks.push((n, p, t));
            }
        }
    }
    let mut records = tasks
        .par_iter()
        .map(|&(n, p, t)| -> Result<ExperimentRecord> {
            let start = Instant::now();
            let seed = derive_seed(exp.seed, &[n as u64, p.to_bits(), t]);
            let g = sample_gnp(&GnpConfig { n, p, seed })?;
            let d = deletion_construct(&g, &exp.family)?;
            let free = exp.family.iter().all(|f| !contains_subgraph(&d.graph, f));
            Ok(ExperimentRecord {
                config_hash: exp.config_hash.clone(),
                mode: Mode::Deletion.name().into(),
                seed,
                n: n as u64,
                p,
                q: 0,
                b: 0,
                a: 0,
                ell: 0,
                m: g.m() as u64,
                edges: d.graph.m() as u64,
                nh_count: d.copies.iter().sum(),
                bad_tuples: d.deleted_edges as u64,
                free_checked: true,
                free,
                runtime_ms: elapsed_ms(start),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    sort_records(&mut records);
    let mut retained = Vec::new();
    for &n in &exp.ns {
        for &p in &exp.ps {
            let fr: Vec<f64> = records
                .iter()
                .filter(|r| r.n == n as u64 && r.p == p)
                .map(|r| if r.m == 0 { 1.0 } else { r.edges as f64 / r.m as f64 })
                .collect();
            let s = mean_se(&fr);
            retained.push((n, p, s.mean, s.se));
        }
    }
    Ok(DeletionOutcome { records, retained })
}
