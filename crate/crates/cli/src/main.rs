use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use treepow::harness::record::to_csv;
use treepow::harness::{
    emit_results, parse_graph_ref, run_deletion_experiment, run_generalized_pipeline, run_polygraph_experiment,
    run_random_turan_pipeline, DeletionExperiment, ExperimentConfig, ExperimentRecord, Mode, PipelineExperiment,
    PolygraphExperiment,
};
use treepow::{
    build_poly_graph, density_m, enumerate_local_images, find_good_set, is_balanced, local_quotients, prune_bad_roots,
    rooted_density, transfer_expected_count_check, transfer_subgraph, two_density, verify_density_monotone,
    verify_good_set, Error, Graph, LocalMap, PolyGraphParams, Result, RootedGraph,
};

#[derive(Parser)]
#[command(
    name = "treepow",
    version,
    about = "Tree powers, local isomorphisms and random polynomial graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rooted density of a rooted graph, plus m and m2 of the underlying graph.
    Density {
        /// Graph reference (e.g. `star:3`, `subdivided-claw`) or file.
        graph: String,
        #[arg(long, value_delimiter = ',')]
        roots: Option<Vec<usize>>,
    },
    /// Local isomorphisms.
    #[command(subcommand)]
    Liso(LisoCommand),
    /// Random polynomial graphs.
    #[command(subcommand)]
    Polygraph(PolygraphCommand),
    /// Random transference onto a template graph.
    #[command(subcommand)]
    Transfer(TransferCommand),
    /// The G(n, p) pipelines.
    #[command(subcommand)]
    Gnp(GnpCommand),
    /// The deletion method in G(n, p).
    #[command(subcommand)]
    Deletion(DeletionCommand),
}

#[derive(Subcommand)]
enum LisoCommand {
    /// List the local images of a graph up to isomorphism.
    Enumerate {
        graph: String,
        #[arg(long, value_delimiter = ',')]
        roots: Option<Vec<usize>>,
        /// Largest image order; defaults to the order of the graph.
        #[arg(long)]
        max_order: Option<usize>,
        /// List every quotient map instead of one per image.
        #[arg(long)]
        all: bool,
    },
    /// Find a good set for a map from an unrooted forest.
    Goodset(MapArgs),
    /// Validate a map and compare rooted densities of its ends.
    Verify(MapArgs),
}

#[derive(Args)]
struct MapArgs {
    #[arg(long)]
    source: String,
    #[arg(long, value_delimiter = ',')]
    source_roots: Option<Vec<usize>>,
    #[arg(long)]
    target: String,
    #[arg(long, value_delimiter = ',')]
    target_roots: Option<Vec<usize>>,
    /// `map 0->0 1->1 ...` (the `map` keyword may be omitted).
    #[arg(long)]
    map: String,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum PolygraphCommand {
    /// Build one polynomial graph.
    Build {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        a: usize,
        /// Rooted members whose powers are avoided (repeatable).
        #[arg(long = "tree", required = true)]
        trees: Vec<String>,
        #[arg(long, default_value = "path:2")]
        h: String,
        #[arg(long)]
        seed: u64,
        /// Override the polynomial degree.
        #[arg(long)]
        degree: Option<u32>,
        /// Write the graph here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Delete a vertex of every overloaded root tuple.
    Prune {
        /// Graph file.
        graph: String,
        #[arg(long = "tree", required = true)]
        trees: Vec<String>,
        #[arg(long, default_value_t = 8)]
        threshold: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Edge-count exponent experiment over several primes.
    Experiment(ExperimentArgs),
}

#[derive(Subcommand)]
enum TransferCommand {
    /// Transfer a host graph onto a template with a random map.
    Run {
        #[arg(long)]
        host: String,
        #[arg(long)]
        template: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo check of the expected number of kept copies of H.
    Check {
        #[arg(long)]
        host: String,
        #[arg(long)]
        template: String,
        #[arg(long, default_value = "path:2")]
        h: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum GnpCommand {
    /// Count kept edges of the transferred G(n, p).
    Pipeline(ExperimentArgs),
    /// Count kept copies of a general H.
    Generalized(ExperimentArgs),
}

#[derive(Subcommand)]
enum DeletionCommand {
    Run(ExperimentArgs),
}

/// A JSON config file plus a flag for every field; flags win.
#[derive(Args, Default)]
struct ExperimentArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    tree: Option<String>,
    #[arg(long, value_delimiter = ',')]
    roots: Option<Vec<usize>>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long, value_delimiter = ';')]
    family: Option<Vec<String>>,
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    host: Option<String>,
    #[arg(long)]
    template: Option<String>,
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<u64>>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    prune_threshold: Option<u64>,
    #[arg(long)]
    m_multiplier: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV file to append records to; without it the CSV goes to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl ExperimentArgs {
    fn resolve(&self, mode: Mode) -> Result<ExperimentConfig> {
        let base = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(m) = base.mode {
            if m != mode {
                return Err(Error::Config(format!(
                    "config is for mode {}, not {}",
                    m.name(),
                    mode.name()
                )));
            }
        }
        let flags = ExperimentConfig {
            mode: Some(mode),
            tree: self.tree.clone(),
            roots: self.roots.clone(),
            ell: self.ell,
            family: self.family.clone(),
            h: self.h.clone(),
            host: self.host.clone(),
            template: self.template.clone(),
            q: self.q.clone(),
            b: self.b,
            a: self.a,
            p: self.p.clone(),
            n: self.n.clone(),
            trials: self.trials,
            prune_threshold: self.prune_threshold,
            m_multiplier: self.m_multiplier,
            seed: self.seed,
            output: self.output.clone(),
        };
        let cfg = base.overlay(&flags);
        cfg.validate()?;
        Ok(cfg)
    }
}

fn rooted(name: &str, roots: &Option<Vec<usize>>) -> Result<RootedGraph> {
    let g = parse_graph_ref(name)?;
    match roots {
        Some(r) => RootedGraph::new(g.graph().clone(), r.clone()),
        None => Ok(g),
    }
}

fn unrooted(name: &str) -> Result<Graph> {
    Ok(parse_graph_ref(name)?.graph().clone())
}

fn write_or_print(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json"));
}

/// Records go to `--output` (appended) or stdout; the summary goes to stdout
/// in the first case and stderr in the second.
fn finish(cfg: &ExperimentConfig, records: &[ExperimentRecord], summary: serde_json::Value) -> Result<()> {
    let summary = serde_json::to_string_pretty(&summary)?;
    match &cfg.output {
        Some(path) => {
            emit_results(records, path)?;
            println!("{summary}");
        }
        None => {
            print!("{}", to_csv(records)?);
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn load_map(args: &MapArgs) -> Result<LocalMap> {
    let source = rooted(&args.source, &args.source_roots)?;
    let target = rooted(&args.target, &args.target_roots)?;
    let line = if args.map.trim_start().starts_with("map") {
        args.map.clone()
    } else {
        format!("map {}", args.map)
    };
    let map = LocalMap::parse_line(&line, source.n())?;
    LocalMap::new(source, target, map)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Density { graph, roots } => {
            let g = rooted(&graph, &roots)?;
            let rho = rooted_density(&g)?;
            let mut out = json!({
                "rooted_density": rho.value.to_string(),
                "witness": rho.witness,
                "balanced": is_balanced(&g)?,
            });
            let m = density_m(g.graph())?;
            out["m"] = json!(m.value.to_string());
            if let Ok(m2) = two_density(g.graph()) {
                out["m2"] = json!(m2.value.to_string());
            }
            print_json(&out);
        }
        Command::Liso(LisoCommand::Enumerate {
            graph,
            roots,
            max_order,
            all,
        }) => {
            let g = rooted(&graph, &roots)?;
            let order = max_order.unwrap_or(g.n());
            let maps = if all {
                local_quotients(&g, order)?
            } else {
                enumerate_local_images(&g, order)?
            };
            for m in &maps {
                println!("{}", m.to_line());
                print!("{}", m.target().to_text());
                println!();
            }
            eprintln!("{} map(s)", maps.len());
        }
        Command::Liso(LisoCommand::Goodset(args)) => {
            let map = load_map(&args)?;
            let set = find_good_set(&map)?;
            verify_good_set(&map, &set)?;
            print_json(&json!({
                "vertices": set.vertices,
                "bijection": set.bijection,
                "edge_map": set.edge_map,
            }));
        }
        Command::Liso(LisoCommand::Verify(args)) => {
            let map = load_map(&args)?;
            map.validate().map_err(Error::InvalidLocalMap)?;
            let report = verify_density_monotone(&map)?;
            let cert = report
                .certificate
                .as_ref()
                .map(|c| json!({"x": c.x, "good_set": c.good_set, "e_v": c.e_v, "e_x": c.e_x}));
            print_json(&json!({
                "valid": true,
                "rho_source": report.rho_source.to_string(),
                "rho_target": report.rho_target.to_string(),
                "holds": report.holds,
                "certificate": cert,
            }));
        }
        Command::Polygraph(PolygraphCommand::Build {
            q,
            b,
            a,
            trees,
            h,
            seed,
            degree,
            out,
        }) => {
            let family = trees.iter().map(|t| parse_graph_ref(t)).collect::<Result<Vec<_>>>()?;
            let mut params = PolyGraphParams::derive(q, b, a, family, unrooted(&h)?, 0)?;
            if let Some(d) = degree {
                params = params.with_degree(d);
            }
            let g = build_poly_graph(&params, seed)?;
            eprintln!(
                "q = {q}, b = {b}, a = {a}, s = {}, d = {}: {} vertices, {} edges",
                params.s,
                params.d,
                g.n(),
                g.m()
            );
            write_or_print(&g.to_text(), &out)?;
        }
        Command::Polygraph(PolygraphCommand::Prune {
            graph,
            trees,
            threshold,
            out,
        }) => {
            let g = unrooted(&graph)?;
            let family = trees.iter().map(|t| parse_graph_ref(t)).collect::<Result<Vec<_>>>()?;
            let pruned = prune_bad_roots(&g, &family, threshold)?;
            eprintln!(
                "{} bad tuple(s), {} vertex(es) deleted, {} edges left",
                pruned.bad_tuples,
                pruned.deleted.len(),
                pruned.graph.m()
            );
            write_or_print(&pruned.graph.to_text(), &out)?;
        }
        Command::Polygraph(PolygraphCommand::Experiment(args)) => {
            let cfg = args.resolve(Mode::Polygraph)?;
            let out = run_polygraph_experiment(&PolygraphExperiment::from_config(&cfg)?)?;
            finish(&cfg, &out.records, serde_json::to_value(&out)?)?;
        }
        Command::Transfer(TransferCommand::Run {
            host,
            template,
            seed,
            out,
        }) => {
            let (host, template) = (unrooted(&host)?, unrooted(&template)?);
            let t = transfer_subgraph(&host, &template, seed)?;
            eprintln!("kept {} of {} edges", t.graph.m(), host.m());
            write_or_print(&t.graph.to_text(), &out)?;
        }
        Command::Transfer(TransferCommand::Check {
            host,
            template,
            h,
            trials,
            seed,
        }) => {
            let r =
                transfer_expected_count_check(&unrooted(&host)?, &unrooted(&template)?, &unrooted(&h)?, trials, seed)?;
            print_json(&json!({
                "trials": r.trials,
                "nh_host": r.nh_host,
                "nh_template": r.nh_template,
                "template_order": r.template_order,
                "mean_kept": r.mean_kept,
                "se_kept": r.se_kept,
                "bound": r.bound,
                "bound_holds": r.bound_holds(),
                "pr_a": r.pr_a,
                "pr_a_exact": r.pr_a_exact,
                "pr_a_z": r.pr_a_z(),
                "pr_iso": r.pr_iso,
                "pr_iso_exact": r.pr_iso_exact,
                "pr_iso_z": r.pr_iso_z(),
                "vacuous": r.vacuous,
            }));
        }
        Command::Gnp(GnpCommand::Pipeline(args)) => {
            let cfg = args.resolve(Mode::GnpPipeline)?;
            let out = run_random_turan_pipeline(&PipelineExperiment::from_config(&cfg)?)?;
            finish(&cfg, &out.records, serde_json::to_value(&out)?)?;
        }
        Command::Gnp(GnpCommand::Generalized(args)) => {
            let cfg = args.resolve(Mode::Generalized)?;
            let out = run_generalized_pipeline(&PipelineExperiment::from_config(&cfg)?)?;
            finish(&cfg, &out.records, serde_json::to_value(&out)?)?;
        }
        Command::Deletion(DeletionCommand::Run(args)) => {
            let cfg = args.resolve(Mode::Deletion)?;
            let out = run_deletion_experiment(&DeletionExperiment::from_config(&cfg)?)?;
            finish(&cfg, &out.records, serde_json::to_value(&out)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
