//! Experiment configuration: a JSON document whose fields can be overridden
//! one by one.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::graph::{fixtures, Graph, RootedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Density,
    Liso,
    Polygraph,
    Transfer,
    GnpPipeline,
    Generalized,
    Deletion,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Density => "density",
            Mode::Liso => "liso",
            Mode::Polygraph => "polygraph",
            Mode::Transfer => "transfer",
            Mode::GnpPipeline => "gnp-pipeline",
            Mode::Generalized => "generalized",
            Mode::Deletion => "deletion",
        }
    }

    pub fn is_randomized(self) -> bool {
        !matches!(self, Mode::Density | Mode::Liso)
    }
}

/// Every field is optional so that a partial document can act as a set of
/// overrides. Graphs are given as named references (see [`parse_graph_ref`])
/// or file paths.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Option<Mode>,
    pub tree: Option<String>,
    pub roots: Option<Vec<usize>>,
    pub ell: Option<usize>,
    pub family: Option<Vec<String>>,
    pub h: Option<String>,
    pub host: Option<String>,
    pub template: Option<String>,
    pub q: Option<Vec<u64>>,
    pub b: Option<usize>,
    pub a: Option<usize>,
    pub p: Option<Vec<f64>>,
    pub n: Option<Vec<usize>>,
    pub trials: Option<u64>,
    pub prune_threshold: Option<u64>,
    pub m_multiplier: Option<f64>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(mut self, top: &ExperimentConfig) -> Self {
        overlay!(
            self,
            top,
            mode,
            tree,
            roots,
            ell,
            family,
            h,
            host,
            template,
            q,
            b,
            a,
            p,
            n,
            trials,
            prune_threshold,
            m_multiplier,
            seed,
            output
        );
        self
    }

    pub fn mode(&self) -> Result<Mode> {
        self.mode.ok_or_else(|| Error::Config("mode is required".into()))
    }

    pub fn validate(&self) -> Result<()> {
        let mode = self.mode()?;
        if mode.is_randomized() && self.seed.is_none() {
            return Err(Error::Config(format!("mode {} needs an explicit seed", mode.name())));
        }
        if let Some(q) = &self.q {
            if let Some(bad) = q.iter().find(|&&q| !is_prime(q)) {
                return Err(Error::Config(format!("q = {bad} is not a prime")));
            }
        }
        if let Some(p) = &self.p {
            if let Some(bad) = p.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::Config(format!("p = {bad} is not a probability")));
            }
        }
        if self.ell == Some(0) {
            return Err(Error::Config("ell must be at least 1".into()));
        }
        if self.b == Some(0) {
            return Err(Error::Config("b must be at least 1".into()));
        }
        if matches!(self.m_multiplier, Some(x) if x.is_nan() || x <= 0.0) {
            return Err(Error::Config("m_multiplier must be positive".into()));
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form, with
    /// the output path left out.
    pub fn hash(&self) -> String {
        let keyed = ExperimentConfig {
            output: None,
            ..self.clone()
        };
        let json = serde_json::to_string(&keyed).expect("config serialises");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// The tree with `roots` applied when given.
    pub fn rooted_tree(&self) -> Result<RootedGraph> {
        let name = self
            .tree
            .as_deref()
            .ok_or_else(|| Error::Config("tree is required".into()))?;
        let t = parse_graph_ref(name)?;
        match &self.roots {
            Some(r) => RootedGraph::new(t.graph().clone(), r.clone()),
            None => Ok(t),
        }
    }

    pub fn graph_field(&self, field: &'static str, value: &Option<String>) -> Result<Graph> {
        let name = value
            .as_deref()
            .ok_or_else(|| Error::Config(format!("{field} is required")))?;
        Ok(parse_graph_ref(name)?.graph().clone())
    }
}

fn numbers(name: &str, args: &str) -> Result<Vec<usize>> {
    args.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad argument `{t}` in graph reference `{name}`")))
        })
        .collect()
}

/// Resolves a graph reference. Named forms:
/// `star:s`, `path-ends:k`, `spider:k`, `double-star:a,b`, `subdivided-claw`
/// (rooted trees), and `path:k`, `cycle:k`, `complete:k`, `kst:s,t`,
/// `empty:k` (unrooted). Anything else is read as a graph file.
pub fn parse_graph_ref(name: &str) -> Result<RootedGraph> {
    let (kind, args) = name.split_once(':').unwrap_or((name, ""));
    let nums = || numbers(name, args);
    let one = || -> Result<usize> {
        match nums()?[..] {
            [k] => Ok(k),
            _ => Err(Error::Config(format!("`{name}` takes one argument"))),
        }
    };
    let two = || -> Result<(usize, usize)> {
        match nums()?[..] {
            [a, b] => Ok((a, b)),
            _ => Err(Error::Config(format!("`{name}` takes two arguments"))),
        }
    };
    let positive = |k: usize, min: usize| {
        if k < min {
            Err(Error::Config(format!("`{name}` needs an argument of at least {min}")))
        } else {
            Ok(k)
        }
    };
    Ok(match kind {
        "star" => fixtures::star_at_leaves(positive(one()?, 1)?),
        "path-ends" => fixtures::path_at_ends(positive(one()?, 3)?),
        "spider" => fixtures::spider_at_feet(positive(one()?, 1)?),
        "double-star" => {
            let (a, b) = two()?;
            fixtures::double_star_at_leaves(a, b)
        }
        "subdivided-claw" => fixtures::subdivided_claw(),
        "path" => RootedGraph::unrooted(Graph::path(one()?)),
        "cycle" => RootedGraph::unrooted(Graph::cycle(positive(one()?, 3)?)),
        "complete" => RootedGraph::unrooted(Graph::complete(one()?)),
        "empty" => RootedGraph::unrooted(Graph::empty(one()?)),
        "kst" => {
            let (s, t) = two()?;
            RootedGraph::unrooted(Graph::complete_bipartite(s, t))
        }
        _ => {
            let path = Path::new(name);
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            RootedGraph::from_text(&text)?
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_graphs() {
        assert_eq!(parse_graph_ref("star:3").unwrap(), fixtures::star_at_leaves(3));
        assert_eq!(
            parse_graph_ref("kst:2,3").unwrap().graph(),
            &Graph::complete_bipartite(2, 3)
        );
        assert_eq!(parse_graph_ref("cycle:5").unwrap().m(), 5);
        assert!(parse_graph_ref("cycle:2").is_err());
        assert!(parse_graph_ref("kst:2").is_err());
        assert!(matches!(parse_graph_ref("/no/such/file"), Err(Error::Io { .. })));
    }

    #[test]
    fn graph_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.txt");
        std::fs::write(&path, fixtures::subdivided_claw().to_text()).unwrap();
        assert_eq!(
            parse_graph_ref(path.to_str().unwrap()).unwrap(),
            fixtures::subdivided_claw()
        );
    }

    #[test]
    fn validation() {
        let mut c = ExperimentConfig::from_json(r#"{"mode": "polygraph", "q": [11, 13]}"#).unwrap();
        assert!(c.validate().is_err());
        c.seed = Some(1);
        c.validate().unwrap();
        c.q = Some(vec![11, 15]);
        assert!(c.validate().is_err());
        assert!(ExperimentConfig::from_json(r#"{"mode": "polygraph", "bogus": 1}"#).is_err());
        let d = ExperimentConfig::from_json(r#"{"mode": "density"}"#).unwrap();
        d.validate().unwrap();
    }

    #[test]
    fn overlay_and_hash() {
        let base = ExperimentConfig::from_json(r#"{"mode": "deletion", "seed": 1, "n": [100]}"#).unwrap();
        let top = ExperimentConfig {
            seed: Some(2),
            ..Default::default()
        };
        let merged = base.clone().overlay(&top);
        assert_eq!(merged.seed, Some(2));
        assert_eq!(merged.n, Some(vec![100]));
        assert_ne!(merged.hash(), base.hash());
        assert_eq!(base.hash(), base.clone().hash());
        assert_eq!(base.hash().len(), 16);
        let elsewhere = ExperimentConfig {
            output: Some("x.csv".into()),
            ..base.clone()
        };
        assert_eq!(elsewhere.hash(), base.hash());
    }
}
