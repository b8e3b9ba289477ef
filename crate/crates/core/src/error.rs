use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::local_iso::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("every vertex is a root; the root set must be a proper subset")]
    NoFreeVertex,

    #[error("graph has {0} edge(s); at least two are required")]
    TooFewEdges(usize),

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("{what}: budget exceeded ({reached} > {limit})")]
    Budget {
        what: &'static str,
        reached: u128,
        limit: u128,
    },

    #[error("source graph is not a forest")]
    NotAForest,

    #[error("source graph must be unrooted")]
    RootedSource,

    #[error("not a local isomorphism: {0}")]
    InvalidLocalMap(Violation),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("zero has no inverse")]
    ZeroInverse,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("gate failure: {0}")]
    Gate(String),

    #[error("missing witness: {0}")]
    MissingWitness(String),

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn budget(what: &'static str, reached: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::Budget {
            what,
            reached: reached.into(),
            limit: limit.into(),
        }
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Budget { .. } => 3,
            Error::Io { .. } | Error::Csv(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
