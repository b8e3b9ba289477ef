//! One CSV row per trial.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CSV_HEADER: &str =
    "config_hash,mode,seed,n,p,q,b,a,ell,m,edges,nh_count,bad_tuples,free_checked,free,runtime_ms";

/// Column meanings vary slightly by mode; see the README.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub config_hash: String,
    pub mode: String,
    pub seed: u64,
    pub n: u64,
    pub p: f64,
    pub q: u64,
    pub b: u64,
    pub a: u64,
    pub ell: u64,
    pub m: u64,
    pub edges: u64,
    pub nh_count: u64,
    pub bad_tuples: u64,
    pub free_checked: bool,
    pub free: bool,
    pub runtime_ms: u64,
}

impl ExperimentRecord {
    /// The record with the wall-clock column cleared, for reproducibility
    /// comparisons.
    pub fn without_runtime(&self) -> Self {
        ExperimentRecord {
            runtime_ms: 0,
            ..self.clone()
        }
    }

    pub(crate) fn sort_key(&self) -> (String, String, u64, u64, u64, u64) {
        (
            self.config_hash.clone(),
            self.mode.clone(),
            self.n,
            self.p.to_bits(),
            self.q,
            self.seed,
        )
    }
}

/// Serialises records as CSV rows, header first.
pub fn to_csv(records: &[ExperimentRecord]) -> Result<String> {
    let mut out = format!("{CSV_HEADER}\n");
    out.push_str(&rows(records)?);
    Ok(out)
}

fn rows(records: &[ExperimentRecord]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Appends the records to `path`, writing the header first when the file is
/// new or empty.
pub fn emit_results(records: &[ExperimentRecord], path: &Path) -> Result<()> {
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    let empty = file.metadata().map_err(|e| Error::io(path, e))?.len() == 0;
    let mut text = if empty {
        format!("{CSV_HEADER}\n")
    } else {
        String::new()
    };
    text.push_str(&rows(records)?);
    file.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

pub fn parse_results(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unexpected header `{}`", header.join(",")),
        });
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn read_results(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_results(&text)
}
