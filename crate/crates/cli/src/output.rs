use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Reproducibility header attached to every output.
#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub version: &'static str,
    pub seed: u64,
    /// SHA-256 of the resolved configuration as compact JSON.
    pub config_hash: String,
}

impl Header {
    pub fn new<C: Serialize>(seed: u64, config: &C) -> Self {
        let json = serde_json::to_vec(config).expect("configuration serializes");
        let digest = Sha256::digest(&json);
        Header {
            version: env!("CARGO_PKG_VERSION"),
            seed,
            config_hash: digest.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }

    pub fn csv_comment(&self) -> String {
        format!("# entk {} seed={} config={}\n", self.version, self.seed, self.config_hash)
    }
}

/// JSON payload preceded by its header.
#[derive(Serialize)]
pub struct WithHeader<'a, T: Serialize> {
    pub header: &'a Header,
    #[serde(flatten)]
    pub body: &'a T,
}

pub fn json<T: Serialize>(header: &Header, body: &T) -> String {
    let mut s = serde_json::to_string_pretty(&WithHeader { header, body }).expect("report serializes");
    s.push('\n');
    s
}

pub fn json_compact<T: Serialize>(header: &Header, body: &T) -> String {
    let mut s = serde_json::to_string(&WithHeader { header, body }).expect("state serializes");
    s.push('\n');
    s
}

/// 17 significant digits, locale independent.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// CSV text with the header comment line first.
pub fn csv(header: &Header, columns: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(header.csv_comment().into_bytes());
    w.write_record(columns).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Parse(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Parse(format!("stdout: {e}")))
        }
    }
}
