//! Line-delimited JSON run records.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use samf_core::FusionConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// One processed pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub pair: String,
    pub inputs: [String; 2],
    pub out: Option<String>,
    pub q_mi: Option<f64>,
    /// Wall-clock time of the fusion; the only non-reproducible field.
    pub ms: f64,
    pub config_hash: String,
    pub config: FusionConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Serial appender; callers hand it finished records one at a time.
pub struct ManifestWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl ManifestWriter {
    /// Opens `path`, truncating it unless `append` is set.
    pub fn open(path: &Path, append: bool) -> Result<Self> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(|e| CliError::unwritable(parent, e))?;
        }
        let file = OpenOptions::new()
            .create(true)
            .write(true)
            .append(append)
            .truncate(!append)
            .open(path)
            .map_err(|e| CliError::unwritable(path, e))?;
        Ok(Self {
            path: path.to_path_buf(),
            out: BufWriter::new(file),
        })
    }

    pub fn append(&mut self, record: &Record) -> Result<()> {
        let line = serde_json::to_string(record).expect("record serializes");
        writeln!(self.out, "{line}").map_err(|e| CliError::unwritable(&self.path, e))
    }

    pub fn finish(mut self) -> Result<()> {
        self.out
            .flush()
            .map_err(|e| CliError::unwritable(&self.path, e))
    }
}

pub fn read_manifest(path: &Path) -> Result<Vec<Record>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::unreadable(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| CliError::unreadable(path, e)))
        .collect()
}
