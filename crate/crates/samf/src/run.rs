//! Fusing a pair of files, singly or for a whole directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use samf_core::metrics::q_mi;
use samf_core::{run_pipeline, FusionConfig, FusionResult, Intermediates};

use crate::config::config_hash;
use crate::error::{CliError, Result};
use crate::io;
use crate::manifest::{ManifestWriter, Record};

/// Image extensions considered when scanning for pairs.
const EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pair {
    pub stem: String,
    pub a: PathBuf,
    pub b: PathBuf,
}

/// Finds `<stem>-A.<ext>` / `<stem>-B.<ext>` pairs, sorted by stem. Files
/// missing their partner are ignored.
pub fn find_pairs(dir: &Path) -> Result<Vec<Pair>> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::unreadable(dir, e))?;
    let mut halves: BTreeMap<String, [Option<PathBuf>; 2]> = BTreeMap::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::unreadable(dir, e))?.path();
        let (Some(stem), Some(ext)) = (
            path.file_stem().and_then(|s| s.to_str()),
            path.extension().and_then(|s| s.to_str()),
        ) else {
            continue;
        };
        if !EXTENSIONS.contains(&ext.to_ascii_lowercase().as_str()) {
            continue;
        }
        let (base, slot) = if let Some(base) = stem.strip_suffix("-A") {
            (base, 0)
        } else if let Some(base) = stem.strip_suffix("-B") {
            (base, 1)
        } else {
            continue;
        };
        let entry = halves.entry(base.to_string()).or_default();
        // Prefer the lexically smallest path if several extensions exist.
        if entry[slot].as_ref().is_none_or(|p| path < *p) {
            entry[slot] = Some(path);
        }
    }
    Ok(halves
        .into_iter()
        .filter_map(|(stem, [a, b])| Some(Pair { stem, a: a?, b: b? }))
        .collect())
}

pub struct PairOutcome {
    pub result: FusionResult,
    pub q_mi: Option<f64>,
    pub ms: f64,
}

/// Reads, fuses and writes one pair. `q_mi` is measured on luminance against
/// the 8-bit output.
pub fn fuse_files(
    a: &Path,
    b: &Path,
    out: &Path,
    cfg: &FusionConfig,
    with_metrics: bool,
    keep_intermediates: bool,
) -> Result<PairOutcome> {
    let i1 = io::read_color(a)?;
    let i2 = io::read_color(b)?;
    let start = Instant::now();
    let result = run_pipeline(&i1, &i2, cfg, keep_intermediates)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::unwritable(parent, e))?;
    }
    io::write_color(out, &result.fused)?;
    let q_mi = if with_metrics {
        let fused = io::quantize(&result.fused);
        Some(q_mi(&i1.to_gray(), &i2.to_gray(), &fused.to_gray())?)
    } else {
        None
    };
    Ok(PairOutcome { result, q_mi, ms })
}

/// Writes every intermediate plane of a run into `dir`.
pub fn write_debug_maps(dir: &Path, im: &Intermediates, fmp: &samf_core::DecisionMap) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::unwritable(dir, e))?;
    let planes = [
        ("saliency1", im.saliency[0].clone()),
        ("saliency2", im.saliency[1].clone()),
        ("weight", im.weight.clone()),
        ("pf", im.pf.clone()),
        ("epf", im.epf.clone()),
        ("scm1", io::rescale(&im.scm[0], -1.0, 1.0)),
        ("scm2", io::rescale(&im.scm[1], -1.0, 1.0)),
        ("b1", io::rescale(&im.filtered[0], -1.0, 1.0)),
        ("b2", io::rescale(&im.filtered[1], -1.0, 1.0)),
        ("dm", io::rescale(&im.dm, 0.0, 2.0)),
        ("dbm", io::rescale(&im.dbm, 0.0, 2.0)),
        ("bdm", io::rescale(&im.bdm, 0.0, 2.0)),
        ("tmp", io::decision_map_plane(&im.tmp)),
        ("omp", io::decision_map_plane(&im.omp)),
        ("rmp", io::decision_map_plane(&im.rmp)),
        ("fmp", io::decision_map_plane(fmp)),
    ];
    for (name, plane) in &planes {
        io::write_gray(&dir.join(format!("{name}.png")), plane)?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct BatchSummary {
    pub records: Vec<Record>,
    pub failures: usize,
}

/// Output path of a pair inside `out_dir`.
pub fn output_path(out_dir: &Path, stem: &str) -> PathBuf {
    out_dir.join(format!("{stem}-F.png"))
}

/// Fuses every pair in `dir_in` on a pool of `threads` workers. Records are
/// appended to `manifest` in stem order once all pairs are done, whatever
/// order they finished in. A pair that fails becomes an error record.
pub fn run_batch(
    dir_in: &Path,
    dir_out: &Path,
    cfg: &FusionConfig,
    threads: usize,
    manifest: &Path,
) -> Result<BatchSummary> {
    let pairs = find_pairs(dir_in)?;
    let mut writer = ManifestWriter::open(manifest, false)?;
    if pairs.is_empty() {
        writer.finish()?;
        return Err(CliError::NoPairs(dir_in.to_path_buf()));
    }
    std::fs::create_dir_all(dir_out).map_err(|e| CliError::unwritable(dir_out, e))?;
    let hash = config_hash(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| CliError::BadConfig(e.to_string()))?;

    let records: Vec<Record> = pool.install(|| {
        pairs
            .par_iter()
            .map(|pair| {
                let out = output_path(dir_out, &pair.stem);
                let outcome = fuse_files(&pair.a, &pair.b, &out, cfg, true, false);
                let (out, q_mi, ms, error) = match outcome {
                    Ok(o) => (Some(out.display().to_string()), o.q_mi, o.ms, None),
                    Err(e) => (None, None, 0.0, Some(e.to_string())),
                };
                Record {
                    pair: pair.stem.clone(),
                    inputs: [pair.a.display().to_string(), pair.b.display().to_string()],
                    out,
                    q_mi,
                    ms,
                    config_hash: hash.clone(),
                    config: cfg.clone(),
                    error,
                }
            })
            .collect()
    });
    for r in &records {
        writer.append(r)?;
    }
    writer.finish()?;
    let failures = records.iter().filter(|r| r.error.is_some()).count();
    Ok(BatchSummary { records, failures })
}

/// Worker count: the requested value (or all cores), capped by `SAMF_THREADS`.
pub fn thread_count(requested: Option<usize>) -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    let wanted = requested.unwrap_or(available).max(1);
    match std::env::var("SAMF_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(cap) if cap > 0 => wanted.min(cap),
        _ => wanted,
    }
}
