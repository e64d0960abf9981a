//! Command-line front end.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use samf_core::bench::{make_pair, textured_scene};
use samf_core::metrics::{psnr, q_mi};

use crate::config::{config_hash, to_json_pretty, Overrides};
use crate::error::{CliError, Result};
use crate::fixture::{write_fixture, MaskSpec};
use crate::io;
use crate::manifest::{ManifestWriter, Record};
use crate::run::{fuse_files, run_batch, thread_count, write_debug_maps};

#[derive(Debug, Parser)]
#[command(name = "samf", version, about = "Multi-focus image fusion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fuse one pair of images.
    Fuse {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Write every intermediate map as a PNG into this directory.
        #[arg(long)]
        debug_maps: Option<PathBuf>,
        /// Compute Q_MI of the result.
        #[arg(long)]
        metrics: bool,
        /// Append a record to this manifest file.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Fuse every <stem>-A / <stem>-B pair in a directory.
    Batch {
        input: PathBuf,
        output: PathBuf,
        /// Worker threads; defaults to all cores. SAMF_THREADS caps it.
        #[arg(long)]
        threads: Option<usize>,
        /// Manifest path; defaults to <output>/manifest.jsonl.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Generate a synthetic fixture directory.
    Synth {
        /// All-in-focus image; a textured scene is generated when omitted.
        gt: Option<PathBuf>,
        /// half, disk:R, or a mask image path.
        #[arg(long)]
        mask: String,
        /// Defocus blur sigma in pixels.
        #[arg(long, default_value_t = 3.0)]
        sigma: f64,
        /// Size of the generated scene, WIDTHxHEIGHT.
        #[arg(long, default_value = "512x512")]
        scene: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Report quality metrics of a fused image.
    Metrics {
        a: PathBuf,
        b: PathBuf,
        fused: PathBuf,
        /// All-in-focus reference for PSNR.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Print the effective configuration.
    Config {
        /// Print the configuration as JSON (the default).
        #[arg(long)]
        dump: bool,
        /// Print only its hash.
        #[arg(long, conflicts_with = "dump")]
        hash: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
}

/// Parses `args` and runs the command, returning the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("samf: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Fuse {
            a,
            b,
            output,
            debug_maps,
            metrics,
            manifest,
            overrides,
        } => {
            let cfg = overrides.resolve()?;
            let outcome = fuse_files(&a, &b, &output, &cfg, metrics, debug_maps.is_some())?;
            if let (Some(dir), Some(im)) = (&debug_maps, &outcome.result.intermediates) {
                write_debug_maps(dir, im, &outcome.result.fmp)?;
            }
            if let Some(q) = outcome.q_mi {
                println!("q_mi {q:.6}");
            }
            if let Some(path) = manifest {
                let mut w = ManifestWriter::open(&path, true)?;
                w.append(&Record {
                    pair: stem_of(&a),
                    inputs: [a.display().to_string(), b.display().to_string()],
                    out: Some(output.display().to_string()),
                    q_mi: outcome.q_mi,
                    ms: outcome.ms,
                    config_hash: config_hash(&cfg),
                    config: cfg,
                    error: None,
                })?;
                w.finish()?;
            }
            Ok(0)
        }
        Command::Batch {
            input,
            output,
            threads,
            manifest,
            overrides,
        } => {
            let cfg = overrides.resolve()?;
            let manifest = manifest.unwrap_or_else(|| output.join("manifest.jsonl"));
            let summary = run_batch(&input, &output, &cfg, thread_count(threads), &manifest)?;
            for r in summary.records.iter().filter(|r| r.error.is_some()) {
                eprintln!("samf: {}: {}", r.pair, r.error.as_deref().unwrap_or_default());
            }
            println!(
                "{} pairs, {} failed",
                summary.records.len(),
                summary.failures
            );
            Ok(0)
        }
        Command::Synth {
            gt,
            mask,
            sigma,
            scene,
            seed,
            output,
        } => {
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(CliError::BadMask(format!("sigma must be positive, got {sigma}")));
            }
            let spec = MaskSpec::parse(&mask)?;
            let (image, seed) = match gt {
                Some(path) => (io::read_color(&path)?, None),
                None => {
                    let (w, h) = parse_size(&scene)?;
                    (io::quantize(&textured_scene(w, h, seed)?), Some(seed))
                }
            };
            let (w, h) = image.dims();
            let mut fx = make_pair(&image, &spec.build(w, h)?, sigma)?;
            fx.seed = seed;
            write_fixture(&output, &fx, &spec.label())?;
            Ok(0)
        }
        Command::Metrics {
            a,
            b,
            fused,
            reference,
        } => {
            let (i1, i2, f) = (io::read_color(&a)?, io::read_color(&b)?, io::read_color(&fused)?);
            let mut report = serde_json::Map::new();
            let q = q_mi(&i1.to_gray(), &i2.to_gray(), &f.to_gray())?;
            report.insert("q_mi".into(), q.into());
            if let Some(path) = reference {
                let gt = io::read_color(&path)?;
                for (name, img) in [("psnr_fused", &f), ("psnr_a", &i1), ("psnr_b", &i2)] {
                    let p = psnr(&gt, img)?;
                    // JSON has no infinity.
                    let value = if p.is_finite() { p.into() } else { serde_json::Value::Null };
                    report.insert(name.into(), value);
                }
            }
            println!("{}", serde_json::Value::Object(report));
            Ok(0)
        }
        Command::Config {
            dump: _,
            hash,
            overrides,
        } => {
            let cfg = overrides.resolve()?;
            if hash {
                println!("{}", config_hash(&cfg));
            } else {
                println!("{}", to_json_pretty(&cfg));
            }
            Ok(0)
        }
    }
}

fn stem_of(path: &std::path::Path) -> String {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
    stem.strip_suffix("-A").unwrap_or(stem).to_string()
}

fn parse_size(spec: &str) -> Result<(usize, usize)> {
    let bad = || CliError::BadMask(format!("scene size must be WIDTHxHEIGHT, got {spec:?}"));
    let (w, h) = spec.split_once('x').ok_or_else(bad)?;
    match (w.parse(), h.parse()) {
        (Ok(w), Ok(h)) if w > 0 && h > 0 => Ok((w, h)),
        _ => Err(bad()),
    }
}
