//! Fixture directories: `gt.png`, `a.png`, `b.png`, `mask.png`, `meta.json`.

use std::path::Path;

use samf_core::bench::{disk_mask, half_plane_mask, Fixture};
use samf_core::BinaryMask;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::io;

/// How the sharp region of source A is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum MaskSpec {
    /// Left half sharp in A.
    Half,
    /// Centred disk of the given radius sharp in A.
    Disk(f64),
    /// Mask image; bright pixels sharp in A.
    File(std::path::PathBuf),
}

impl MaskSpec {
    /// Parses `half`, `disk:R`, or a path to an existing file.
    pub fn parse(spec: &str) -> Result<Self> {
        if spec == "half" {
            return Ok(MaskSpec::Half);
        }
        if let Some(r) = spec.strip_prefix("disk:") {
            return match r.parse::<f64>() {
                Ok(r) if r > 0.0 && r.is_finite() => Ok(MaskSpec::Disk(r)),
                _ => Err(CliError::BadMask(format!("invalid disk radius {r:?}"))),
            };
        }
        let path = Path::new(spec);
        if path.is_file() {
            return Ok(MaskSpec::File(path.to_path_buf()));
        }
        Err(CliError::BadMask(format!(
            "expected half, disk:R or a mask file, got {spec:?}"
        )))
    }

    pub fn build(&self, width: usize, height: usize) -> Result<BinaryMask> {
        let mask = match self {
            MaskSpec::Half => half_plane_mask(width, height)?,
            MaskSpec::Disk(r) => disk_mask(width, height, *r)?,
            MaskSpec::File(path) => io::read_mask(path)?,
        };
        if mask.dims() != (width, height) {
            return Err(CliError::DimensionMismatch {
                expected: (width, height),
                found: mask.dims(),
            });
        }
        Ok(mask)
    }

    pub fn label(&self) -> String {
        match self {
            MaskSpec::Half => "half".into(),
            MaskSpec::Disk(r) => format!("disk:{r}"),
            MaskSpec::File(p) => p.display().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureMeta {
    pub sigma: f64,
    pub seed: Option<u64>,
    pub mask: String,
    pub width: usize,
    pub height: usize,
}

pub fn write_fixture(dir: &Path, fx: &Fixture, mask_label: &str) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::unwritable(dir, e))?;
    io::write_color(&dir.join("gt.png"), &fx.ground_truth)?;
    io::write_color(&dir.join("a.png"), &fx.source_a)?;
    io::write_color(&dir.join("b.png"), &fx.source_b)?;
    io::write_mask(&dir.join("mask.png"), &fx.true_map)?;
    let meta = FixtureMeta {
        sigma: fx.blur_sigma,
        seed: fx.seed,
        mask: mask_label.to_string(),
        width: fx.true_map.width(),
        height: fx.true_map.height(),
    };
    let path = dir.join("meta.json");
    let text = serde_json::to_string_pretty(&meta).expect("meta serializes");
    std::fs::write(&path, text + "\n").map_err(|e| CliError::unwritable(&path, e))
}

/// Loads a fixture written by [`write_fixture`], at 8-bit precision.
pub fn read_fixture(dir: &Path) -> Result<Fixture> {
    let path = dir.join("meta.json");
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::unreadable(&path, e))?;
    let meta: FixtureMeta =
        serde_json::from_str(&text).map_err(|e| CliError::unreadable(&path, e))?;
    Ok(Fixture {
        ground_truth: io::read_color(&dir.join("gt.png"))?,
        source_a: io::read_color(&dir.join("a.png"))?,
        source_b: io::read_color(&dir.join("b.png"))?,
        true_map: io::read_mask(&dir.join("mask.png"))?,
        blur_sigma: meta.sigma,
        seed: meta.seed,
    })
}
