//! Focus decision maps: two-region argmax with consistency verification,
//! the three-region rule, and their merge into the final trinary map.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::FusionConfig;
use crate::error::{Error, Result};
use crate::image::{ensure_same_dims, BinaryMask, GrayImage};
use crate::label::{connected_components, Connectivity};
use crate::rf::{rf, RfParams};

pub const FOCUSED: f64 = 1.0;
pub const DEFOCUSED: f64 = 0.0;
pub const UNCERTAIN: f64 = 0.5;
/// Three-region level for "source 1 defocused".
pub const RMP_DEFOCUSED: f64 = 2.0;

/// Pipeline stage a decision map belongs to; fixes its admissible levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Two-region argmax map, `{0, 1}`.
    Tmp,
    /// Consistency-verified two-region map, `{0, 1}`.
    Omp,
    /// Three-region map, `{0.5, 1, 2}`.
    Rmp,
    /// Final trinary map, `{0, 0.5, 1}`.
    Fmp,
}

impl Stage {
    pub fn levels(self) -> &'static [f64] {
        match self {
            Stage::Tmp | Stage::Omp => &[DEFOCUSED, FOCUSED],
            Stage::Rmp => &[UNCERTAIN, FOCUSED, RMP_DEFOCUSED],
            Stage::Fmp => &[DEFOCUSED, UNCERTAIN, FOCUSED],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stage::Tmp => "TMP",
            Stage::Omp => "OMP",
            Stage::Rmp => "RMP",
            Stage::Fmp => "FMP",
        }
    }
}

/// A per-pixel label map whose values are restricted to its stage's levels.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMap {
    stage: Stage,
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl DecisionMap {
    pub fn new(stage: Stage, width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        // Reuse GrayImage's shape checks.
        let data = GrayImage::new(width, height, data)?.into_data();
        if let Some(&bad) = data.iter().find(|v| !stage.levels().contains(v)) {
            return Err(Error::InvalidLevel {
                stage: stage.name(),
                value: bad,
            });
        }
        Ok(Self {
            stage,
            width,
            height,
            data,
        })
    }

    pub fn filled(stage: Stage, width: usize, height: usize, level: f64) -> Result<Self> {
        Self::new(stage, width, height, vec![level; width * height])
    }

    fn from_mask(stage: Stage, mask: &BinaryMask) -> Self {
        Self {
            stage,
            width: mask.width(),
            height: mask.height(),
            data: mask
                .data()
                .iter()
                .map(|&b| if b { FOCUSED } else { DEFOCUSED })
                .collect(),
        }
    }

    #[inline]
    pub fn stage(&self) -> Stage {
        self.stage
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn count(&self, level: f64) -> usize {
        self.data.iter().filter(|&&v| v == level).count()
    }

    /// Pixels equal to `level` as a mask.
    pub fn mask_of(&self, level: f64) -> BinaryMask {
        BinaryMask::new(
            self.width,
            self.height,
            self.data.iter().map(|&v| v == level).collect(),
        )
        .expect("shape checked at construction")
    }
}

/// Filtered score maps and the difference fields derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffMaps {
    /// `|SCM_1 − SCM_2|`.
    pub dm: GrayImage,
    /// Recursive-filtered `dm`.
    pub dbm: GrayImage,
    /// `|B_1 − B_2|`.
    pub bdm: GrayImage,
}

/// Two-region argmax map: 1 where `b1 ≥ b2`.
pub fn two_region(b1: &GrayImage, b2: &GrayImage) -> Result<DecisionMap> {
    let m = b1.zip_map(b2, |a, b| if a >= b { FOCUSED } else { DEFOCUSED })?;
    let (w, h) = m.dims();
    Ok(DecisionMap {
        stage: Stage::Tmp,
        width: w,
        height: h,
        data: m.into_data(),
    })
}

/// Flips every 8-connected region, of either polarity, smaller than
/// `min_area` pixels. Small foreground islands go first, then small holes, so
/// the result holds no sub-threshold region of either value.
pub fn remove_small_regions(mask: &BinaryMask, min_area: usize) -> BinaryMask {
    let flip_small = |m: &BinaryMask, polarity: bool| -> BinaryMask {
        let target = if polarity { m.clone() } else { m.inverted() };
        let cc = connected_components(&target, Connectivity::Eight);
        let data = m
            .data()
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let area = cc.area_of_pixel(i);
                if area > 0 && area < min_area {
                    !v
                } else {
                    v
                }
            })
            .collect();
        BinaryMask::new(m.width(), m.height(), data).expect("same shape")
    };
    let without_islands = flip_small(mask, true);
    flip_small(&without_islands, false)
}

/// One majority-vote pass over a `window × window` neighbourhood clipped to
/// the image. Exact ties keep the centre value.
pub fn majority_vote(mask: &BinaryMask, window: usize) -> BinaryMask {
    let (w, h) = mask.dims();
    let r = window / 2;
    // Summed-area table with a zero border row/column.
    let stride = w + 1;
    let mut sat = vec![0u32; stride * (h + 1)];
    for y in 0..h {
        let mut run = 0u32;
        for x in 0..w {
            run += u32::from(mask.get(x, y));
            sat[(y + 1) * stride + x + 1] = sat[y * stride + x + 1] + run;
        }
    }
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        let (y0, y1) = (y.saturating_sub(r), (y + r + 1).min(h));
        for x in 0..w {
            let (x0, x1) = (x.saturating_sub(r), (x + r + 1).min(w));
            let ones = sat[y1 * stride + x1] + sat[y0 * stride + x0]
                - sat[y0 * stride + x1]
                - sat[y1 * stride + x0];
            let total = ((y1 - y0) * (x1 - x0)) as u32;
            out.push(match (2 * ones).cmp(&total) {
                core::cmp::Ordering::Greater => true,
                core::cmp::Ordering::Less => false,
                core::cmp::Ordering::Equal => mask.get(x, y),
            });
        }
    }
    BinaryMask::new(w, h, out).expect("same shape")
}

/// Consistency verification of a binary map: small-region removal followed by
/// `consistency_passes` majority votes.
pub fn consistency_verify(tmp: &DecisionMap, cfg: &FusionConfig) -> Result<DecisionMap> {
    if !matches!(tmp.stage, Stage::Tmp | Stage::Omp) {
        return Err(Error::InvalidParameter {
            name: "tmp",
            reason: "consistency verification needs a binary map",
        });
    }
    let pixels = tmp.width * tmp.height;
    let min_area = libm::ceil(cfg.min_region_fraction * pixels as f64) as usize;
    let mut mask = remove_small_regions(&tmp.mask_of(FOCUSED), min_area);
    for _ in 0..cfg.consistency_passes {
        mask = majority_vote(&mask, cfg.consistency_window);
    }
    Ok(DecisionMap::from_mask(Stage::Omp, &mask))
}

/// Builds `DM`, its recursive-filtered blur `DBM`, and `BDM = |B_1 − B_2|`.
pub fn diff_maps(
    scm1: &GrayImage,
    scm2: &GrayImage,
    b1: &GrayImage,
    b2: &GrayImage,
    guide: &GrayImage,
    params: &RfParams,
) -> Result<DiffMaps> {
    let dm = scm1.zip_map(scm2, |a, b| (a - b).abs())?;
    let dbm = rf(&dm, guide, params)?;
    let bdm = b1.zip_map(b2, |a, b| (a - b).abs())?;
    ensure_same_dims(dm.dims(), bdm.dims())?;
    Ok(DiffMaps { dm, dbm, bdm })
}

/// Three-region map: where `BDM > β·DBM` the larger filtered score decides
/// (level 1 for source 1, level 2 otherwise); elsewhere the pixel is
/// uncertain (0.5).
pub fn three_region(
    diffs: &DiffMaps,
    b1: &GrayImage,
    b2: &GrayImage,
    beta: f64,
) -> Result<DecisionMap> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "balance_beta",
            reason: "must lie in (0, 1]",
        });
    }
    ensure_same_dims(diffs.bdm.dims(), diffs.dbm.dims())?;
    ensure_same_dims(diffs.bdm.dims(), b1.dims())?;
    ensure_same_dims(diffs.bdm.dims(), b2.dims())?;
    let data = (0..b1.len())
        .map(|i| {
            if diffs.bdm.data()[i] > beta * diffs.dbm.data()[i] {
                if b1.data()[i] > b2.data()[i] {
                    FOCUSED
                } else {
                    RMP_DEFOCUSED
                }
            } else {
                UNCERTAIN
            }
        })
        .collect();
    Ok(DecisionMap {
        stage: Stage::Rmp,
        width: b1.width(),
        height: b1.height(),
        data,
    })
}

/// Final map: 1 where both strategies call the pixel focused, 0 where both
/// call it defocused, 0.5 on any disagreement or uncertainty.
pub fn final_map(omp: &DecisionMap, rmp: &DecisionMap) -> Result<DecisionMap> {
    if !matches!(omp.stage, Stage::Tmp | Stage::Omp) || rmp.stage != Stage::Rmp {
        return Err(Error::InvalidParameter {
            name: "stage",
            reason: "final map needs a binary map and a three-region map",
        });
    }
    ensure_same_dims(omp.dims(), rmp.dims())?;
    let data = omp
        .data
        .iter()
        .zip(&rmp.data)
        .map(|(&o, &r)| {
            if o == FOCUSED && r == FOCUSED {
                FOCUSED
            } else if o == DEFOCUSED && r == RMP_DEFOCUSED {
                DEFOCUSED
            } else {
                UNCERTAIN
            }
        })
        .collect();
    Ok(DecisionMap {
        stage: Stage::Fmp,
        width: omp.width,
        height: omp.height,
        data,
    })
}
