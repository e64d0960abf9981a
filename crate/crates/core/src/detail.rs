//! Multi-scale detail extraction and log-energy adaptive detail fusion.

use alloc::vec::Vec;

use crate::config::FusionConfig;
use crate::error::Result;
use crate::filter::gaussian_blur;
use crate::image::{ensure_same_dims, GrayImage};

/// Accumulated detail of one source and its log-energy.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailStack {
    pub detail: GrayImage,
    pub energy: f64,
}

impl DetailStack {
    pub fn from_image(img: &GrayImage, cfg: &FusionConfig) -> Result<Self> {
        let detail = detail_layers(img, cfg)?;
        let energy = log_energy(&detail);
        Ok(Self { detail, energy })
    }
}

/// Which rule combined the two detail fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HighRule {
    /// Energies differ by more than the threshold: per-pixel max-abs selection.
    MaxSelect,
    /// Energies are close: energy-proportional weighted sum.
    Weighted,
}

/// Sum over scales `m = 1..=M` of `I − blur(I, 2m+1, m·σ)`.
pub fn detail_layers(img: &GrayImage, cfg: &FusionConfig) -> Result<GrayImage> {
    let mut acc = img.map(|_| 0.0);
    for m in 1..=cfg.num_scales {
        let blurred = gaussian_blur(img, 2 * m + 1, cfg.gauss_sigma * m as f64)?;
        for ((a, &v), &b) in acc.data_mut().iter_mut().zip(img.data()).zip(blurred.data()) {
            *a += v - b;
        }
    }
    Ok(acc)
}

/// `Σ log(1 + d²)` over the field.
pub fn log_energy(detail: &GrayImage) -> f64 {
    detail.data().iter().map(|&d| libm::log1p(d * d)).sum()
}

/// Pixelwise max-abs decision maps; ties go to source 1.
pub fn max_rule_map(d1: &GrayImage, d2: &GrayImage) -> Result<(GrayImage, GrayImage)> {
    let hm1 = d1.zip_map(d2, |a, b| if a.abs() >= b.abs() { 1.0 } else { 0.0 })?;
    let hm2 = hm1.map(|v| 1.0 - v);
    Ok((hm1, hm2))
}

pub fn select_rule(e1: f64, e2: f64, lambda: f64) -> HighRule {
    if (e1 - e2).abs() > lambda {
        HighRule::MaxSelect
    } else {
        HighRule::Weighted
    }
}

/// Energy-proportional weights `E_n / (E_1 + E_2)`, or an even split when
/// both energies vanish.
pub fn energy_weights(e1: f64, e2: f64) -> (f64, f64) {
    let total = e1 + e2;
    if total > 0.0 {
        (e1 / total, e2 / total)
    } else {
        (0.5, 0.5)
    }
}

/// Fuses two detail fields with the rule chosen by their energy gap.
pub fn fuse_high(
    d1: &GrayImage,
    d2: &GrayImage,
    e1: f64,
    e2: f64,
    lambda: f64,
) -> Result<(GrayImage, HighRule)> {
    ensure_same_dims(d1.dims(), d2.dims())?;
    let rule = select_rule(e1, e2, lambda);
    let fused = match rule {
        HighRule::MaxSelect => {
            let (hm1, _) = max_rule_map(d1, d2)?;
            let data: Vec<f64> = hm1
                .data()
                .iter()
                .zip(d1.data().iter().zip(d2.data()))
                .map(|(&h, (&a, &b))| if h == 1.0 { a } else { b })
                .collect();
            GrayImage::new(d1.width(), d1.height(), data)?
        }
        HighRule::Weighted => {
            let (w1, w2) = energy_weights(e1, e2);
            d1.zip_map(d2, |a, b| if a == b { a } else { w1 * a + w2 * b })?
        }
    };
    Ok((fused, rule))
}

/// `clamp(PF + FH, 0, 1)`.
pub fn enhance(pf: &GrayImage, fh: &GrayImage) -> Result<GrayImage> {
    pf.zip_map(fh, |p, f| (p + f).clamp(0.0, 1.0))
}
