//! Final composition and the end-to-end fusion pipeline.

use alloc::vec::Vec;

use crate::config::FusionConfig;
use crate::detail::{enhance, fuse_high, DetailStack, HighRule};
use crate::error::{Error, Result};
use crate::image::{ensure_same_dims, ColorImage, GrayImage};
use crate::rf::rf;
use crate::saliency::{prefuse, prefuse_color, saliency_weight, vsm};
use crate::segment::{
    consistency_verify, diff_maps, final_map, three_region, two_region, DecisionMap, Stage,
    DEFOCUSED, FOCUSED,
};
use crate::ssim::ssim_map;

/// Every intermediate plane of one pipeline run, on the luminance grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Intermediates {
    pub saliency: [GrayImage; 2],
    pub weight: GrayImage,
    pub pf: GrayImage,
    pub epf: GrayImage,
    pub high_rule: HighRule,
    pub energies: [f64; 2],
    pub scm: [GrayImage; 2],
    pub filtered: [GrayImage; 2],
    pub dm: GrayImage,
    pub dbm: GrayImage,
    pub bdm: GrayImage,
    pub tmp: DecisionMap,
    pub omp: DecisionMap,
    pub rmp: DecisionMap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionResult {
    pub fused: ColorImage,
    pub fmp: DecisionMap,
    /// Populated only when requested.
    pub intermediates: Option<Intermediates>,
    pub config_used: FusionConfig,
}

/// Per pixel and channel: source 1 where the map is 1, source 2 where it is
/// 0, the pre-fused image where it is 0.5.
pub fn compose(
    i1: &ColorImage,
    i2: &ColorImage,
    fmp: &DecisionMap,
    pf: &ColorImage,
) -> Result<ColorImage> {
    ensure_same_dims(i1.dims(), i2.dims())?;
    ensure_same_dims(i1.dims(), fmp.dims())?;
    ensure_same_dims(i1.dims(), pf.dims())?;
    if fmp.stage() != Stage::Fmp {
        return Err(Error::InvalidParameter {
            name: "fmp",
            reason: "composition needs a final trinary map",
        });
    }
    let (w, h) = i1.dims();
    let plane = |c: usize| -> Result<GrayImage> {
        let (a, b, p) = (i1.channel(c).data(), i2.channel(c).data(), pf.channel(c).data());
        let data: Vec<f64> = fmp
            .data()
            .iter()
            .enumerate()
            .map(|(i, &label)| {
                if label == FOCUSED {
                    a[i]
                } else if label == DEFOCUSED {
                    b[i]
                } else {
                    p[i]
                }
            })
            .collect();
        GrayImage::new(w, h, data)
    };
    ColorImage::from_channels(plane(0)?, plane(1)?, plane(2)?)
}

/// Fuses a list of sources; the fusion rules are pairwise, so anything other
/// than exactly two sources is rejected.
pub fn run_sources(
    sources: &[ColorImage],
    cfg: &FusionConfig,
    keep_intermediates: bool,
) -> Result<FusionResult> {
    match sources {
        [a, b] => run_pipeline(a, b, cfg, keep_intermediates),
        _ => Err(Error::SourceCount(sources.len())),
    }
}

/// Runs the whole pipeline on a source pair.
///
/// Decisions are made on luminance. Colour only re-enters through the
/// per-channel pre-fusion (with the luminance weight map) and the final
/// per-channel copy.
pub fn run_pipeline(
    i1: &ColorImage,
    i2: &ColorImage,
    cfg: &FusionConfig,
    keep_intermediates: bool,
) -> Result<FusionResult> {
    ensure_same_dims(i1.dims(), i2.dims())?;
    cfg.validate()?;
    let g1 = i1.to_gray();
    let g2 = i2.to_gray();

    // Saliency-weighted pre-fusion.
    let s1 = vsm(&g1);
    let s2 = vsm(&g2);
    let wf = saliency_weight(&s1, &s2)?;
    let pf = prefuse(&g1, &g2, &wf)?;

    // Enhanced pre-fusion.
    let d1 = DetailStack::from_image(&g1, cfg)?;
    let d2 = DetailStack::from_image(&g2, cfg)?;
    let lambda = cfg.lambda_for(g1.len());
    let (fh, high_rule) = fuse_high(&d1.detail, &d2.detail, d1.energy, d2.energy, lambda)?;
    let epf = enhance(&pf, &fh)?;

    // Score maps and their edge-aware regularization.
    let scm1 = ssim_map(&epf, &g1, cfg.ssim_window)?;
    let scm2 = ssim_map(&epf, &g2, cfg.ssim_window)?;
    let rfp = cfg.rf_params();
    let b1 = rf(&scm1, &g1, &rfp)?;
    let b2 = rf(&scm2, &g2, &rfp)?;

    let tmp = two_region(&b1, &b2)?;
    let omp = consistency_verify(&tmp, cfg)?;

    let guide = g1.zip_map(&g2, |a, b| (a + b) / 2.0)?;
    let diffs = diff_maps(&scm1, &scm2, &b1, &b2, &guide, &rfp)?;
    let rmp = three_region(&diffs, &b1, &b2, cfg.balance_beta)?;
    let fmp = final_map(&omp, &rmp)?;

    let pf_color = prefuse_color(i1, i2, &wf)?;
    let fused = compose(i1, i2, &fmp, &pf_color)?;

    let intermediates = keep_intermediates.then(|| Intermediates {
        saliency: [s1, s2],
        weight: wf,
        pf,
        epf,
        high_rule,
        energies: [d1.energy, d2.energy],
        scm: [scm1, scm2],
        filtered: [b1, b2],
        dm: diffs.dm,
        dbm: diffs.dbm,
        bdm: diffs.bdm,
        tmp,
        omp,
        rmp,
    });

    Ok(FusionResult {
        fused,
        fmp,
        intermediates,
        config_used: cfg.clone(),
    })
}
