//! Tunable parameters for the fusion pipeline.

use crate::error::{Error, Result};
use crate::rf::RfParams;

/// Every parameter the fusion pipeline exposes.
///
/// Defaults are chosen for 8-bit photographs around 512×512; all of them can
/// be overridden.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(default, deny_unknown_fields)
)]
pub struct FusionConfig {
    /// Number of Gaussian detail scales `M`; scale `m` uses a `(2m+1)`-tap
    /// window.
    pub num_scales: usize,
    /// Base Gaussian sigma; scale `m` uses `m · gauss_sigma`.
    pub gauss_sigma: f64,
    /// Log-energy switching threshold per pixel. The effective threshold is
    /// this value times the pixel count, because log-energy is a sum.
    pub log_energy_threshold: f64,
    /// Balance parameter of the three-region rule, in `(0, 1]`.
    pub balance_beta: f64,
    /// Odd SSIM window size.
    pub ssim_window: usize,
    pub rf_sigma_s: f64,
    pub rf_sigma_r: f64,
    pub rf_iterations: usize,
    /// Odd side length of the majority-vote window.
    pub consistency_window: usize,
    pub consistency_passes: usize,
    /// Connected regions smaller than this fraction of the image are flipped
    /// during consistency verification.
    pub min_region_fraction: f64,
}

/// Gaussian weighting sigma of the SSIM window.
pub const SSIM_SIGMA: f64 = 1.5;

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            num_scales: 4,
            gauss_sigma: 1.0,
            log_energy_threshold: 0.02,
            balance_beta: 0.5,
            ssim_window: 11,
            rf_sigma_s: 30.0,
            rf_sigma_r: 0.05,
            rf_iterations: 3,
            consistency_window: 7,
            consistency_passes: 2,
            min_region_fraction: 0.0005,
        }
    }
}

impl FusionConfig {
    pub fn validate(&self) -> Result<()> {
        fn bad(name: &'static str, reason: &'static str) -> Result<()> {
            Err(Error::InvalidParameter { name, reason })
        }
        let odd3 = |w: usize| w >= 3 && w % 2 == 1;
        if self.num_scales == 0 {
            return bad("num_scales", "must be at least 1");
        }
        if !(self.gauss_sigma > 0.0 && self.gauss_sigma.is_finite()) {
            return bad("gauss_sigma", "must be positive and finite");
        }
        if !(self.log_energy_threshold >= 0.0 && self.log_energy_threshold.is_finite()) {
            return bad("log_energy_threshold", "must be non-negative and finite");
        }
        if !(self.balance_beta > 0.0 && self.balance_beta <= 1.0) {
            return bad("balance_beta", "must lie in (0, 1]");
        }
        if !odd3(self.ssim_window) {
            return bad("ssim_window", "must be odd and at least 3");
        }
        if !odd3(self.consistency_window) {
            return bad("consistency_window", "must be odd and at least 3");
        }
        if !(0.0..1.0).contains(&self.min_region_fraction) {
            return bad("min_region_fraction", "must lie in [0, 1)");
        }
        self.rf_params().validate()
    }

    pub fn rf_params(&self) -> RfParams {
        RfParams {
            sigma_s: self.rf_sigma_s,
            sigma_r: self.rf_sigma_r,
            iterations: self.rf_iterations,
        }
    }

    /// Absolute log-energy threshold for an image of `pixels` pixels.
    pub fn lambda_for(&self, pixels: usize) -> f64 {
        self.log_energy_threshold * pixels as f64
    }
}
