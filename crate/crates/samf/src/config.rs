//! Loading, overriding and fingerprinting fusion configurations.

use std::path::Path;

use clap::Args;
use samf_core::FusionConfig;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// Command-line overrides; each one replaces the matching config field.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
    /// Number of Gaussian detail scales.
    #[arg(long)]
    pub scales: Option<usize>,
    #[arg(long)]
    pub gauss_sigma: Option<f64>,
    /// Per-pixel log-energy switching threshold.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Three-region balance parameter.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub ssim_window: Option<usize>,
    #[arg(long)]
    pub rf_sigma_s: Option<f64>,
    #[arg(long)]
    pub rf_sigma_r: Option<f64>,
    #[arg(long)]
    pub rf_iterations: Option<usize>,
    #[arg(long)]
    pub consistency_window: Option<usize>,
    #[arg(long)]
    pub consistency_passes: Option<usize>,
    #[arg(long)]
    pub min_region_fraction: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut FusionConfig) {
        macro_rules! set {
            ($($flag:ident => $field:ident),* $(,)?) => {
                $(if let Some(v) = self.$flag { cfg.$field = v; })*
            };
        }
        set!(
            scales => num_scales,
            gauss_sigma => gauss_sigma,
            lambda => log_energy_threshold,
            beta => balance_beta,
            ssim_window => ssim_window,
            rf_sigma_s => rf_sigma_s,
            rf_sigma_r => rf_sigma_r,
            rf_iterations => rf_iterations,
            consistency_window => consistency_window,
            consistency_passes => consistency_passes,
            min_region_fraction => min_region_fraction,
        );
    }

    /// Defaults, then the config file if any, then flags; validated.
    pub fn resolve(&self) -> Result<FusionConfig> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => FusionConfig::default(),
        };
        self.apply(&mut cfg);
        cfg.validate()
            .map_err(|e| CliError::BadConfig(e.to_string()))?;
        Ok(cfg)
    }
}

/// Parses a JSON config; missing keys take their defaults, unknown keys are
/// rejected.
pub fn load_config(path: &Path) -> Result<FusionConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::unreadable(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::BadConfig(format!("{}: {e}", path.display())))
}

pub fn to_json_pretty(cfg: &FusionConfig) -> String {
    serde_json::to_string_pretty(cfg).expect("config serializes")
}

/// SHA-256 of the compact JSON form, hex encoded.
pub fn config_hash(cfg: &FusionConfig) -> String {
    let canonical = serde_json::to_string(cfg).expect("config serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}
