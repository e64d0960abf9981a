//! Small-area-aware multi-focus image fusion.
//!
//! Given two registered photographs of one scene focused at different
//! depths, the pipeline builds a saliency-weighted pre-fusion, sharpens it
//! with multi-scale detail, scores each source against it with local SSIM,
//! regularizes the scores with an edge-aware recursive filter, and labels
//! every pixel focused, defocused or uncertain by combining a two-region and
//! a three-region segmentation. Focused and defocused pixels are copied from
//! the sources; uncertain ones come from the pre-fusion.
//!
//! The crate is `no_std` and needs only `alloc`. Image IO, the CLI and the
//! batch runner live in the `samf` crate.
//!
//! ```
//! use samf_core::{bench, run_pipeline, FusionConfig};
//!
//! let gt = bench::textured_scene(96, 96, 3).unwrap();
//! let mask = bench::half_plane_mask(96, 96).unwrap();
//! let fx = bench::make_pair(&gt, &mask, 2.0).unwrap();
//! let out = run_pipeline(&fx.source_a, &fx.source_b, &FusionConfig::default(), false).unwrap();
//! assert_eq!(out.fused.dims(), (96, 96));
//! ```

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bench;
pub mod config;
pub mod detail;
pub mod error;
pub mod filter;
pub mod fuse;
pub mod histogram;
pub mod image;
pub mod label;
pub mod metrics;
pub mod rf;
pub mod saliency;
pub mod segment;
pub mod ssim;

pub use config::FusionConfig;
pub use error::{Error, Result};
pub use fuse::{compose, run_pipeline, run_sources, FusionResult, Intermediates};
pub use image::{to_gray, BinaryMask, ColorImage, GrayImage};
pub use metrics::q_mi;
pub use segment::{DecisionMap, Stage};
