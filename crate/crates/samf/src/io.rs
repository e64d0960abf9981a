//! 8-bit image files in and out of the floating-point containers.

use std::path::Path;

use image::{GrayImage as Gray8, RgbImage};
use samf_core::segment::{DecisionMap, FOCUSED, RMP_DEFOCUSED, UNCERTAIN};
use samf_core::{BinaryMask, ColorImage, GrayImage};

use crate::error::{CliError, Result};

#[inline]
fn to_u8(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

#[inline]
fn from_u8(v: u8) -> f64 {
    f64::from(v) / 255.0
}

/// Reads any PNG or JPEG as 8-bit RGB. Alpha is dropped.
pub fn read_color(path: &Path) -> Result<ColorImage> {
    let img = image::open(path).map_err(|e| CliError::unreadable(path, e))?;
    let rgb = img.to_rgb8();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    let samples: Vec<f64> = rgb.as_raw().iter().map(|&v| from_u8(v)).collect();
    ColorImage::from_interleaved(w, h, &samples).map_err(|e| CliError::unreadable(path, e))
}

pub fn write_color(path: &Path, img: &ColorImage) -> Result<()> {
    let (w, h) = img.dims();
    let raw: Vec<u8> = img.to_interleaved().into_iter().map(to_u8).collect();
    let buf = RgbImage::from_raw(w as u32, h as u32, raw).expect("buffer sized from dims");
    buf.save(path).map_err(|e| CliError::unwritable(path, e))
}

/// Writes a `[0, 1]` plane as 8-bit grayscale.
pub fn write_gray(path: &Path, img: &GrayImage) -> Result<()> {
    let (w, h) = img.dims();
    let raw: Vec<u8> = img.data().iter().map(|&v| to_u8(v)).collect();
    let buf = Gray8::from_raw(w as u32, h as u32, raw).expect("buffer sized from dims");
    buf.save(path).map_err(|e| CliError::unwritable(path, e))
}

/// Rounds every sample to the nearest 8-bit level, as a write/read cycle would.
pub fn quantize(img: &ColorImage) -> ColorImage {
    img.map_channels(|c| c.map(|v| from_u8(to_u8(v))))
}

/// Reads a mask; pixels brighter than mid-gray are set.
pub fn read_mask(path: &Path) -> Result<BinaryMask> {
    let img = image::open(path).map_err(|e| CliError::unreadable(path, e))?;
    let gray = img.to_luma8();
    let (w, h) = (gray.width() as usize, gray.height() as usize);
    BinaryMask::new(w, h, gray.as_raw().iter().map(|&v| v > 127).collect())
        .map_err(|e| CliError::BadMask(e.to_string()))
}

pub fn write_mask(path: &Path, mask: &BinaryMask) -> Result<()> {
    let (w, h) = mask.dims();
    let raw: Vec<u8> = mask.data().iter().map(|&b| if b { 255 } else { 0 }).collect();
    let buf = Gray8::from_raw(w as u32, h as u32, raw).expect("buffer sized from dims");
    buf.save(path).map_err(|e| CliError::unwritable(path, e))
}

/// Gray rendering of a decision map: 0 black, 0.5 mid-gray, 1 white, and
/// the three-region "source 2" level at dark gray.
pub fn decision_map_plane(map: &DecisionMap) -> GrayImage {
    let data = map
        .data()
        .iter()
        .map(|&v| match v {
            FOCUSED => 1.0,
            UNCERTAIN => 128.0 / 255.0,
            RMP_DEFOCUSED => 64.0 / 255.0,
            _ => 0.0,
        })
        .collect();
    GrayImage::new(map.width(), map.height(), data).expect("same shape")
}

/// Maps a `[lo, hi]` field linearly onto `[0, 1]`.
pub fn rescale(img: &GrayImage, lo: f64, hi: f64) -> GrayImage {
    img.map(|v| ((v - lo) / (hi - lo)).clamp(0.0, 1.0))
}
