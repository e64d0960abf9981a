//! Planar floating-point image containers.
//!
//! Pixels are `f64` in the nominal range `[0, 1]`, stored row-major. Eight-bit
//! data is converted at the IO boundary; everything inside the pipeline is
//! continuous-valued.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// BT.601 luma weights for R, G and B.
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

/// A single-channel scalar field on a `width × height` grid.
///
/// Also used for score maps, saliency maps, weight maps and signed detail
/// fields, which share the grid but not the `[0, 1]` range.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        check_dims(width, height)?;
        if data.len() != width * height {
            return Err(Error::DataLength {
                expected: width * height,
                found: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        check_dims(width, height)?;
        Ok(Self {
            width,
            height,
            data: vec![value; width * height],
        })
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        check_dims(width, height)?;
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Ok(Self {
            width,
            height,
            data,
        })
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
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        self.data[y * self.width + x] = value;
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    /// Applies `f` to every pixel, producing a new image on the same grid.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pixelwise combination of two images on the same grid.
    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        ensure_same_dims(self.dims(), other.dims())?;
        Ok(Self {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn clamp01(&self) -> Self {
        self.map(|v| v.clamp(0.0, 1.0))
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }
}

/// Three RGB planes sharing one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorImage {
    channels: [GrayImage; 3],
}

impl ColorImage {
    pub fn from_channels(r: GrayImage, g: GrayImage, b: GrayImage) -> Result<Self> {
        ensure_same_dims(r.dims(), g.dims())?;
        ensure_same_dims(r.dims(), b.dims())?;
        Ok(Self {
            channels: [r, g, b],
        })
    }

    /// Replicates a single plane into all three channels.
    pub fn from_gray(gray: &GrayImage) -> Self {
        Self {
            channels: [gray.clone(), gray.clone(), gray.clone()],
        }
    }

    /// Builds an image from interleaved RGB samples.
    pub fn from_interleaved(width: usize, height: usize, rgb: &[f64]) -> Result<Self> {
        check_dims(width, height)?;
        if rgb.len() != 3 * width * height {
            return Err(Error::DataLength {
                expected: 3 * width * height,
                found: rgb.len(),
            });
        }
        let plane = |c: usize| GrayImage {
            width,
            height,
            data: rgb.iter().skip(c).step_by(3).copied().collect(),
        };
        Ok(Self {
            channels: [plane(0), plane(1), plane(2)],
        })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.channels[0].width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.channels[0].height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        self.channels[0].dims()
    }

    pub fn channel(&self, c: usize) -> &GrayImage {
        &self.channels[c]
    }

    pub fn channels(&self) -> &[GrayImage; 3] {
        &self.channels
    }

    pub fn into_channels(self) -> [GrayImage; 3] {
        self.channels
    }

    /// Interleaved RGB samples, row-major.
    pub fn to_interleaved(&self) -> Vec<f64> {
        let [r, g, b] = &self.channels;
        let mut out = Vec::with_capacity(3 * r.len());
        for i in 0..r.len() {
            out.extend_from_slice(&[r.data[i], g.data[i], b.data[i]]);
        }
        out
    }

    /// Applies the same per-plane transform to every channel.
    pub fn map_channels(&self, mut f: impl FnMut(&GrayImage) -> GrayImage) -> Self {
        Self {
            channels: [
                f(&self.channels[0]),
                f(&self.channels[1]),
                f(&self.channels[2]),
            ],
        }
    }

    pub fn to_gray(&self) -> GrayImage {
        to_gray(self)
    }
}

/// BT.601 luminance, clamped to `[0, 1]`.
pub fn to_gray(img: &ColorImage) -> GrayImage {
    let [r, g, b] = &img.channels;
    let [wr, _, wb] = LUMA_WEIGHTS;
    // g + wr·(r − g) + wb·(b − g) equals the weighted sum and maps gray
    // pixels (r = g = b) to themselves exactly.
    let data = r
        .data
        .iter()
        .zip(&g.data)
        .zip(&b.data)
        .map(|((&r, &g), &b)| (g + wr * (r - g) + wb * (b - g)).clamp(0.0, 1.0))
        .collect();
    GrayImage {
        width: r.width,
        height: r.height,
        data,
    }
}

/// A binary map on an image grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        check_dims(width, height)?;
        if data.len() != width * height {
            return Err(Error::DataLength {
                expected: width * height,
                found: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        check_dims(width, height)?;
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Ok(Self {
            width,
            height,
            data,
        })
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
    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn inverted(&self) -> Self {
        Self {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&b| !b).collect(),
        }
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::EmptyImage { width, height });
    }
    Ok(())
}

pub(crate) fn ensure_same_dims(expected: (usize, usize), found: (usize, usize)) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}
