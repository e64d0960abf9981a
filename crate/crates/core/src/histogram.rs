//! 256-bin intensity histograms.

use crate::image::GrayImage;

pub const BINS: usize = 256;

/// Quantizes a `[0, 1]` intensity to its 8-bit bin, `floor(v·255 + 0.5)`.
#[inline]
pub fn bin_of(v: f64) -> usize {
    let b = libm::floor(v * 255.0 + 0.5);
    if b <= 0.0 {
        0
    } else if b >= 255.0 {
        255
    } else {
        b as usize
    }
}

pub fn histogram256(img: &GrayImage) -> [u64; BINS] {
    let mut counts = [0u64; BINS];
    for &v in img.data() {
        counts[bin_of(v)] += 1;
    }
    counts
}
