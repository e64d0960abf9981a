//! Histogram global-contrast saliency and the saliency-weighted pre-fusion.

use crate::error::Result;
use crate::histogram::{bin_of, histogram256, BINS};
use crate::image::{ensure_same_dims, ColorImage, GrayImage};

/// Global-contrast visual saliency.
///
/// A pixel's raw saliency is the summed absolute 8-bit intensity distance to
/// every pixel of the image, `Σ_i H(i)·|bin(p) − i|`. It depends on the pixel
/// only through its bin, so it is evaluated once per bin and looked up. The
/// result is min-max normalized to `[0, 1]`; a flat response yields zeros.
pub fn vsm(img: &GrayImage) -> GrayImage {
    let hist = histogram256(img);
    let mut table = [0.0f64; BINS];
    for (b, slot) in table.iter_mut().enumerate() {
        *slot = hist
            .iter()
            .enumerate()
            .map(|(i, &n)| n as f64 * (b as f64 - i as f64).abs())
            .sum();
    }

    // Normalize over bins that actually occur.
    let (lo, hi) = hist
        .iter()
        .zip(&table)
        .filter(|(&n, _)| n > 0)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, &s)| {
            (lo.min(s), hi.max(s))
        });
    let range = hi - lo;
    if range <= 0.0 {
        return img.map(|_| 0.0);
    }
    img.map(|v| (table[bin_of(v)] - lo) / range)
}

/// Pre-fusion weight `W_F = 0.5 + (S_1 − S_2) / 2`.
pub fn saliency_weight(s1: &GrayImage, s2: &GrayImage) -> Result<GrayImage> {
    s1.zip_map(s2, |a, b| (0.5 + (a - b) / 2.0).clamp(0.0, 1.0))
}

/// Pixelwise convex combination `W_F·I_1 + (1 − W_F)·I_2`.
///
/// Evaluated as `I_2 + W_F·(I_1 − I_2)` and clamped to the pixel's source
/// interval, so equal sources and the weight endpoints reproduce a source
/// exactly.
pub fn prefuse(i1: &GrayImage, i2: &GrayImage, wf: &GrayImage) -> Result<GrayImage> {
    ensure_same_dims(i1.dims(), i2.dims())?;
    ensure_same_dims(i1.dims(), wf.dims())?;
    let data = i1
        .data()
        .iter()
        .zip(i2.data())
        .zip(wf.data())
        .map(|((&a, &b), &w)| {
            if w >= 1.0 {
                a
            } else if w <= 0.0 {
                b
            } else {
                (b + w * (a - b)).clamp(a.min(b), a.max(b))
            }
        })
        .collect();
    GrayImage::new(i1.width(), i1.height(), data)
}

/// Applies one luminance-derived weight map to each color channel.
pub fn prefuse_color(i1: &ColorImage, i2: &ColorImage, wf: &GrayImage) -> Result<ColorImage> {
    ensure_same_dims(i1.dims(), i2.dims())?;
    let [r1, g1, b1] = i1.channels();
    let [r2, g2, b2] = i2.channels();
    ColorImage::from_channels(
        prefuse(r1, r2, wf)?,
        prefuse(g1, g2, wf)?,
        prefuse(b1, b2, wf)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn row(values: &[f64]) -> GrayImage {
        GrayImage::new(values.len(), 1, values.to_vec()).unwrap()
    }

    /// Brute force: sum of absolute 8-bit differences over all pixel pairs.
    fn raw_saliency_pairs(img: &GrayImage) -> Vec<f64> {
        let bins: Vec<f64> = img.data().iter().map(|&v| bin_of(v) as f64).collect();
        bins.iter()
            .map(|a| bins.iter().map(|b| (a - b).abs()).sum())
            .collect()
    }

    #[test]
    fn constant_image_has_zero_saliency() {
        let s = vsm(&GrayImage::filled(6, 4, 0.3).unwrap());
        assert!(s.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn three_pixel_example() {
        let img = row(&[0.0, 0.0, 1.0]);
        assert_eq!(raw_saliency_pairs(&img), [255.0, 255.0, 510.0]);
        assert_eq!(vsm(&img).data(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn symmetric_pair_is_flat() {
        assert_eq!(vsm(&row(&[0.0, 1.0])).data(), &[0.0, 0.0]);
    }

    #[test]
    fn matches_pairwise_oracle() {
        let img = GrayImage::from_fn(9, 7, |x, y| ((x * 37 + y * 11) % 23) as f64 / 22.0).unwrap();
        let raw = raw_saliency_pairs(&img);
        let (lo, hi) = raw
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        let s = vsm(&img);
        for (got, r) in s.data().iter().zip(&raw) {
            assert!((got - (r - lo) / (hi - lo)).abs() < 1e-12);
        }
    }

    #[test]
    fn weight_endpoints() {
        let one = row(&[1.0, 0.0, 0.25]);
        let zero = row(&[0.0, 1.0, 0.25]);
        assert_eq!(saliency_weight(&one, &zero).unwrap().data(), &[1.0, 0.0, 0.5]);
    }

    #[test]
    fn prefuse_examples() {
        let x = row(&[0.1, 0.7, 0.33]);
        let w = row(&[0.0, 0.3, 0.9]);
        assert_eq!(prefuse(&x, &x, &w).unwrap(), x);

        let pf = prefuse(&row(&[0.2]), &row(&[0.6]), &row(&[0.5])).unwrap();
        assert!((pf.get(0, 0) - 0.4).abs() < 1e-15);

        let i1 = row(&[0.2, 0.9]);
        let ones = row(&[1.0, 1.0]);
        assert_eq!(prefuse(&i1, &row(&[0.5, 0.1]), &ones).unwrap(), i1);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = GrayImage::filled(2, 2, 0.0).unwrap();
        let b = GrayImage::filled(3, 2, 0.0).unwrap();
        assert!(saliency_weight(&a, &b).is_err());
        assert!(prefuse(&a, &a, &b).is_err());
    }
}
