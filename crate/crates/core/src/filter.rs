//! Separable Gaussian convolution with mirrored borders.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Maps an out-of-range index onto `0..len` by half-sample symmetric
/// reflection (`... b a | a b c ... | c b a ...`), which keeps the total mass
/// of a normalized convolution unchanged.
#[inline]
pub(crate) fn reflect(i: isize, len: usize) -> usize {
    let n = len as isize;
    let period = 2 * n;
    let m = i.rem_euclid(period);
    if m < n {
        m as usize
    } else {
        (period - 1 - m) as usize
    }
}

/// Normalized 1-D Gaussian taps of odd length `window`.
pub fn gaussian_kernel(window: usize, sigma: f64) -> Result<Vec<f64>> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::InvalidParameter {
            name: "window",
            reason: "must be odd and at least 1",
        });
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "sigma",
            reason: "must be positive and finite",
        });
    }
    let radius = (window / 2) as isize;
    let denom = 2.0 * sigma * sigma;
    let mut taps: Vec<f64> = (-radius..=radius)
        .map(|i| libm::exp(-((i * i) as f64) / denom))
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= sum);
    Ok(taps)
}

/// Blurs `img` with a normalized Gaussian truncated to `window × window`.
pub fn gaussian_blur(img: &GrayImage, window: usize, sigma: f64) -> Result<GrayImage> {
    let kernel = gaussian_kernel(window, sigma)?;
    if window == 1 {
        return Ok(img.clone());
    }
    Ok(convolve_separable(img, &kernel))
}

/// Convolves rows and then columns with the same symmetric odd-length kernel.
pub fn convolve_separable(img: &GrayImage, kernel: &[f64]) -> GrayImage {
    let (w, h) = img.dims();
    let radius = (kernel.len() / 2) as isize;
    let src = img.data();

    let mut tmp = vec![0.0; w * h];
    let mut line = vec![0.0; w + 2 * radius as usize];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for (j, slot) in line.iter_mut().enumerate() {
            *slot = row[reflect(j as isize - radius, w)];
        }
        let out = &mut tmp[y * w..(y + 1) * w];
        for (x, o) in out.iter_mut().enumerate() {
            *o = kernel
                .iter()
                .zip(&line[x..x + kernel.len()])
                .map(|(k, v)| k * v)
                .sum();
        }
    }

    // Column pass accumulates whole rows at a time to stay cache-friendly.
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        let dst = &mut out[y * w..(y + 1) * w];
        for (k, &tap) in kernel.iter().enumerate() {
            let sy = reflect(y as isize + k as isize - radius, h);
            let srow = &tmp[sy * w..(sy + 1) * w];
            for (d, s) in dst.iter_mut().zip(srow) {
                *d += tap * s;
            }
        }
    }
    GrayImage::new(w, h, out).expect("dimensions preserved")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_is_half_sample_symmetric() {
        let idx: Vec<usize> = (-4..8).map(|i| reflect(i, 4)).collect();
        assert_eq!(idx, [3, 2, 1, 0, 0, 1, 2, 3, 3, 2, 1, 0]);
        assert_eq!(reflect(-1, 1), 0);
        assert_eq!(reflect(5, 1), 0);
    }

    #[test]
    fn rejects_even_or_zero_window() {
        let img = GrayImage::filled(4, 4, 0.5).unwrap();
        assert!(gaussian_blur(&img, 4, 1.0).is_err());
        assert!(gaussian_blur(&img, 0, 1.0).is_err());
        assert!(gaussian_blur(&img, 3, 0.0).is_err());
    }

    #[test]
    fn constant_image_is_fixed() {
        let img = GrayImage::filled(9, 7, 0.37).unwrap();
        let out = gaussian_blur(&img, 5, 1.3).unwrap();
        for &v in out.data() {
            assert!((v - 0.37).abs() < 1e-15);
        }
    }

    #[test]
    fn window_one_is_identity() {
        let img = GrayImage::from_fn(5, 4, |x, y| (x * 7 + y * 3) as f64 / 40.0).unwrap();
        assert_eq!(gaussian_blur(&img, 1, 2.0).unwrap(), img);
    }

    #[test]
    fn impulse_response_matches_analytic_gaussian() {
        let sigma = 0.8;
        let img = GrayImage::from_fn(7, 7, |x, y| if (x, y) == (3, 3) { 1.0 } else { 0.0 }).unwrap();
        let out = gaussian_blur(&img, 3, sigma).unwrap();
        // Oracle: evaluate the 2-D Gaussian on the 3x3 grid and normalize.
        let g = |dx: i32, dy: i32| libm::exp(-f64::from(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        let total: f64 = (-1..=1).flat_map(|dy| (-1..=1).map(move |dx| g(dx, dy))).sum();
        let mut sum = 0.0;
        for dy in -1..=1i32 {
            for dx in -1..=1i32 {
                let v = out.get((3 + dx) as usize, (3 + dy) as usize);
                assert!((v - g(dx, dy) / total).abs() < 1e-12);
                sum += v;
            }
        }
        assert!((sum - 1.0).abs() < 1e-12);
        assert_eq!(out.get(1, 3), 0.0);
    }

    #[test]
    fn mass_is_conserved_under_mirror_borders() {
        let img = GrayImage::from_fn(13, 11, |x, y| {
            libm::sin(x as f64 * 1.3) * 0.5 + 0.5 * libm::cos(y as f64 * 0.7 + x as f64)
        })
        .unwrap()
        .map(|v| (v + 1.0) / 2.0);
        let out = gaussian_blur(&img, 7, 2.0).unwrap();
        let before: f64 = img.data().iter().sum();
        let after: f64 = out.data().iter().sum();
        assert!((before - after).abs() / before < 1e-12);
    }

    #[test]
    fn window_wider_than_image() {
        let img = GrayImage::from_fn(2, 3, |x, y| (x + y) as f64 / 3.0).unwrap();
        let out = gaussian_blur(&img, 9, 3.0).unwrap();
        let before: f64 = img.data().iter().sum();
        let after: f64 = out.data().iter().sum();
        assert!((before - after).abs() < 1e-12);
    }
}
