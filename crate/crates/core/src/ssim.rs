//! Per-pixel structural similarity maps.

use crate::config::SSIM_SIGMA;
use crate::error::Result;
use crate::filter::{convolve_separable, gaussian_kernel};
use crate::image::{ensure_same_dims, GrayImage};

/// Stabilizers for a dynamic range of 1.
pub const C1: f64 = 0.01 * 0.01;
pub const C2: f64 = 0.03 * 0.03;

/// Local SSIM at every pixel, with Gaussian weighting (`σ = 1.5`) truncated
/// to `window × window` and mirrored borders. Values lie in `[−1, 1]`.
pub fn ssim_map(reference: &GrayImage, src: &GrayImage, window: usize) -> Result<GrayImage> {
    ensure_same_dims(reference.dims(), src.dims())?;
    let kernel = gaussian_kernel(window, SSIM_SIGMA)?;
    let blur = |img: &GrayImage| convolve_separable(img, &kernel);

    let mu_x = blur(reference);
    let mu_y = blur(src);
    let xx = blur(&reference.map(|v| v * v));
    let yy = blur(&src.map(|v| v * v));
    let xy = blur(&reference.zip_map(src, |a, b| a * b)?);

    let data = (0..reference.len())
        .map(|i| {
            let (mx, my) = (mu_x.data()[i], mu_y.data()[i]);
            let sxx = xx.data()[i] - mx * mx;
            let syy = yy.data()[i] - my * my;
            let sxy = xy.data()[i] - mx * my;
            let num = (2.0 * mx * my + C1) * (2.0 * sxy + C2);
            let den = (mx * mx + my * my + C1) * (sxx + syy + C2);
            (num / den).clamp(-1.0, 1.0)
        })
        .collect();
    GrayImage::new(reference.width(), reference.height(), data)
}
