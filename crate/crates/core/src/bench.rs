//! Synthetic multi-focus fixtures with known ground truth.
//!
//! Defocus is emulated with a Gaussian blur of the all-in-focus image; the two
//! sources take the sharp image on complementary sides of a mask.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::filter::gaussian_blur;
use crate::image::{ensure_same_dims, BinaryMask, ColorImage, GrayImage};
use crate::segment::{DecisionMap, DEFOCUSED, FOCUSED};

/// Default width of the band around a focus boundary that accuracy checks
/// ignore.
pub const DEFAULT_BAND: f64 = 16.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub ground_truth: ColorImage,
    /// Sharp where `true_map` is set.
    pub source_a: ColorImage,
    /// Sharp where `true_map` is clear.
    pub source_b: ColorImage,
    pub true_map: BinaryMask,
    pub blur_sigma: f64,
    /// Seed of the generated ground truth, if it was generated.
    pub seed: Option<u64>,
}

impl Fixture {
    /// Pixels closer than this to the mask boundary may carry blur bleed.
    pub fn bleed_margin(&self) -> usize {
        defocus_radius(self.blur_sigma)
    }
}

fn defocus_radius(sigma: f64) -> usize {
    libm::ceil(3.0 * sigma) as usize
}

/// Gaussian defocus with a `2·⌈3σ⌉ + 1` tap window.
pub fn defocus(img: &ColorImage, sigma: f64) -> Result<ColorImage> {
    let window = 2 * defocus_radius(sigma) + 1;
    let [r, g, b] = img.channels();
    ColorImage::from_channels(
        gaussian_blur(r, window, sigma)?,
        gaussian_blur(g, window, sigma)?,
        gaussian_blur(b, window, sigma)?,
    )
}

/// Builds a complementary-focus pair from an all-in-focus image.
///
/// The whole image is blurred before masking, so blurred pixels near the mask
/// boundary mix in sharp-region content as real defocus does.
pub fn make_pair(gt: &ColorImage, mask: &BinaryMask, sigma: f64) -> Result<Fixture> {
    ensure_same_dims(gt.dims(), mask.dims())?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "sigma",
            reason: "must be positive and finite",
        });
    }
    let blurred = defocus(gt, sigma)?;
    let select = |sharp_on_mask: bool| -> Result<ColorImage> {
        let plane = |c: usize| -> Result<GrayImage> {
            let (s, d) = (gt.channel(c).data(), blurred.channel(c).data());
            let data = mask
                .data()
                .iter()
                .enumerate()
                .map(|(i, &m)| if m == sharp_on_mask { s[i] } else { d[i] })
                .collect();
            GrayImage::new(gt.width(), gt.height(), data)
        };
        ColorImage::from_channels(plane(0)?, plane(1)?, plane(2)?)
    };
    Ok(Fixture {
        ground_truth: gt.clone(),
        source_a: select(true)?,
        source_b: select(false)?,
        true_map: mask.clone(),
        blur_sigma: sigma,
        seed: None,
    })
}

/// Left half set (`x < width / 2`).
pub fn half_plane_mask(width: usize, height: usize) -> Result<BinaryMask> {
    BinaryMask::from_fn(width, height, |x, _| x < width / 2)
}

/// Disk of radius `radius` centred on the image.
pub fn disk_mask(width: usize, height: usize, radius: f64) -> Result<BinaryMask> {
    let (cx, cy) = ((width as f64 - 1.0) / 2.0, (height as f64 - 1.0) / 2.0);
    BinaryMask::from_fn(width, height, |x, y| {
        let (dx, dy) = (x as f64 - cx, y as f64 - cy);
        dx * dx + dy * dy <= radius * radius
    })
}

/// Seeded random textured scene with detail at several scales.
pub fn textured_scene(width: usize, height: usize, seed: u64) -> Result<ColorImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let octaves: [(f64, f64); 5] = [(2.0, 0.2), (4.0, 0.25), (9.0, 0.25), (21.0, 0.18), (53.0, 0.12)];
    let mut luma = vec![0.0; width * height];
    for (cell, amp) in octaves {
        let noise = value_noise(width, height, cell, &mut rng);
        for (l, n) in luma.iter_mut().zip(noise) {
            *l += amp * n;
        }
    }
    let tint_u = value_noise(width, height, 64.0, &mut rng);
    let tint_v = value_noise(width, height, 64.0, &mut rng);

    let channel = |f: &dyn Fn(usize) -> f64| {
        GrayImage::new(
            width,
            height,
            (0..width * height).map(|i| f(i).clamp(0.0, 1.0)).collect(),
        )
    };
    // Stretch the averaged noise back towards the full range.
    let l = |i: usize| 0.5 + 2.2 * (luma[i] - 0.5);
    let u = |i: usize| 0.3 * (tint_u[i] - 0.5);
    let v = |i: usize| 0.3 * (tint_v[i] - 0.5);
    ColorImage::from_channels(
        channel(&|i| l(i) + u(i))?,
        channel(&|i| l(i) - 0.5 * (u(i) + v(i)))?,
        channel(&|i| l(i) + v(i))?,
    )
}

/// Bilinearly interpolated uniform noise on a lattice of spacing `cell`.
fn value_noise(width: usize, height: usize, cell: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let gw = libm::ceil(width as f64 / cell) as usize + 2;
    let gh = libm::ceil(height as f64 / cell) as usize + 2;
    let lattice: Vec<f64> = (0..gw * gh).map(|_| rng.random::<f64>()).collect();
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height {
        let fy = y as f64 / cell;
        let (y0, ty) = (libm::floor(fy) as usize, fy - libm::floor(fy));
        for x in 0..width {
            let fx = x as f64 / cell;
            let (x0, tx) = (libm::floor(fx) as usize, fx - libm::floor(fx));
            let at = |gx: usize, gy: usize| lattice[gy * gw + gx];
            let top = at(x0, y0) * (1.0 - tx) + at(x0 + 1, y0) * tx;
            let bottom = at(x0, y0 + 1) * (1.0 - tx) + at(x0 + 1, y0 + 1) * tx;
            out.push(top * (1.0 - ty) + bottom * ty);
        }
    }
    out
}

/// Euclidean distance from every pixel to the nearest boundary pixel of
/// `truth`, where a boundary pixel has a 4-neighbour of the other value.
/// Masks without a boundary yield `+∞` everywhere.
pub fn boundary_distance(truth: &BinaryMask) -> GrayImage {
    let (w, h) = truth.dims();
    let is_boundary = |x: usize, y: usize| {
        let v = truth.get(x, y);
        (x > 0 && truth.get(x - 1, y) != v)
            || (x + 1 < w && truth.get(x + 1, y) != v)
            || (y > 0 && truth.get(x, y - 1) != v)
            || (y + 1 < h && truth.get(x, y + 1) != v)
    };
    let mut sq = vec![f64::INFINITY; w * h];
    for y in 0..h {
        for x in 0..w {
            if is_boundary(x, y) {
                sq[y * w + x] = 0.0;
            }
        }
    }
    // Separable exact squared distance transform: columns, then rows.
    let mut column = vec![0.0; h];
    for x in 0..w {
        for y in 0..h {
            column[y] = sq[y * w + x];
        }
        let d = squared_edt_1d(&column);
        for y in 0..h {
            sq[y * w + x] = d[y];
        }
    }
    for y in 0..h {
        let d = squared_edt_1d(&sq[y * w..(y + 1) * w]);
        sq[y * w..(y + 1) * w].copy_from_slice(&d);
    }
    GrayImage::new(w, h, sq.into_iter().map(libm::sqrt).collect()).expect("shape preserved")
}

/// Lower envelope of parabolas rooted at each sample.
fn squared_edt_1d(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![f64::INFINITY; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k: usize = 0;
    let mut started = false;
    for q in 0..n {
        if !f[q].is_finite() {
            continue;
        }
        if !started {
            v[0] = q;
            z[0] = f64::NEG_INFINITY;
            z[1] = f64::INFINITY;
            started = true;
            continue;
        }
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            // z[0] is -inf, so this never underflows k.
            if s <= z[k] {
                k -= 1;
                continue;
            }
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = f64::INFINITY;
            break;
        }
    }
    if !started {
        return out;
    }
    let mut k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let d = q as f64 - p as f64;
        *o = d * d + f[p];
    }
    out
}

/// Fraction of pixels farther than `band` from the truth boundary whose
/// final label agrees with the truth. Uncertain labels count as errors.
/// Returns 1 when no pixel lies outside the band.
pub fn map_accuracy(fmp: &DecisionMap, truth: &BinaryMask, band: f64) -> Result<f64> {
    ensure_same_dims(fmp.dims(), truth.dims())?;
    let dist = boundary_distance(truth);
    let (mut hits, mut total) = (0usize, 0usize);
    for (i, (&label, &t)) in fmp.data().iter().zip(truth.data()).enumerate() {
        if dist.data()[i] <= band {
            continue;
        }
        total += 1;
        if (t && label == FOCUSED) || (!t && label == DEFOCUSED) {
            hits += 1;
        }
    }
    Ok(if total == 0 {
        1.0
    } else {
        hits as f64 / total as f64
    })
}
