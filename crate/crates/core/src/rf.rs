//! Domain-transform recursive filter.
//!
//! Edge-aware smoothing that runs a first-order recursion along each row and
//! column, with the feedback coefficient attenuated by the guide's local
//! gradient. Each iteration filters horizontally then vertically; the spatial
//! sigma shrinks geometrically across iterations so that the cascade has the
//! requested overall spread.

use alloc::vec;

use crate::error::{Error, Result};
use crate::image::{ensure_same_dims, GrayImage};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfParams {
    /// Spatial standard deviation in pixels.
    pub sigma_s: f64,
    /// Range standard deviation in guide intensity units.
    pub sigma_r: f64,
    pub iterations: usize,
}

impl Default for RfParams {
    fn default() -> Self {
        Self {
            sigma_s: 30.0,
            sigma_r: 0.05,
            iterations: 3,
        }
    }
}

impl RfParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_s > 0.0 && self.sigma_s.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "rf_sigma_s",
                reason: "must be positive and finite",
            });
        }
        if !(self.sigma_r > 0.0 && self.sigma_r.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "rf_sigma_r",
                reason: "must be positive and finite",
            });
        }
        if self.iterations == 0 {
            return Err(Error::InvalidParameter {
                name: "rf_iterations",
                reason: "must be at least 1",
            });
        }
        Ok(())
    }

    /// Spatial sigma of the 1-based iteration `i`.
    pub fn iteration_sigma(&self, i: usize) -> f64 {
        let n = self.iterations as i32;
        self.sigma_s * libm::sqrt(3.0) * libm::pow(2.0, f64::from(n - i as i32))
            / libm::sqrt(libm::pow(4.0, f64::from(n)) - 1.0)
    }
}

/// Filters `signal` with edges taken from `guide`.
///
/// The output at every pixel is a convex combination of input values, so it
/// stays within the input's range.
pub fn rf(signal: &GrayImage, guide: &GrayImage, params: &RfParams) -> Result<GrayImage> {
    ensure_same_dims(signal.dims(), guide.dims())?;
    params.validate()?;
    let (w, h) = signal.dims();
    let ratio = params.sigma_s / params.sigma_r;

    // Domain derivatives: dh[y*w + x] links x-1 → x, dv[x*h + y] links y-1 → y
    // (stored transposed so both passes walk contiguous memory).
    let g = guide.data();
    let mut dh = vec![1.0; w * h];
    for y in 0..h {
        for x in 1..w {
            dh[y * w + x] = 1.0 + ratio * (g[y * w + x] - g[y * w + x - 1]).abs();
        }
    }
    let mut dv = vec![1.0; w * h];
    for x in 0..w {
        for y in 1..h {
            dv[x * h + y] = 1.0 + ratio * (g[y * w + x] - g[(y - 1) * w + x]).abs();
        }
    }

    let mut out = signal.data().to_vec();
    let mut transposed = vec![0.0; w * h];
    let mut coeff = vec![0.0; w * h];
    for i in 1..=params.iterations {
        // Feedback a = exp(-√2 / σ_i); links use a^d.
        let ln_a = -core::f64::consts::SQRT_2 / params.iteration_sigma(i);

        fill_coefficients(&mut coeff, &dh, ln_a);
        for row in out.chunks_exact_mut(w).zip(coeff.chunks_exact(w)) {
            recurse_line(row.0, row.1);
        }

        transpose(&out, &mut transposed, w, h);
        fill_coefficients(&mut coeff, &dv, ln_a);
        for col in transposed.chunks_exact_mut(h).zip(coeff.chunks_exact(h)) {
            recurse_line(col.0, col.1);
        }
        transpose(&transposed, &mut out, h, w);
    }
    GrayImage::new(w, h, out)
}

/// `a^d` for every link, evaluated as `exp(d · ln a)`.
fn fill_coefficients(coeff: &mut [f64], derivative: &[f64], ln_a: f64) {
    for (c, &d) in coeff.iter_mut().zip(derivative) {
        *c = libm::exp(d * ln_a);
    }
}

/// Causal then anti-causal pass over one line; `v[k]` weights the link
/// between samples `k-1` and `k`.
fn recurse_line(line: &mut [f64], v: &[f64]) {
    let n = line.len();
    for k in 1..n {
        line[k] += v[k] * (line[k - 1] - line[k]);
    }
    for k in (0..n.saturating_sub(1)).rev() {
        line[k] += v[k + 1] * (line[k + 1] - line[k]);
    }
}

/// Writes the transpose of the `w × h` row-major `src` into `dst` (`h × w`).
fn transpose(src: &[f64], dst: &mut [f64], w: usize, h: usize) {
    const BLOCK: usize = 32;
    for by in (0..h).step_by(BLOCK) {
        for bx in (0..w).step_by(BLOCK) {
            for y in by..(by + BLOCK).min(h) {
                for x in bx..(bx + BLOCK).min(w) {
                    dst[x * h + y] = src[y * w + x];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn ramp(w: usize, h: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |x, y| ((x * 7 + y * 3) % 11) as f64 / 10.0).unwrap()
    }

    #[test]
    fn iteration_sigmas_compose_to_sigma_s() {
        let p = RfParams {
            sigma_s: 10.0,
            sigma_r: 1.0,
            iterations: 3,
        };
        let var: f64 = (1..=3).map(|i| libm::pow(p.iteration_sigma(i), 2.0)).sum();
        assert!((var - 100.0).abs() < 1e-9);
        let single = RfParams { iterations: 1, ..p };
        assert!((single.iteration_sigma(1) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn constant_signal_is_unchanged() {
        let s = GrayImage::filled(23, 17, 0.61).unwrap();
        let out = rf(&s, &ramp(23, 17), &RfParams::default()).unwrap();
        assert!(out.data().iter().all(|&v| (v - 0.61).abs() <= 1e-9));
    }

    #[test]
    fn vanishing_sigma_is_identity() {
        let s = ramp(12, 9);
        let p = RfParams {
            sigma_s: 1e-3,
            sigma_r: 0.1,
            iterations: 2,
        };
        let out = rf(&s, &s, &p).unwrap();
        for (a, b) in out.data().iter().zip(s.data()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn output_stays_in_input_range() {
        let s = ramp(31, 19).map(|v| 2.0 * v - 1.0);
        let (lo, hi) = s.min_max();
        let out = rf(&s, &ramp(31, 19), &RfParams::default()).unwrap();
        let (olo, ohi) = out.min_max();
        assert!(olo >= lo - 1e-9 && ohi <= hi + 1e-9);
    }

    #[test]
    fn rejects_bad_parameters() {
        let s = ramp(4, 4);
        let bad = RfParams {
            iterations: 0,
            ..RfParams::default()
        };
        assert!(rf(&s, &s, &bad).is_err());
        assert!(rf(&s, &ramp(5, 4), &RfParams::default()).is_err());
    }

    #[test]
    fn transpose_round_trip() {
        let src: Vec<f64> = (0..35).map(f64::from).collect();
        let mut t = vec![0.0; 35];
        let mut back = vec![0.0; 35];
        transpose(&src, &mut t, 7, 5);
        assert_eq!(t[7 * 5 - 1], 34.0);
        assert_eq!(t[1], 7.0);
        transpose(&t, &mut back, 5, 7);
        assert_eq!(back, src);
    }
}
