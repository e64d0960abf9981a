//! Fusion quality metrics.

use alloc::boxed::Box;
use alloc::vec;

use crate::error::Result;
use crate::histogram::{bin_of, BINS};
use crate::image::{ensure_same_dims, ColorImage, GrayImage};

/// 256×256 joint intensity counts of an image pair.
#[derive(Debug, Clone)]
pub struct JointHistogram {
    counts: Box<[u64]>,
    total: u64,
}

impl JointHistogram {
    pub fn new(a: &GrayImage, b: &GrayImage) -> Result<Self> {
        ensure_same_dims(a.dims(), b.dims())?;
        let mut counts = vec![0u64; BINS * BINS].into_boxed_slice();
        for (&x, &y) in a.data().iter().zip(b.data()) {
            counts[bin_of(x) * BINS + bin_of(y)] += 1;
        }
        Ok(Self {
            counts,
            total: a.len() as u64,
        })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    #[inline]
    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * BINS + j]
    }

    /// Histogram of the first image.
    pub fn marginal_a(&self) -> [u64; BINS] {
        let mut m = [0u64; BINS];
        for (i, slot) in m.iter_mut().enumerate() {
            *slot = self.counts[i * BINS..(i + 1) * BINS].iter().sum();
        }
        m
    }

    /// Histogram of the second image.
    pub fn marginal_b(&self) -> [u64; BINS] {
        let mut m = [0u64; BINS];
        for row in self.counts.chunks_exact(BINS) {
            for (slot, &c) in m.iter_mut().zip(row) {
                *slot += c;
            }
        }
        m
    }

    /// Mutual information in nats.
    pub fn mutual_information(&self) -> f64 {
        let n = self.total as f64;
        let (ma, mb) = (self.marginal_a(), self.marginal_b());
        let mut mi = 0.0;
        for i in 0..BINS {
            if ma[i] == 0 {
                continue;
            }
            for j in 0..BINS {
                let c = self.count(i, j);
                if c == 0 {
                    continue;
                }
                let pab = c as f64 / n;
                mi += pab * libm::log(c as f64 * n / (ma[i] as f64 * mb[j] as f64));
            }
        }
        mi.max(0.0)
    }
}

/// Shannon entropy in nats of a histogram.
pub fn entropy(hist: &[u64]) -> f64 {
    let n: u64 = hist.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    hist.iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * libm::log(p)
        })
        .sum()
}

/// Normalized mutual-information fusion metric,
/// `2·[MI(a,f)/(H(a)+H(f)) + MI(b,f)/(H(b)+H(f))]`, in `[0, 2]`.
pub fn q_mi(a: &GrayImage, b: &GrayImage, f: &GrayImage) -> Result<f64> {
    let term = |src: &GrayImage| -> Result<f64> {
        let joint = JointHistogram::new(src, f)?;
        let denom = entropy(&joint.marginal_a()) + entropy(&joint.marginal_b());
        if denom <= 0.0 {
            return Ok(0.0);
        }
        Ok((joint.mutual_information() / denom).min(0.5))
    };
    ensure_same_dims(a.dims(), b.dims())?;
    Ok(2.0 * (term(a)? + term(b)?))
}

/// Peak signal-to-noise ratio in dB for unit dynamic range, over all colour
/// samples. Identical images give `+∞`.
pub fn psnr(reference: &ColorImage, test: &ColorImage) -> Result<f64> {
    ensure_same_dims(reference.dims(), test.dims())?;
    let mut sse = 0.0;
    let mut n = 0usize;
    for (r, t) in reference.channels().iter().zip(test.channels()) {
        for (&x, &y) in r.data().iter().zip(t.data()) {
            sse += (x - y) * (x - y);
            n += 1;
        }
    }
    let mse = sse / n as f64;
    Ok(if mse == 0.0 {
        f64::INFINITY
    } else {
        -10.0 * libm::log10(mse)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::histogram::histogram256;

    fn texture(w: usize, h: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |x, y| ((x * 31 + y * 57 + x * y) % 97) as f64 / 96.0).unwrap()
    }

    #[test]
    fn self_fusion_scores_two() {
        let x = texture(40, 30);
        assert!((q_mi(&x, &x, &x).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn marginals_match_histograms() {
        let a = texture(20, 10);
        let b = a.map(|v| 1.0 - v * v);
        let j = JointHistogram::new(&a, &b).unwrap();
        assert_eq!(j.marginal_a(), histogram256(&a));
        assert_eq!(j.marginal_b(), histogram256(&b));
        assert_eq!(j.total(), 200);
    }

    #[test]
    fn entropy_of_uniform_histogram() {
        let mut h = [0u64; 256];
        h[..4].copy_from_slice(&[5, 5, 5, 5]);
        assert!((entropy(&h) - libm::log(4.0)).abs() < 1e-15);
        assert_eq!(entropy(&[0u64; 256]), 0.0);
    }

    #[test]
    fn constant_images_score_zero() {
        let c = GrayImage::filled(8, 8, 0.5).unwrap();
        assert_eq!(q_mi(&c, &c, &c).unwrap(), 0.0);
    }

    #[test]
    fn psnr_of_uniform_error() {
        let a = ColorImage::from_gray(&GrayImage::filled(4, 4, 0.5).unwrap());
        let b = ColorImage::from_gray(&GrayImage::filled(4, 4, 0.6).unwrap());
        assert!((psnr(&a, &b).unwrap() - 20.0).abs() < 1e-9);
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
    }
}
