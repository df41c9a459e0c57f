//! Finite Z-transforms, DTFT samples, the DFT and spectral leakage.
//!
//! The DFT is the direct O(N^2) sum with no FFT and no normalization.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::dt::Sequence;
use crate::error::{Error, Result};

/// DFT bins of a real sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub bins: Vec<Complex64>,
    pub sample_rate: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Bin spacing `2 pi Fs / N` in rad/s.
    pub fn bin_width(&self) -> f64 {
        TAU * self.sample_rate / self.bins.len() as f64
    }

    /// Angular frequency of bin `k`. Bins above `N/2` are reported at their
    /// negative alias.
    pub fn bin_omega(&self, k: usize) -> f64 {
        let n = self.bins.len();
        if 2 * k <= n {
            k as f64 * self.bin_width()
        } else {
            (k as f64 - n as f64) * self.bin_width()
        }
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.bins.iter().map(|b| b.norm()).collect()
    }

    /// `sum |X[k]|^2`.
    pub fn energy(&self) -> f64 {
        self.bins.iter().map(|b| b.norm_sqr()).sum()
    }
}

/// `sum_k x[k] z^{-(n0 + k)}` over the stored samples.
pub fn z_transform_finite(x: &Sequence, z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        if x.len() == 1 && x.origin() == 0 {
            return Ok(Complex64::new(x.samples()[0], 0.0));
        }
        return Err(Error::OriginEvaluation);
    }
    let w = z.inv();
    let poly = x
        .samples()
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &v| acc * w + v);
    Ok(poly * w.powi(x.origin() as i32))
}

fn circle_sum(samples: &[f64], theta: f64, offset: i64) -> Complex64 {
    samples
        .iter()
        .enumerate()
        .map(|(n, &v)| v * Complex64::from_polar(1.0, -theta * (offset + n as i64) as f64))
        .sum()
}

/// Z-transform on the unit circle at `theta` radians per sample.
pub fn dtft_sample(x: &Sequence, theta: f64) -> Complex64 {
    circle_sum(x.samples(), theta, x.origin())
}

/// `X[k] = sum_n x[n] e^{-i 2 pi k n / N}`, i.e. the DTFT sampled at
/// `theta = 2 pi k / N`.
pub fn dft(x: &Sequence) -> Spectrum {
    let n = x.len();
    let bins = (0..n)
        .map(|k| circle_sum(x.samples(), TAU * k as f64 / n as f64, 0))
        .collect();
    Spectrum {
        bins,
        sample_rate: x.sample_rate(),
    }
}

/// Share of spectral energy outside bins `k0` and `N - k0`.
///
/// The DC bin counts as expected content only when the input is zero-mean
/// within `1e-9`; otherwise its energy is treated as leakage.
pub fn leakage_ratio(x: &Sequence, k0: usize) -> Result<f64> {
    let n = x.len();
    if n < 4 || k0 == 0 || 2 * k0 >= n {
        return Err(Error::BadBin { k0, n, half: n / 2 });
    }
    let spec = dft(x);
    let total = spec.energy();
    if total == 0.0 {
        return Ok(0.0);
    }
    let mean = x.samples().iter().sum::<f64>() / n as f64;
    let mut expected = spec.bins[k0].norm_sqr() + spec.bins[n - k0].norm_sqr();
    if mean.abs() <= 1e-9 {
        expected += spec.bins[0].norm_sqr();
    }
    Ok(((total - expected) / total).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn seq(v: &[f64]) -> Sequence {
        Sequence::new(v.to_vec(), 1.0).unwrap()
    }

    #[test]
    fn finite_z_transform() {
        let z = Complex64::new(0.3, -1.7);
        assert_eq!(z_transform_finite(&seq(&[1.0]), z).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(z_transform_finite(&seq(&[1.0, 1.0]), Complex64::new(-1.0, 0.0)).unwrap().norm(), 0.0);
        assert_eq!(z_transform_finite(&seq(&[1.0, -1.0]), Complex64::new(1.0, 0.0)).unwrap().norm(), 0.0);
        assert_eq!(z_transform_finite(&seq(&[1.0, 2.0]), Complex64::new(0.0, 0.0)), Err(Error::OriginEvaluation));
    }

    #[test]
    fn dtft_samples() {
        let x = seq(&[0.5, -2.0, 3.25]);
        assert_abs_diff_eq!(dtft_sample(&x, 0.0).re, 1.75, epsilon = 1e-15);
        let a = dtft_sample(&x, 0.7);
        let b = dtft_sample(&x, 0.7 + TAU);
        assert!((a - b).norm() < 1e-12);
        let d = dtft_sample(&seq(&[1.0, -1.0]), PI);
        assert!((d - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn dft_of_integer_cosine() {
        let x = Sequence::from_fn(8, 1.0, |t| (TAU * 2.0 * t / 8.0).cos()).unwrap();
        let m = dft(&x).magnitudes();
        for (k, v) in m.iter().enumerate() {
            if k == 2 || k == 6 {
                assert_abs_diff_eq!(*v, 4.0, epsilon = 1e-12);
            } else {
                assert!(*v < 1e-12, "bin {k} = {v}");
            }
        }
    }

    #[test]
    fn dft_simple_inputs() {
        let x = dft(&seq(&[1.0; 4]));
        assert_abs_diff_eq!(x.bins[0].re, 4.0, epsilon = 1e-15);
        assert!(x.bins[1..].iter().all(|b| b.norm() < 1e-15));
        let imp = dft(&seq(&[1.0, 0.0, 0.0, 0.0, 0.0]));
        assert!(imp.bins.iter().all(|b| (b.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn dft_bin_is_dtft_sample() {
        let x = seq(&[0.1, 0.7, -0.3, 2.0, 1.5, -1.0]);
        let s = dft(&x);
        for k in 0..6 {
            assert_eq!(s.bins[k], dtft_sample(&x, TAU * k as f64 / 6.0));
        }
    }

    #[test]
    fn bin_bookkeeping() {
        let s = dft(&Sequence::new(vec![0.0; 8], 100.0).unwrap());
        assert_abs_diff_eq!(s.bin_width(), TAU * 100.0 / 8.0);
        assert_abs_diff_eq!(s.bin_omega(4), PI * 100.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.bin_omega(5), -3.0 * s.bin_width(), epsilon = 1e-12);
    }

    #[test]
    fn leakage() {
        let exact = Sequence::from_fn(16, 1.0, |t| (TAU * 3.0 * t / 16.0).cos()).unwrap();
        assert!(leakage_ratio(&exact, 3).unwrap() < 1e-12);
        let offset = Sequence::from_fn(16, 1.0, |t| (TAU * 2.5 * t / 16.0).cos()).unwrap();
        assert!(leakage_ratio(&offset, 2).unwrap() > 0.1);
        assert!(leakage_ratio(&offset, 3).unwrap() > 0.1);
        assert!(matches!(leakage_ratio(&offset, 8), Err(Error::BadBin { .. })));
        assert!(matches!(leakage_ratio(&offset, 0), Err(Error::BadBin { .. })));
        assert!(matches!(leakage_ratio(&seq(&[1.0, 2.0, 3.0]), 1), Err(Error::BadBin { .. })));
    }
}
