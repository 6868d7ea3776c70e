//! Uniform angular grids on the unit circle, FFT-backed sampling and
//! compensated summation.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::{Error, Result};

/// Smallest grid handed out by [`UnitGrid::for_degree`].
pub const MIN_DEFAULT_SIZE: usize = 4096;
/// Oversampling factor relative to the highest polynomial degree.
pub const OVERSAMPLE: usize = 8;

/// `N` equispaced angles `θ_k = 2πk/N`, starting at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnitGrid {
    size: usize,
}

impl UnitGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size < 4 {
            return Err(Error::InvalidParameter(format!(
                "grid size must be at least 4, got {size}"
            )));
        }
        Ok(Self { size })
    }

    /// Default grid for a session whose largest degree is `n_max`: at least
    /// `max(4096, 8 (n_max + 1))`, rounded up to a power of two.
    pub fn for_degree(n_max: usize) -> Self {
        let size = MIN_DEFAULT_SIZE.max(OVERSAMPLE * (n_max + 1));
        Self {
            size: size.next_power_of_two(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Quadrature weight `2π/N` of a single node.
    pub fn step(&self) -> f64 {
        TAU / self.size as f64
    }

    pub fn angle(&self, k: usize) -> f64 {
        TAU * k as f64 / self.size as f64
    }

    pub fn point(&self, k: usize) -> Complex64 {
        let (s, c) = self.angle(k).sin_cos();
        Complex64::new(c, s)
    }

    pub fn angles(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.size).map(move |k| self.angle(k))
    }

    pub fn points(&self) -> Vec<Complex64> {
        (0..self.size).map(|k| self.point(k)).collect()
    }

    /// Whether products of two polynomials of degree `degree` are integrated
    /// exactly by the rectangle rule.
    pub fn supports_degree(&self, degree: usize) -> bool {
        self.size > 2 * degree
    }

    pub fn require_degree(&self, degree: usize) -> Result<()> {
        if self.supports_degree(degree) {
            Ok(())
        } else {
            Err(Error::GridTooSmall {
                size: self.size,
                degree,
            })
        }
    }

    /// Values `Σ_j c_j e^{ijθ_k}` of a trigonometric series with nonnegative
    /// frequencies. Coefficients beyond `N` fold back modulo `N`, which is
    /// exact at the grid nodes.
    pub fn synthesize(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let n = self.size;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (j, c) in coeffs.iter().enumerate() {
            buf[j % n] += c;
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        buf
    }

    /// Discrete Fourier coefficients `ĉ_k = N^{-1} Σ_j f_j e^{-ikθ_j}`,
    /// `k = 0..N-1` (negative frequencies sit at `N - |k|`).
    pub fn analyze(&self, samples: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(samples.len())?;
        let mut buf = samples.to_vec();
        FftPlanner::new().plan_fft_forward(self.size).process(&mut buf);
        let scale = 1.0 / self.size as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        Ok(buf)
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len == self.size {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                expected: self.size,
                actual: len,
            })
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated complex sum (real and imaginary parts kept separately).
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::default();
    values.into_iter().for_each(|x| acc.add(x));
    acc.value()
}

pub fn compensated_complex_sum(values: impl IntoIterator<Item = Complex64>) -> Complex64 {
    let mut acc = ComplexSum::default();
    values.into_iter().for_each(|z| acc.add(z));
    acc.value()
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Distance from `theta` to the nearest of the points `0` and `π` on the circle.
pub fn distance_to_real_axis_points(theta: f64) -> f64 {
    let t = wrap_angle(theta);
    let to_zero = t.min(TAU - t);
    let to_pi = (t - std::f64::consts::PI).abs();
    to_zero.min(to_pi)
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
pub fn golden_section_min(mut a: f64, mut b: f64, iters: usize, f: impl Fn(f64) -> f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if (b - a).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        c
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn default_grid_oversamples() {
        assert_eq!(UnitGrid::for_degree(10).size(), 4096);
        assert_eq!(UnitGrid::for_degree(1000).size(), 8192);
        assert!(UnitGrid::for_degree(16384).size() >= 8 * 16385);
    }

    #[test]
    fn small_grid_rejected() {
        assert!(UnitGrid::new(3).is_err());
        assert!(UnitGrid::new(4).is_ok());
    }

    #[test]
    fn synthesize_matches_horner_and_folds() {
        let grid = UnitGrid::new(8).unwrap();
        // 11 coefficients on an 8-point grid exercise the folding path.
        let coeffs: Vec<Complex64> = (0..11)
            .map(|j| Complex64::new(j as f64 * 0.5 - 1.0, (j * j) as f64 * 0.1))
            .collect();
        let values = grid.synthesize(&coeffs);
        for k in 0..8 {
            let z = grid.point(k);
            let direct: Complex64 = coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| c * z.powu(j as u32))
                .sum();
            assert!((values[k] - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn analyze_inverts_synthesize() {
        let grid = UnitGrid::new(16).unwrap();
        let coeffs: Vec<Complex64> = (0..5).map(|j| Complex64::new(1.0 / (j + 1) as f64, -(j as f64))).collect();
        let spec = grid.analyze(&grid.synthesize(&coeffs)).unwrap();
        for (j, c) in coeffs.iter().enumerate() {
            assert!((spec[j] - c).norm() < 1e-14);
        }
        assert!(spec[7].norm() < 1e-14);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let values = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(values), 2.0);
    }

    #[test]
    fn golden_section_finds_v_minimum() {
        let x = golden_section_min(0.0, 1.0, 200, |t| (t - 0.3).abs());
        assert_relative_eq!(x, 0.3, epsilon = 1e-14);
    }

    #[test]
    fn distance_to_axis_points() {
        assert_relative_eq!(distance_to_real_axis_points(0.1), 0.1);
        assert_relative_eq!(distance_to_real_axis_points(TAU - 0.1), 0.1, epsilon = 1e-15);
        assert_relative_eq!(distance_to_real_axis_points(3.0), std::f64::consts::PI - 3.0);
    }
}
