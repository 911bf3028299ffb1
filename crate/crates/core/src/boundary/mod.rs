//! Boundary-value calculus on uniform grids of the unit circle: sampling,
//! Fourier coefficients, Riesz projection and outer functions.

mod analytic;
mod outer;

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rustfft::FftPlanner;

pub use analytic::{AnalyticFn, SampledFunction};
pub use outer::{lemma21_outer, outer_from_fn, outer_from_modulus, sum_modulus_outer, OuterNumeric, CLAMP_FLOOR};

use crate::error::{Error, Result};
use crate::rational::{region_of, RationalFn, Region};

pub const DEFAULT_GRID: usize = 4096;
pub const MIN_GRID: usize = 256;

/// Samples at the `n`-th roots of unity with cached Fourier coefficients.
///
/// Coefficients are stored in FFT order and normalized by `1/n`, so
/// `coeff(k)` is the `k`-th Fourier coefficient for `-n/2 <= k < n/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryGrid {
    samples: Vec<Complex64>,
    coeffs: Vec<Complex64>,
}

/// `e^{2πik/n}`
pub fn grid_point(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * k as f64 / n as f64)
}

fn check_size(n: usize) -> Result<()> {
    if !n.is_power_of_two() || n < MIN_GRID {
        return Err(Error::InvalidGrid(format!(
            "grid size {n} must be a power of two >= {MIN_GRID}"
        )));
    }
    Ok(())
}

fn forward(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

fn inverse(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut buf = coeffs.to_vec();
    FftPlanner::<f64>::new().plan_fft_inverse(buf.len()).process(&mut buf);
    buf
}

impl BoundaryGrid {
    pub fn from_samples(samples: Vec<Complex64>) -> Result<Self> {
        check_size(samples.len())?;
        let coeffs = forward(&samples);
        Ok(BoundaryGrid { samples, coeffs })
    }

    /// Grid from Fourier coefficients in FFT order.
    pub fn from_fft_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        check_size(coeffs.len())?;
        let samples = inverse(&coeffs);
        Ok(BoundaryGrid { samples, coeffs })
    }

    /// Grid of the trigonometric polynomial `sum c_k z^k`, `k` from `lowest`.
    pub fn from_laurent(n: usize, lowest: i64, coeffs: &[Complex64]) -> Result<Self> {
        check_size(n)?;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (i, &c) in coeffs.iter().enumerate() {
            let k = lowest + i as i64;
            if k < -(n as i64) / 2 || k >= n as i64 / 2 {
                return Err(Error::TruncationTooSmall(format!("mode {k} does not fit a grid of {n}")));
            }
            buf[k.rem_euclid(n as i64) as usize] += c;
        }
        Self::from_fft_coeffs(buf)
    }

    pub fn sample_fn(n: usize, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        check_size(n)?;
        Self::from_samples((0..n).map(|k| f(grid_point(k, n))).collect())
    }

    pub fn sample_rational(f: &RationalFn, n: usize) -> Result<Self> {
        if f.poles().iter().any(|p| region_of(*p) == Region::OnCircle) {
            return Err(Error::PoleOnCircle);
        }
        Self::sample_fn(n, |z| f.eval_unchecked(z))
    }

    pub fn constant(n: usize, c: Complex64) -> Result<Self> {
        check_size(n)?;
        Self::from_samples(vec![c; n])
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn fft_coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Fourier coefficient of `z^k`; zero outside `-n/2..n/2`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let n = self.n() as i64;
        if k < -n / 2 || k >= n / 2 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[k.rem_euclid(n) as usize]
    }

    /// Zeroes every strictly negative frequency.
    pub fn riesz_project(&self) -> Self {
        let n = self.n();
        let mut c = self.coeffs.clone();
        c[n / 2..].iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        Self::from_fft_coeffs(c).expect("size already validated")
    }

    /// Complementary projection onto strictly negative frequencies.
    pub fn anti_analytic_part(&self) -> Self {
        let n = self.n();
        let mut c = self.coeffs.clone();
        c[..n / 2].iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        Self::from_fft_coeffs(c).expect("size already validated")
    }

    /// `sqrt(mean |f|^2)`, the `L^2(dm)` norm.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `L^2` norm of the strictly negative-frequency part.
    pub fn negative_mass(&self) -> f64 {
        let n = self.n();
        self.coeffs[n / 2..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `L^2` norm of the nonnegative-frequency part.
    pub fn nonnegative_mass(&self) -> f64 {
        let n = self.n();
        self.coeffs[..n / 2].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Negative mass relative to the total; 0 for the zero grid.
    pub fn relative_negative_mass(&self) -> f64 {
        let total = self.l2_norm();
        if total == 0.0 {
            0.0
        } else {
            self.negative_mass() / total
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_samples(self.samples.iter().map(|&s| f(s)).collect()).expect("size already validated")
    }

    /// Pointwise map that also sees the grid point.
    pub fn map_with_point(&self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let n = self.n();
        Self::from_samples(
            self.samples
                .iter()
                .enumerate()
                .map(|(k, &s)| f(grid_point(k, n), s))
                .collect(),
        )
        .expect("size already validated")
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::GridMismatch(self.n(), other.n()));
        }
        Self::from_samples(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn conj(&self) -> Self {
        self.map(|s| s.conj())
    }

    pub fn abs(&self) -> Self {
        self.map(|s| Complex64::new(s.norm(), 0.0))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|s| s * c)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a / b)
    }

    /// Value inside the disc of the analytic part.
    pub fn eval_analytic(&self, z: Complex64) -> Complex64 {
        let n = self.n();
        self.coeffs[..n / 2]
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `(f - f(0)) / z` on the analytic part.
    pub fn backward_shift(&self) -> Self {
        let n = self.n();
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        c[..n / 2 - 1].copy_from_slice(&self.coeffs[1..n / 2]);
        Self::from_fft_coeffs(c).expect("size already validated")
    }

    /// Multiplication by `z` on the analytic part (top mode dropped).
    pub fn shift_up(&self) -> Self {
        let n = self.n();
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        c[1..n / 2].copy_from_slice(&self.coeffs[..n / 2 - 1]);
        Self::from_fft_coeffs(c).expect("size already validated")
    }

    /// Winding number of the sampled curve around the origin.
    pub fn winding_number(&self) -> i64 {
        winding_number(&self.samples)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.n() != other.n() {
            return Err(Error::GridMismatch(self.n(), other.n()));
        }
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Total phase increment over `2π`, rounded.
pub fn winding_number(samples: &[Complex64]) -> i64 {
    let n = samples.len();
    let total: f64 = (0..n)
        .map(|k| (samples[(k + 1) % n] / samples[k]).arg())
        .sum();
    (total / TAU).round() as i64
}

/// Samples a rational function or declares failure on circle poles.
pub fn sample_fourier(f: &RationalFn, n: usize) -> Result<BoundaryGrid> {
    BoundaryGrid::sample_rational(f, n)
}

pub fn riesz_project(g: &BoundaryGrid) -> BoundaryGrid {
    g.riesz_project()
}

impl Add for &BoundaryGrid {
    type Output = BoundaryGrid;
    fn add(self, rhs: &BoundaryGrid) -> BoundaryGrid {
        self.zip_with(rhs, |a, b| a + b).expect("grid sizes must agree")
    }
}

impl Sub for &BoundaryGrid {
    type Output = BoundaryGrid;
    fn sub(self, rhs: &BoundaryGrid) -> BoundaryGrid {
        self.zip_with(rhs, |a, b| a - b).expect("grid sizes must agree")
    }
}

impl Mul for &BoundaryGrid {
    type Output = BoundaryGrid;
    fn mul(self, rhs: &BoundaryGrid) -> BoundaryGrid {
        self.zip_with(rhs, |a, b| a * b).expect("grid sizes must agree")
    }
}
