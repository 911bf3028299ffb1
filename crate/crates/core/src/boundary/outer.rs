use num_complex::Complex64;

use super::{grid_point, BoundaryGrid};
use crate::error::{Error, Result};
use crate::hardy::{HardyClass, HardyFunction};

/// Modulus samples below this are raised to it before taking logarithms.
pub const CLAMP_FLOOR: f64 = 1e-12;

/// Fraction of clamped samples beyond which `log m` is not trusted.
const CLAMP_LIMIT: f64 = 0.01;

const ALIAS_TOL: f64 = 1e-7;

/// Outer function known through its boundary values, normalized so that
/// `u(0) > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct OuterNumeric {
    boundary: BoundaryGrid,
    log_modulus: BoundaryGrid,
    clamped: usize,
}

impl OuterNumeric {
    pub fn boundary(&self) -> &BoundaryGrid {
        &self.boundary
    }

    pub fn log_modulus(&self) -> &BoundaryGrid {
        &self.log_modulus
    }

    pub fn into_boundary(self) -> BoundaryGrid {
        self.boundary
    }

    /// Number of samples raised to [`CLAMP_FLOOR`].
    pub fn clamped(&self) -> usize {
        self.clamped
    }

    pub fn has_warning(&self) -> bool {
        self.clamped > 0
    }

    pub fn value_at_zero(&self) -> Complex64 {
        self.boundary.coeff(0)
    }

    pub fn eval_inside(&self, z: Complex64) -> Complex64 {
        self.boundary.eval_analytic(z)
    }

    /// Largest deviation of `|u|` from the prescribed modulus.
    pub fn modulus_error(&self) -> f64 {
        self.boundary
            .samples()
            .iter()
            .zip(self.log_modulus.samples())
            .map(|(u, l)| (u.norm() - l.re.exp()).abs())
            .fold(0.0, f64::max)
    }

    pub fn winding_number(&self) -> i64 {
        self.boundary.winding_number()
    }
}

/// Outer function with boundary modulus `m` (only `|m|` is used).
///
/// With `log m = sum c_k z^k` the analytic function
/// `a = c_0 + 2 sum_{0<k<N/2} c_k z^k` has `Re a = log m` on the circle,
/// so `u = exp(a)` is outer with `|u| = m` and `u(0) = exp(c_0) > 0`.
pub fn outer_from_modulus(m: &BoundaryGrid) -> Result<OuterNumeric> {
    let n = m.n();
    let mut clamped = 0;
    let logs: Vec<Complex64> = m
        .samples()
        .iter()
        .map(|s| {
            let r = s.norm();
            let r = if r < CLAMP_FLOOR || !r.is_finite() {
                clamped += 1;
                CLAMP_FLOOR
            } else {
                r
            };
            Complex64::new(r.ln(), 0.0)
        })
        .collect();
    if clamped as f64 > CLAMP_LIMIT * n as f64 {
        return Err(Error::NotLogIntegrable { clamped, total: n });
    }
    let log_modulus = BoundaryGrid::from_samples(logs)?;
    let c = log_modulus.fft_coeffs();
    let mut a = vec![Complex64::new(0.0, 0.0); n];
    a[0] = Complex64::new(c[0].re, 0.0);
    for k in 1..n / 2 {
        a[k] = c[k] * 2.0;
    }
    let analytic = BoundaryGrid::from_fft_coeffs(a)?;
    let boundary = analytic.map(|s| s.exp());
    Ok(OuterNumeric { boundary, log_modulus, clamped })
}

/// [`outer_from_modulus`] for a modulus given as a function on the
/// circle, with an aliasing guard: the construction is repeated on a grid
/// of size `2n` and must agree to `1e-7` at the shared points.
pub fn outer_from_fn(n: usize, modulus: impl Fn(Complex64) -> f64) -> Result<OuterNumeric> {
    let fine = |size: usize| {
        BoundaryGrid::from_samples(
            (0..size)
                .map(|k| Complex64::new(modulus(grid_point(k, size)), 0.0))
                .collect(),
        )
    };
    let coarse = outer_from_modulus(&fine(n)?)?;
    let doubled = outer_from_modulus(&fine(2 * n)?)?;
    let diff = coarse
        .boundary
        .samples()
        .iter()
        .zip(doubled.boundary.samples().iter().step_by(2))
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let scale = coarse.boundary.sup_norm().max(1.0);
    if diff > ALIAS_TOL * scale {
        return Err(Error::TruncationTooSmall(format!(
            "outer function changes by {diff:.3e} when the grid is doubled from {n}"
        )));
    }
    Ok(coarse)
}

/// Outer `u` with `|u| = |φ_1| + ... + |φ_n| + 1` on the circle.
pub fn lemma21_outer(phis: &[HardyFunction], n: usize) -> Result<OuterNumeric> {
    if let Some(bad) = phis.iter().find(|p| p.class() != HardyClass::HpAll) {
        return Err(Error::NotHardy(format!("{:?} has poles in the closed disc", bad.value())));
    }
    let values: Vec<_> = phis.iter().map(|p| p.value().clone()).collect();
    outer_from_fn(n, |z| 1.0 + values.iter().map(|f| f.eval_unchecked(z).norm()).sum::<f64>())
}

/// Outer `u` with `|u| = 1 + sum |g_i|` for boundary grids.
pub fn sum_modulus_outer(grids: &[&BoundaryGrid], n: usize) -> Result<OuterNumeric> {
    let mut m = vec![1.0; n];
    for g in grids {
        if g.n() != n {
            return Err(Error::GridMismatch(g.n(), n));
        }
        for (acc, s) in m.iter_mut().zip(g.samples()) {
            *acc += s.norm();
        }
    }
    outer_from_modulus(&BoundaryGrid::from_samples(m.into_iter().map(|x| Complex64::new(x, 0.0)).collect())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::classify_and_factor;
    use crate::rational::{Polynomial, RationalFn};

    #[test]
    fn constant_modulus() {
        let u = outer_from_fn(4096, |_| 2.0).unwrap();
        for s in u.boundary().samples() {
            assert!((s - Complex64::new(2.0, 0.0)).norm() < 1e-10);
        }
        assert_eq!(u.winding_number(), 0);
    }

    #[test]
    fn modulus_of_two_minus_z() {
        let u = outer_from_fn(4096, |z| (2.0 - z).norm()).unwrap();
        let grid = BoundaryGrid::sample_fn(4096, |z| 2.0 - z).unwrap();
        assert!(u.boundary().max_abs_diff(&grid).unwrap() < 1e-6);
    }

    #[test]
    fn zero_inside_is_reflected() {
        let u = outer_from_fn(4096, |z| (z - 0.5).norm()).unwrap();
        let grid = BoundaryGrid::sample_fn(4096, |z| 1.0 - 0.5 * z).unwrap();
        assert!(u.boundary().max_abs_diff(&grid).unwrap() < 1e-6);
        assert_eq!(u.winding_number(), 0);
    }

    #[test]
    fn conjugate_function_is_exact_on_band_limited_data() {
        // a(z) = 0.3 + 0.2z - 0.1i z^3, real at 0.
        let a = |z: Complex64| 0.3 + 0.2 * z - Complex64::new(0.0, 0.1) * z.powu(3);
        let u = outer_from_fn(1024, |z| a(z).re.exp()).unwrap();
        let expected = BoundaryGrid::sample_fn(1024, |z| a(z).exp()).unwrap();
        assert!(u.boundary().max_abs_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn lemma_outer_examples() {
        let z = classify_and_factor(&RationalFn::z()).unwrap();
        let u = lemma21_outer(&[z.clone()], 4096).unwrap();
        assert!((u.value_at_zero() - Complex64::new(2.0, 0.0)).norm() < 1e-10);
        let one = classify_and_factor(&RationalFn::one()).unwrap();
        let u = lemma21_outer(&[one, z], 4096).unwrap();
        assert!(u.boundary().samples().iter().all(|s| (s - Complex64::new(3.0, 0.0)).norm() < 1e-10));
        let bad = classify_and_factor(&RationalFn::new(Polynomial::one(), Polynomial::from_real(&[0.5, -1.0])).unwrap()).unwrap();
        assert!(matches!(lemma21_outer(&[bad], 4096), Err(Error::NotHardy(_))));
    }

    #[test]
    fn vanishing_modulus_is_rejected() {
        let m = BoundaryGrid::sample_fn(256, |z| Complex64::new(if z.re > 0.0 { 1.0 } else { 0.0 }, 0.0)).unwrap();
        assert!(matches!(outer_from_modulus(&m), Err(Error::NotLogIntegrable { .. })));
    }
}
