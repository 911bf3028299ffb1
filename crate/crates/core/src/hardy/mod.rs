//! Hardy/Smirnov classification of rational functions, inner–outer
//! factorization, the backward shift and minimal one-component inner
//! functions.

mod blaschke;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use blaschke::FiniteBlaschke;

use crate::boundary::{BoundaryGrid, DEFAULT_GRID};
use crate::error::{Error, Result};
use crate::rational::{region_of, Polynomial, RationalFn, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HardyClass {
    /// No poles in the closed disc: in every `H^p`.
    HpAll,
    /// Reserved; rational inputs never land here.
    SmirnovOnly,
    NotSmirnov,
}

/// Backward-shift cyclicity as far as the crate can know it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cyclicity {
    NonCyclic,
    CyclicDeclared,
    Unknown,
}

/// A rational function with its classification and inner–outer factors.
#[derive(Clone, Debug, PartialEq)]
pub struct HardyFunction {
    value: RationalFn,
    class: HardyClass,
    inner: Option<FiniteBlaschke>,
    outer: Option<RationalFn>,
    cyclicity: Cyclicity,
}

impl HardyFunction {
    pub fn value(&self) -> &RationalFn {
        &self.value
    }

    pub fn class(&self) -> HardyClass {
        self.class
    }

    pub fn inner(&self) -> Option<&FiniteBlaschke> {
        self.inner.as_ref()
    }

    pub fn outer(&self) -> Option<&RationalFn> {
        self.outer.as_ref()
    }

    pub fn cyclicity(&self) -> Cyclicity {
        self.cyclicity
    }

    pub fn is_hardy(&self) -> bool {
        self.class == HardyClass::HpAll
    }

    /// Inner factor, or `NotHardy` when the function is outside `H^p`.
    pub fn require_inner(&self) -> Result<&FiniteBlaschke> {
        self.inner
            .as_ref()
            .ok_or_else(|| Error::NotHardy("no inner-outer factorization".into()))
    }

    pub fn require_outer(&self) -> Result<&RationalFn> {
        self.outer
            .as_ref()
            .ok_or_else(|| Error::NotHardy("no inner-outer factorization".into()))
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.value.eval(z)
    }
}

/// Inner–outer factorization of a rational function.
///
/// The inner factor is the Blaschke product over the zeros in the open
/// disc; circle zeros stay in the outer factor.
pub fn classify_and_factor(f: &RationalFn) -> Result<HardyFunction> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let f = f.canonical();
    let poles = f.poles();
    if poles.iter().any(|p| region_of(*p) != Region::Outside) {
        return Ok(HardyFunction {
            value: f,
            class: HardyClass::NotSmirnov,
            inner: None,
            outer: None,
            cyclicity: Cyclicity::Unknown,
        });
    }
    let inside: Vec<Complex64> = f
        .zeros()
        .into_iter()
        .filter(|z| region_of(*z) == Region::Inside)
        .collect();
    let inner = FiniteBlaschke::from_zeros(inside.clone())?;
    let mut num = f.num().clone();
    for a in &inside {
        num = num.deflate(*a);
    }
    for a in &inside {
        num = &num * &Polynomial::new(vec![Complex64::new(1.0, 0.0), -a.conj()]);
    }
    let outer = RationalFn::new(num, f.den().clone())?;
    Ok(HardyFunction {
        value: f,
        class: HardyClass::HpAll,
        inner: Some(inner),
        outer: Some(outer),
        cyclicity: Cyclicity::NonCyclic,
    })
}

/// `B(f) = (f - f(0)) / z`.
pub fn backward_shift(f: &RationalFn) -> Result<RationalFn> {
    let d0 = f.den().coeff(0);
    if d0.norm() <= 1e-13 * f.den().max_abs() {
        return Err(Error::PoleAtOrigin);
    }
    let f0 = f.num().coeff(0) / d0;
    let shifted = f.num() - &f.den().scale(f0);
    // The constant term vanishes by construction; drop it exactly.
    let mut coeffs = shifted.coeffs().to_vec();
    if coeffs.is_empty() {
        return Ok(RationalFn::zero());
    }
    coeffs.remove(0);
    RationalFn::new(Polynomial::new(coeffs), f.den().clone())
}

/// Smallest inner `θ` with `h ∈ θ*(N⁺)`: the Blaschke product over the
/// disc poles of the reflected continuation `conj(h)(z) / z`.
pub fn minimal_theta(h: &HardyFunction) -> Result<FiniteBlaschke> {
    if h.class == HardyClass::NotSmirnov {
        return Err(Error::NotSmirnov);
    }
    minimal_theta_rational(&h.value)
}

/// [`minimal_theta`] for a bare rational function in `N⁺` (poles on the
/// circle are allowed; the zero function gives the trivial product).
pub fn minimal_theta_rational(h: &RationalFn) -> Result<FiniteBlaschke> {
    if h.is_zero() {
        return Ok(FiniteBlaschke::identity());
    }
    if h.poles().iter().any(|p| region_of(*p) == Region::Inside) {
        return Err(Error::NotSmirnov);
    }
    let continuation = &h.reflect() * &RationalFn::z_pow(-1);
    let zeros = continuation
        .poles()
        .into_iter()
        .filter(|p| region_of(*p) == Region::Inside)
        .collect();
    FiniteBlaschke::from_zeros(zeros)
}

/// `h ∈ θ*(N⁺)`, decided as `minimal_theta(h) | θ`.
pub fn one_component_membership(h: &HardyFunction, theta: &FiniteBlaschke) -> Result<bool> {
    Ok(minimal_theta(h)?.divides(theta))
}

/// Relative mass of the first `modes` negative Fourier coefficients of
/// `conj(z) θ conj(h)` on an `n`-point grid. Zero up to rounding exactly
/// when `h ∈ θ*(N⁺)`.
pub fn one_component_defect(h: &RationalFn, theta: &FiniteBlaschke, n: usize, modes: usize) -> Result<f64> {
    let hb = h.boundary_conjugate()?;
    let grid = BoundaryGrid::sample_fn(n, |z| z.conj() * theta.eval(z) * hb.eval_unchecked(z))?;
    let total = grid.l2_norm();
    if total == 0.0 {
        return Ok(0.0);
    }
    let neg: f64 = (1..=modes as i64).map(|k| grid.coeff(-k).norm_sqr()).sum();
    Ok(neg.sqrt() / total)
}

/// [`one_component_defect`] on the default grid with 64 modes.
pub fn theta_membership_defect(h: &RationalFn, theta: &FiniteBlaschke) -> Result<f64> {
    one_component_defect(h, theta, DEFAULT_GRID, 64)
}

/// Rational functions continue meromorphically across the circle and are
/// never cyclic for the backward shift; other inputs keep their declared
/// flag, which multiplication by inner functions preserves.
pub fn cyclicity_flag(f: &HardyFunction) -> Cyclicity {
    match f.class {
        HardyClass::NotSmirnov => Cyclicity::Unknown,
        _ => Cyclicity::NonCyclic,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(c: &[f64]) -> RationalFn {
        RationalFn::from_poly(Polynomial::from_real(c))
    }

    fn ratio(n: &[f64], d: &[f64]) -> RationalFn {
        RationalFn::new(Polynomial::from_real(n), Polynomial::from_real(d)).unwrap()
    }

    #[test]
    fn factor_blaschke_quotient() {
        let f = ratio(&[-0.5, 1.0], &[2.0, -1.0]);
        let h = classify_and_factor(&f).unwrap();
        assert_eq!(h.class(), HardyClass::HpAll);
        let inner = h.inner().unwrap();
        assert!(inner.same_zeros(&FiniteBlaschke::from_zeros(vec![c(0.5, 0.0)]).unwrap()));
        let outer = h.outer().unwrap();
        for k in 0..256 {
            let z = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 256.0);
            assert!((outer.eval(z).unwrap().norm() - f.eval(z).unwrap().norm()).abs() < 1e-12);
        }
        assert!(outer.zeros().iter().all(|z| z.norm() > 1.0));
    }

    #[test]
    fn factor_trivial_cases() {
        let h = classify_and_factor(&poly(&[2.0, -1.0])).unwrap();
        assert!(h.inner().unwrap().is_constant());
        let h = classify_and_factor(&poly(&[0.0, 0.0, 1.0])).unwrap();
        assert!(h.inner().unwrap().same_zeros(&FiniteBlaschke::z_power(2)));
        assert!(h.outer().unwrap().approx_eq(&RationalFn::one(), 1e-15));
        assert_eq!(classify_and_factor(&RationalFn::zero()), Err(Error::ZeroFunction));
    }

    #[test]
    fn circle_pole_is_not_smirnov() {
        let h = classify_and_factor(&ratio(&[1.0], &[1.0, -1.0])).unwrap();
        assert_eq!(h.class(), HardyClass::NotSmirnov);
        assert!(h.inner().is_none());
        assert_eq!(minimal_theta(&h), Err(Error::NotSmirnov));
    }

    #[test]
    fn backward_shift_examples() {
        assert!(backward_shift(&RationalFn::one()).unwrap().is_zero());
        assert!(backward_shift(&poly(&[0.0, 0.0, 1.0])).unwrap().approx_eq(&RationalFn::z(), 1e-15));
        let f = ratio(&[1.0], &[2.0, -1.0]);
        let bf = backward_shift(&f).unwrap();
        assert!(bf.approx_eq(&ratio(&[0.5], &[2.0, -1.0]), 1e-14));
        let rebuilt = &(&bf * &RationalFn::z()) + &RationalFn::constant(c(0.5, 0.0));
        assert!(rebuilt.approx_eq(&f, 1e-14));
        assert_eq!(backward_shift(&RationalFn::z_pow(-1)), Err(Error::PoleAtOrigin));
    }

    #[test]
    fn minimal_theta_examples() {
        let z = classify_and_factor(&RationalFn::z()).unwrap();
        assert!(minimal_theta(&z).unwrap().same_zeros(&FiniteBlaschke::z_power(2)));
        let h = classify_and_factor(&poly(&[2.0, -1.0])).unwrap();
        assert!(minimal_theta(&h).unwrap().same_zeros(&FiniteBlaschke::z_power(2)));
        let one = classify_and_factor(&RationalFn::one()).unwrap();
        assert!(minimal_theta(&one).unwrap().same_zeros(&FiniteBlaschke::z_power(1)));
    }

    #[test]
    fn minimal_theta_of_blaschke_factor_by_divisor_enumeration() {
        let a = c(0.4, -0.3);
        let ba = FiniteBlaschke::from_zeros(vec![a]).unwrap();
        let h = classify_and_factor(&ba.to_rational()).unwrap();
        let theta = minimal_theta(&h).unwrap();
        assert!(theta.same_zeros(&FiniteBlaschke::from_zeros(vec![c(0.0, 0.0), a]).unwrap()));
        // Every divisor z^i b_a^j of z^2 b_a^2: membership iff θ divides it.
        for i in 0..=2 {
            for j in 0..=2 {
                let mut zeros = vec![c(0.0, 0.0); i];
                zeros.extend(std::iter::repeat(a).take(j));
                let d = FiniteBlaschke::from_zeros(zeros).unwrap();
                let defect = theta_membership_defect(h.value(), &d).unwrap();
                assert_eq!(defect < 1e-8, i >= 1 && j >= 1, "divisor z^{i} b^{j}: {defect}");
            }
        }
    }

    #[test]
    fn membership_examples() {
        let z = classify_and_factor(&RationalFn::z()).unwrap();
        assert!(one_component_membership(&z, &FiniteBlaschke::z_power(2)).unwrap());
        assert!(!one_component_membership(&z, &FiniteBlaschke::z_power(1)).unwrap());
    }

    #[test]
    fn rational_functions_are_not_cyclic() {
        let h = classify_and_factor(&ratio(&[1.0], &[2.0, -1.0])).unwrap();
        assert_eq!(cyclicity_flag(&h), Cyclicity::NonCyclic);
    }
}
