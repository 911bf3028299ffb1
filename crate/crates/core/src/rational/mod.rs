//! Exact complex rational functions: the carrier for every Hardy function,
//! symbol entry and inner/outer factor in the crate.

mod poly;

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use poly::{match_multisets, Polynomial, ROOT_MATCH_TOL};

/// Half-width of the band around `|z| = 1` treated as "on the circle".
pub const CIRCLE_TOL: f64 = 1e-9;

/// `|den(z)|` below this fraction of `sum |den_k| |z|^k` counts as a pole hit.
const POLE_HIT_REL: f64 = 1e-13;

/// `num / den` kept canonical: no common roots, monic denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn {
    num: Polynomial,
    den: Polynomial,
}

/// Where a root sits relative to the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Inside,
    OnCircle,
    Outside,
}

pub fn region_of(r: Complex64) -> Region {
    let m = r.norm();
    if (m - 1.0).abs() <= CIRCLE_TOL {
        Region::OnCircle
    } else if m < 1.0 {
        Region::Inside
    } else {
        Region::Outside
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub zeros_in_disc: Vec<Complex64>,
    pub zeros_on_circle: Vec<Complex64>,
    pub zeros_outside: Vec<Complex64>,
    pub poles_in_disc: Vec<Complex64>,
    pub poles_on_circle: Vec<Complex64>,
    pub poles_outside: Vec<Complex64>,
}

impl RationalFn {
    /// Builds and canonicalizes `num / den`.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self::canonicalize(num, den))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFn {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// The identity function `z`.
    pub fn z() -> Self {
        Self::from_poly(Polynomial::monomial(Complex64::new(1.0, 0.0), 1))
    }

    /// `z^k` for any integer `k`; on the circle `z^{-1}` is `conj(z)`.
    pub fn z_pow(k: i32) -> Self {
        let one = Complex64::new(1.0, 0.0);
        if k >= 0 {
            Self::from_poly(Polynomial::monomial(one, k as usize))
        } else {
            RationalFn {
                num: Polynomial::one(),
                den: Polynomial::monomial(one, (-k) as usize),
            }
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    fn canonicalize(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (mut num, mut den) = (num, den);
        // Exact powers of z cancel without root finding.
        let (kn, _) = num.split_origin();
        let (kd, _) = den.split_origin();
        let k = kn.min(kd);
        if k > 0 {
            num = Polynomial::new(num.coeffs()[k..].to_vec());
            den = Polynomial::new(den.coeffs()[k..].to_vec());
        }
        if num.degree().unwrap_or(0) > 0 && den.degree().unwrap_or(0) > 0 {
            let rn = num.roots().unwrap_or_default();
            let rd = den.roots().unwrap_or_default();
            let (pairs, _, _) = match_multisets(&rn, &rd);
            for (a, b) in pairs {
                let c = (a + b) * 0.5;
                num = num.deflate(c);
                den = den.deflate(c);
            }
        }
        let lead = den.leading();
        RationalFn {
            num: num.scale(lead.inv()),
            den: den.scale(lead.inv()),
        }
    }

    /// Canonical form of an already-built function; idempotent.
    pub fn canonical(&self) -> Self {
        Self::canonicalize(self.num.clone(), self.den.clone())
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let d = self.den.eval(z);
        if d.norm() <= POLE_HIT_REL * self.den.eval_abs(z) {
            return Err(Error::PoleHit(format!("{z}")));
        }
        Ok(self.num.eval(z) / d)
    }

    /// Evaluation without the pole check; non-finite at poles.
    pub fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn zeros(&self) -> Vec<Complex64> {
        self.num.roots().unwrap_or_default()
    }

    pub fn poles(&self) -> Vec<Complex64> {
        self.den.roots().unwrap_or_default()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c == Complex64::new(0.0, 0.0) {
            return Self::zero();
        }
        RationalFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn powi(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    /// The rational function `R` with `R(z) = conj(f(z))` on `|z| = 1`,
    /// without the pole-on-circle precondition.
    pub fn reflect(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let dn = self.num.degree().unwrap_or(0) as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        let mut num = self.num.reversed_conj();
        let mut den = self.den.reversed_conj();
        if dd > dn {
            num = num.shift_up((dd - dn) as usize);
        } else if dn > dd {
            den = den.shift_up((dn - dd) as usize);
        }
        Self::canonicalize(num, den)
    }

    /// `conj(f)` on the circle as a rational function.
    pub fn boundary_conjugate(&self) -> Result<Self> {
        if self.poles().iter().any(|p| region_of(*p) == Region::OnCircle) {
            return Err(Error::PoleOnCircle);
        }
        Ok(self.reflect())
    }

    pub fn region_classify(&self) -> RegionReport {
        let mut report = RegionReport::default();
        for z in self.zeros() {
            match region_of(z) {
                Region::Inside => report.zeros_in_disc.push(z),
                Region::OnCircle => report.zeros_on_circle.push(z),
                Region::Outside => report.zeros_outside.push(z),
            }
        }
        for p in self.poles() {
            match region_of(p) {
                Region::Inside => report.poles_in_disc.push(p),
                Region::OnCircle => report.poles_on_circle.push(p),
                Region::Outside => report.poles_outside.push(p),
            }
        }
        report
    }

    /// True when `self - other` vanishes up to `rel` of the cross-product scale.
    pub fn approx_eq(&self, other: &RationalFn, rel: f64) -> bool {
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        let diff = &lhs - &rhs;
        diff.max_abs() <= rel * lhs.max_abs().max(rhs.max_abs()).max(f64::MIN_POSITIVE)
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        if self.den == rhs.den {
            return RationalFn::canonicalize(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFn::canonicalize(num, &self.den * &rhs.den)
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        self + &(-rhs)
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::canonicalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Division by the zero function yields the zero function; use
/// [`RationalFn::recip`] where that must be an error.
impl Div for &RationalFn {
    type Output = RationalFn;
    fn div(self, rhs: &RationalFn) -> RationalFn {
        if rhs.is_zero() {
            return RationalFn::zero();
        }
        RationalFn::canonicalize(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}
