use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rational::{match_multisets, Polynomial, RationalFn};

/// Finite Blaschke product `c * prod (z - a) / (1 - conj(a) z)`.
///
/// Equality is up to the unimodular constant; lattice operations return
/// the canonical constant 1.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteBlaschke {
    zeros: Vec<Complex64>,
    constant: Complex64,
}

impl FiniteBlaschke {
    pub fn new(zeros: Vec<Complex64>, constant: Complex64) -> Result<Self> {
        if let Some(z) = zeros.iter().find(|z| z.norm() >= 1.0) {
            return Err(Error::NotHardy(format!("Blaschke zero {z} outside the open disc")));
        }
        if (constant.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::NotHardy(format!("Blaschke constant {constant} is not unimodular")));
        }
        Ok(Self::from_parts(zeros, constant))
    }

    /// Canonical constant 1.
    pub fn from_zeros(zeros: Vec<Complex64>) -> Result<Self> {
        Self::new(zeros, Complex64::new(1.0, 0.0))
    }

    fn from_parts(mut zeros: Vec<Complex64>, constant: Complex64) -> Self {
        zeros.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        FiniteBlaschke { zeros, constant }
    }

    pub fn identity() -> Self {
        Self::from_parts(Vec::new(), Complex64::new(1.0, 0.0))
    }

    pub fn z_power(k: usize) -> Self {
        Self::from_parts(vec![Complex64::new(0.0, 0.0); k], Complex64::new(1.0, 0.0))
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn constant(&self) -> Complex64 {
        self.constant
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_constant(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn with_unit_constant(&self) -> Self {
        Self::from_parts(self.zeros.clone(), Complex64::new(1.0, 0.0))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(self.constant, |acc, a| acc * (z - a) / (1.0 - a.conj() * z))
    }

    pub fn to_rational(&self) -> RationalFn {
        let num = Polynomial::from_roots(self.constant, &self.zeros);
        let den = self.zeros.iter().fold(Polynomial::one(), |acc, a| {
            &acc * &Polynomial::new(vec![Complex64::new(1.0, 0.0), -a.conj()])
        });
        RationalFn::new(num, den).expect("Blaschke denominator is nonzero")
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&other.zeros);
        Self::from_parts(zeros, self.constant * other.constant)
    }

    /// Multiset intersection of zeros.
    pub fn gcd(&self, other: &Self) -> Self {
        let (pairs, _, _) = match_multisets(&self.zeros, &other.zeros);
        Self::from_parts(pairs.into_iter().map(|(a, _)| a).collect(), Complex64::new(1.0, 0.0))
    }

    /// Multiset union with maximal multiplicity.
    pub fn lcm(&self, other: &Self) -> Self {
        let (pairs, left, right) = match_multisets(&self.zeros, &other.zeros);
        let mut zeros: Vec<Complex64> = pairs.into_iter().map(|(a, _)| a).collect();
        zeros.extend(left);
        zeros.extend(right);
        Self::from_parts(zeros, Complex64::new(1.0, 0.0))
    }

    /// `self | other`: zero multiset inclusion.
    pub fn divides(&self, other: &Self) -> bool {
        let (_, left, _) = match_multisets(&self.zeros, &other.zeros);
        left.is_empty()
    }

    /// `other / self` when `self | other`.
    pub fn quotient_of(&self, other: &Self) -> Option<Self> {
        let (_, left, right) = match_multisets(&self.zeros, &other.zeros);
        left.is_empty()
            .then(|| Self::from_parts(right, other.constant / self.constant))
    }

    /// The product with the zero at `index` removed.
    pub fn without_zero(&self, index: usize) -> Self {
        let mut zeros = self.zeros.clone();
        zeros.remove(index);
        Self::from_parts(zeros, self.constant)
    }

    /// Same zero multiset (within root tolerance), constants ignored.
    pub fn same_zeros(&self, other: &Self) -> bool {
        self.degree() == other.degree() && self.divides(other)
    }

    /// Takenaka–Malmquist orthonormal basis of the model space `K_B`.
    pub fn takenaka_basis(&self) -> Vec<RationalFn> {
        let one = Complex64::new(1.0, 0.0);
        let mut prefix = RationalFn::one();
        let mut out = Vec::with_capacity(self.zeros.len());
        for &a in &self.zeros {
            let kernel = RationalFn::new(
                Polynomial::constant(Complex64::new((1.0 - a.norm_sqr()).sqrt(), 0.0)),
                Polynomial::new(vec![one, -a.conj()]),
            )
            .expect("nonzero denominator");
            out.push(&prefix * &kernel);
            let factor = FiniteBlaschke::from_parts(vec![a], one).to_rational();
            prefix = &prefix * &factor;
        }
        out
    }
}
