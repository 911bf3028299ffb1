//! Dense complex polynomials in ascending-degree storage.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance for matching two roots (cancellation, multiplicity, multiset ops).
pub const ROOT_MATCH_TOL: f64 = 1e-8;

/// Sums and differences whose coefficient falls below this many ulps of the
/// operand magnitudes are treated as exact cancellation.
const CANCEL_ULPS: f64 = 64.0;

const NEWTON_POLISH_STEPS: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// `c * z^k`
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `lead * prod (z - r)`
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut coeffs = vec![lead];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Horner evaluation of `sum |a_k| |z|^k`, the natural scale for `|p(z)|`.
    pub fn eval_abs(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Multiplication by `z^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }

    /// Number of exact zero roots at the origin and the remaining cofactor.
    pub fn split_origin(&self) -> (usize, Self) {
        let k = self
            .coeffs
            .iter()
            .take_while(|c| **c == Complex64::new(0.0, 0.0))
            .count();
        (k, Self::new(self.coeffs[k.min(self.coeffs.len())..].to_vec()))
    }

    /// `z^d conj(p(1/conj z))` for `d = degree`: coefficients reversed and conjugated.
    pub fn reversed_conj(&self) -> Self {
        Self::new(self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    /// Synthetic division by `(z - root)`; the remainder is dropped.
    pub fn deflate(&self, root: Complex64) -> Self {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self::zero();
        }
        let mut quotient = vec![Complex64::new(0.0, 0.0); n - 1];
        let mut carry = Complex64::new(0.0, 0.0);
        for k in (1..n).rev() {
            carry = self.coeffs[k] + carry * root;
            quotient[k - 1] = carry;
        }
        Self::new(quotient)
    }

    /// Roots as a multiset; repeated roots appear as identical values.
    ///
    /// Companion-matrix eigenvalues, Newton polish on each root, then
    /// clustering. Clusters closer than [`ROOT_MATCH_TOL`] merge outright;
    /// wider clusters merge only if their centroid is a root of the
    /// derivatives up to the cluster size (multiple roots scatter like
    /// `eps^(1/m)` under the eigenvalue solver).
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (zero_count, rest) = self.split_origin();
        let mut roots = vec![Complex64::new(0.0, 0.0); zero_count];
        let d = rest.degree().unwrap_or(0);
        if d == 0 {
            return Ok(roots);
        }
        let lead = rest.leading();
        let monic: Vec<Complex64> = rest.coeffs.iter().map(|c| c / lead).collect();
        let raw: Vec<Complex64> = if d == 1 {
            vec![-monic[0]]
        } else {
            companion_eigenvalues(&monic)
        };
        let deriv = rest.derivative();
        let pairs: Vec<(Complex64, Complex64)> = raw
            .into_iter()
            .map(|r| (newton_polish(&rest, &deriv, r), r))
            .collect();
        roots.extend(cluster_roots(&rest, pairs));
        Ok(roots)
    }
}

fn companion_eigenvalues(monic: &[Complex64]) -> Vec<Complex64> {
    let d = monic.len() - 1;
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -monic[i];
    }
    match m.clone().try_schur(f64::EPSILON, 10_000) {
        Some(schur) => {
            let (_, t) = schur.unpack();
            (0..d).map(|i| t[(i, i)]).collect()
        }
        // Fall back to the full iteration budget; Schur on a companion
        // matrix of degree <= 64 does not fail in practice.
        None => m.schur().unpack().1.diagonal().iter().copied().collect(),
    }
}

fn newton_polish(p: &Polynomial, dp: &Polynomial, mut r: Complex64) -> Complex64 {
    for _ in 0..NEWTON_POLISH_STEPS {
        let value = p.eval(r);
        let slope = dp.eval(r);
        if slope.norm() == 0.0 || !value.is_finite() {
            break;
        }
        let candidate = r - value / slope;
        if candidate.is_finite() && p.eval(candidate).norm() <= value.norm() {
            r = candidate;
        } else {
            break;
        }
    }
    r
}

/// `|p^(j)(c)|` relative to the natural magnitude of the derivative at `c`.
fn derivative_defect(p: &Polynomial, c: Complex64, order: usize) -> f64 {
    let mut q = p.clone();
    let mut worst: f64 = 0.0;
    for _ in 0..order {
        let scale = q.eval_abs(c).max(f64::MIN_POSITIVE);
        worst = worst.max(q.eval(c).norm() / scale);
        q = q.derivative();
    }
    worst
}

/// Clusters `(polished, raw)` root pairs. Multiple roots are represented
/// by the mean of their raw eigenvalues, which is far better conditioned
/// than any single member.
fn cluster_roots(p: &Polynomial, roots: Vec<(Complex64, Complex64)>) -> Vec<Complex64> {
    // Pass 1: tight single-linkage clusters.
    let mut clusters: Vec<Vec<(Complex64, Complex64)>> = Vec::new();
    for r in roots {
        let tol = ROOT_MATCH_TOL * r.0.norm().max(1.0);
        match clusters
            .iter_mut()
            .find(|cl| cl.iter().any(|s| (s.0 - r.0).norm() <= tol))
        {
            Some(cl) => cl.push(r),
            None => clusters.push(vec![r]),
        }
    }
    // Pass 2: merge loose clusters whose centroid is a genuine multiple root.
    const LOOSE: f64 = 1e-3;
    const DEFECT: f64 = 1e-6;
    let mut merged = true;
    while merged {
        merged = false;
        'outer: for i in 0..clusters.len() {
            for j in (i + 1)..clusters.len() {
                let ci = centroid(&clusters[i]);
                let cj = centroid(&clusters[j]);
                if (ci - cj).norm() > LOOSE * ci.norm().max(1.0) {
                    continue;
                }
                let mut joint = clusters[i].clone();
                joint.extend_from_slice(&clusters[j]);
                let c = centroid(&joint);
                if derivative_defect(p, c, joint.len()) <= DEFECT {
                    clusters[i] = joint;
                    clusters.remove(j);
                    merged = true;
                    break 'outer;
                }
            }
        }
    }
    let mut out = Vec::new();
    for cl in clusters {
        let c = if cl.len() == 1 { cl[0].0 } else { centroid(&cl) };
        out.extend(std::iter::repeat(c).take(cl.len()));
    }
    out
}

fn centroid(points: &[(Complex64, Complex64)]) -> Complex64 {
    points.iter().map(|p| p.1).sum::<Complex64>() / points.len() as f64
}

/// Coefficient-wise `a ± b` with exact-cancellation cleanup.
fn combine(a: &Polynomial, b: &Polynomial, sign: f64) -> Polynomial {
    let n = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..n)
        .map(|k| {
            let (x, y) = (a.coeff(k), b.coeff(k) * sign);
            let s = x + y;
            if s.norm() <= CANCEL_ULPS * f64::EPSILON * (x.norm() + y.norm()) {
                Complex64::new(0.0, 0.0)
            } else {
                s
            }
        })
        .collect();
    Polynomial::new(coeffs)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        combine(self, rhs, 1.0)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        combine(self, rhs, -1.0)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

/// Pairs up roots of two multisets within [`ROOT_MATCH_TOL`]; returns the
/// matched pairs and the unmatched leftovers of each side.
pub fn match_multisets(
    a: &[Complex64],
    b: &[Complex64],
) -> (Vec<(Complex64, Complex64)>, Vec<Complex64>, Vec<Complex64>) {
    let mut used = vec![false; b.len()];
    let mut pairs = Vec::new();
    let mut left = Vec::new();
    for &x in a {
        let tol = ROOT_MATCH_TOL * x.norm().max(1.0);
        let best = b
            .iter()
            .enumerate()
            .filter(|(j, y)| !used[*j] && (x - **y).norm() <= tol)
            .min_by(|(_, y1), (_, y2)| (x - **y1).norm().total_cmp(&(x - **y2).norm()));
        match best {
            Some((j, &y)) => {
                used[j] = true;
                pairs.push((x, y));
            }
            None => left.push(x),
        }
    }
    let right = b
        .iter()
        .zip(&used)
        .filter(|(_, u)| !**u)
        .map(|(y, _)| *y)
        .collect();
    (pairs, left, right)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn roots_of_factored_quadratic() {
        let p = Polynomial::from_real(&[-0.25, 0.0, 1.0]);
        let r = sorted(p.roots().unwrap());
        assert!((r[0] - c(-0.5, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn monomial_roots_are_exact_zeros() {
        let r = Polynomial::monomial(c(1.0, 0.0), 3).roots().unwrap();
        assert_eq!(r, vec![c(0.0, 0.0); 3]);
    }

    #[test]
    fn zero_polynomial_has_no_roots() {
        assert_eq!(Polynomial::zero().roots(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn random_constant_quadratic_residual() {
        for k in 0..20 {
            let cc = c(0.37 * k as f64 - 2.0, 0.11 * (k * k) as f64 % 1.7);
            let p = Polynomial::new(vec![cc, -c(0.8, 0.1), c(1.0, 0.0)]);
            for r in p.roots().unwrap() {
                assert!(p.eval(r).norm() < 1e-9, "residual at {r}");
            }
        }
    }

    #[test]
    fn triple_root_is_grouped() {
        let p = Polynomial::from_roots(c(1.0, 0.0), &[c(0.5, 0.2); 3]);
        let r = p.roots().unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|x| *x == r[0]));
        assert!((r[0] - c(0.5, 0.2)).norm() < 1e-8);
    }

    #[test]
    fn deflate_removes_root() {
        let p = Polynomial::from_roots(c(2.0, 0.0), &[c(0.5, 0.0), c(-1.0, 1.0)]);
        let q = p.deflate(c(0.5, 0.0));
        let expected = Polynomial::from_roots(c(2.0, 0.0), &[c(-1.0, 1.0)]);
        for (a, b) in q.coeffs().iter().zip(expected.coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn subtraction_cancels_exactly() {
        let a = Polynomial::from_real(&[0.1, 0.2, 0.3]);
        let b = &(&a * &Polynomial::from_real(&[1.0, 1.0])) - &(&a * &Polynomial::from_real(&[1.0, 1.0]));
        assert!(b.is_zero());
    }
}
