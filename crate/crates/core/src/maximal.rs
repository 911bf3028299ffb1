//! Maximal functions: deciding whether a Toeplitz kernel is the minimal
//! kernel of one of its elements, and verifying the constructions that
//! produce such elements.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::boundary::{outer_from_modulus, AnalyticFn, BoundaryGrid};
use crate::error::{Error, Result};
use crate::hardy::{classify_and_factor, Cyclicity, FiniteBlaschke};
use crate::minimal::{conjugate_cofactor, premain_verify};
use crate::rational::RationalFn;
use crate::toeplitz::{
    build_truncated, coefficient_grids, kernel_basis, kernel_dim_at_zero, membership_residual,
    membership_residual_fns, shift_invariance_test, KernelBasis, MatrixSymbol,
};

const MEMBER_TOL: f64 = 1e-6;
const LOOSE_TOL: f64 = 1e-5;
const ANALYTIC_TOL: f64 = 1e-8;
const NULL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MaximalityStatus {
    HasMax,
    #[serde(rename = "NoMax_DimAtZero")]
    NoMaxDimAtZero,
    #[serde(rename = "NoMax_ShiftInvariant")]
    NoMaxShiftInvariant,
    Inconclusive,
}

/// Finite-truncation evidence behind a verdict.
#[derive(Clone, Debug, Serialize)]
pub struct Evidence {
    pub truncation: usize,
    pub kernel_dim: usize,
    pub gap: f64,
    /// Smallest singular values, ascending.
    pub trailing_singular_values: Vec<f64>,
    pub kernel_residuals: Vec<f64>,
    pub shift_invariant: Option<bool>,
    pub witness_residual: Option<f64>,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct MaximalityVerdict {
    pub status: MaximalityStatus,
    pub dim_at_zero: usize,
    /// Boundary values of the maximal function when one was found.
    pub witness: Option<Vec<BoundaryGrid>>,
    pub evidence: Evidence,
}

fn evidence(b: &KernelBasis, k: usize) -> Evidence {
    let sv = b.singular_values();
    Evidence {
        truncation: k,
        kernel_dim: b.dim(),
        gap: b.gap(),
        trailing_singular_values: sv.iter().rev().take(b.dim() + 2).copied().collect(),
        kernel_residuals: b.residuals().to_vec(),
        shift_invariant: None,
        witness_residual: None,
        note: "finite-truncation evidence".into(),
    }
}

/// Orthonormal basis of the null space of `a` (`rows x cols`), as columns.
fn null_space(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let cols = a.ncols();
    let mut padded = DMatrix::zeros(a.nrows().max(cols), cols);
    padded.rows_mut(0, a.nrows()).copy_from(a);
    let svd = padded.svd(false, true);
    let v = svd.v_t.expect("requested right singular vectors").adjoint();
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max).max(1.0);
    let idx: Vec<usize> = (0..cols)
        .filter(|&i| svd.singular_values[i] <= NULL_TOL * smax)
        .collect();
    DMatrix::from_fn(cols, idx.len(), |r, c| v[(r, idx[c])])
}

/// The unit kernel element orthogonal to the backward shifts of the
/// kernel elements vanishing at 0. For a kernel `W_1 K_Φ` this is the
/// direction of `W_1 Φ conj(z)`.
fn witness_vector(b: &KernelBasis) -> Option<DVector<Complex64>> {
    let n = b.components();
    let v = b.vectors();
    let at_zero = v.rows(0, n).into_owned();
    let vanishing = v * null_space(&at_zero);
    let len = v.nrows();
    let shifted = DMatrix::from_fn(len, vanishing.ncols(), |r, c| {
        if r + n < len {
            vanishing[(r + n, c)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let coupling = shifted.adjoint() * v;
    let (cols, dir) = if coupling.nrows() == 0 {
        (DMatrix::identity(b.dim(), b.dim()), 0)
    } else {
        let mut padded = DMatrix::zeros(coupling.nrows().max(b.dim()), b.dim());
        padded.rows_mut(0, coupling.nrows()).copy_from(&coupling);
        let svd = padded.svd(false, true);
        let vt = svd.v_t?.adjoint();
        let min = (0..b.dim()).min_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]))?;
        (vt, min)
    };
    let w = v * cols.column(dir);
    let norm = w.norm();
    (norm > 0.0).then(|| w / Complex64::new(norm, 0.0))
}

/// Decides at truncation `k` whether `ker T_G` has a maximal function.
pub fn maximality_status(g: &MatrixSymbol, k: usize, tol: f64) -> Result<MaximalityVerdict> {
    let t = build_truncated(g, k)?;
    let b = kernel_basis(&t, tol)?;
    let mut ev = evidence(&b, k);
    let inconclusive = |ev: Evidence, dim| MaximalityVerdict {
        status: MaximalityStatus::Inconclusive,
        dim_at_zero: dim,
        witness: None,
        evidence: ev,
    };
    if b.is_empty() {
        ev.note = "empty kernel at this truncation".into();
        return Ok(inconclusive(ev, 0));
    }
    let dim = kernel_dim_at_zero(&b)?;
    if dim > 1 {
        return Ok(MaximalityVerdict {
            status: MaximalityStatus::NoMaxDimAtZero,
            dim_at_zero: dim,
            witness: None,
            evidence: ev,
        });
    }
    if dim == 0 {
        return Ok(inconclusive(ev, 0));
    }
    let shift = shift_invariance_test(&t, &b)?;
    ev.shift_invariant = Some(shift);
    if shift {
        return Ok(MaximalityVerdict {
            status: MaximalityStatus::NoMaxShiftInvariant,
            dim_at_zero: dim,
            witness: None,
            evidence: ev,
        });
    }
    let Some(w) = witness_vector(&b) else {
        return Ok(inconclusive(ev, dim));
    };
    let grids = coefficient_grids(w.as_slice(), g.dim(), g.grid_size())?;
    let residual = membership_residual(g, &grids)?;
    ev.witness_residual = Some(residual);
    if residual >= MEMBER_TOL {
        return Ok(inconclusive(ev, dim));
    }
    Ok(MaximalityVerdict {
        status: MaximalityStatus::HasMax,
        dim_at_zero: dim,
        witness: Some(grids),
        evidence: ev,
    })
}

fn scalar_residual(g: &RationalFn, f: &RationalFn, grid: usize) -> Result<f64> {
    let symbol = MatrixSymbol::scalar(g.clone(), grid)?;
    membership_residual_fns(&symbol, &[AnalyticFn::from(f.clone())])
}

/// Maximal function `f p'^i` of `ker T_g` from a seed `f` with
/// `g f = conj(z p')`.
pub fn scalar_maximal(g: &RationalFn, seed: &RationalFn, grid: usize) -> Result<RationalFn> {
    let r = scalar_residual(g, seed, grid)?;
    if r >= MEMBER_TOL {
        return Err(Error::HypothesisFails(format!("seed is not in the kernel (residual {r:.3e})")));
    }
    let p = conjugate_cofactor(g, seed, grid)?;
    let ph = classify_and_factor(&p).map_err(|_| Error::HypothesisFails("p' vanishes".into()))?;
    let m = seed * &ph.require_inner()?.to_rational();
    if !premain_verify(g, std::slice::from_ref(&m), grid)?.holds {
        return Err(Error::HypothesisFails("cofactor of the result is not outer".into()));
    }
    Ok(m)
}

/// Checks a maximal function `q I conj(z)` of `ker T_g` with `I(0) = 0`:
/// membership, `q K_I ⊆ ker T_g`, and that [`scalar_maximal`] returns it
/// unchanged up to a constant.
pub fn hitt_maximal_verify(g: &RationalFn, q: &RationalFn, inner: &FiniteBlaschke, grid: usize) -> Result<bool> {
    if inner.eval(Complex64::new(0.0, 0.0)).norm() > 1e-12 {
        return Err(Error::InnerNotVanishing);
    }
    let candidate = &(q * &inner.to_rational()) * &RationalFn::z_pow(-1);
    if scalar_residual(g, &candidate, grid)? >= MEMBER_TOL {
        return Ok(false);
    }
    for e in inner.takenaka_basis() {
        if scalar_residual(g, &(q * &e), grid)? >= MEMBER_TOL {
            return Ok(false);
        }
    }
    let m = match scalar_maximal(g, &candidate, grid) {
        Ok(m) => m,
        Err(Error::HypothesisFails(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let ratio = &m / &candidate;
    Ok(ratio.num().degree() == Some(0) && ratio.den().degree() == Some(0))
}

/// Checks `ker T_g = m conj(N⁺) ∩ H^2` on the truncation-`k` kernel: each
/// kernel vector divided by `m` is anti-analytic, and each analytic
/// `m conj(z^j)` is in the kernel.
pub fn verify_maximal_decomp(g: &RationalFn, m: &RationalFn, k: usize, grid: usize) -> Result<bool> {
    let r = scalar_residual(g, m, grid)?;
    if r >= MEMBER_TOL {
        return Err(Error::HypothesisFails(format!("m is not in the kernel (residual {r:.3e})")));
    }
    let symbol = MatrixSymbol::scalar(g.clone(), grid)?;
    let b = kernel_basis(&build_truncated(&symbol, k)?, 1e-8)?;
    let mg = BoundaryGrid::sample_rational(m, grid)?;
    for j in 0..b.dim() {
        let v = &b.grids(j, grid)?[0];
        let quotient = v.div(&mg)?.conj();
        if quotient.relative_negative_mass() >= LOOSE_TOL {
            return Ok(false);
        }
    }
    for j in 0..=8 {
        let candidate = mg.map_with_point(|z, v| v * z.conj().powi(j));
        if candidate.relative_negative_mass() > ANALYTIC_TOL {
            continue;
        }
        if membership_residual(&symbol, &[candidate])? >= MEMBER_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `W column_i(Φ conj(z))` for `i = 1..r`: a maximal tuple for the kernel
/// `W K_Φ`. `W` is `n x r`, `Φ` is `r x r` and vanishes at 0.
pub fn maximal_pair(w: &[Vec<RationalFn>], phi: &[Vec<RationalFn>], grid: usize) -> Result<Vec<Vec<RationalFn>>> {
    let r = phi.len();
    if phi.iter().any(|row| row.len() != r) || w.iter().any(|row| row.len() != r) {
        return Err(Error::DimensionMismatch("W must be n x r and Φ r x r".into()));
    }
    let origin = Complex64::new(0.0, 0.0);
    for f in phi.iter().flatten() {
        if f.eval(origin).map(|v| v.norm() > 1e-12).unwrap_or(true) {
            return Err(Error::NotInnerVanishing);
        }
    }
    let wg = w
        .iter()
        .map(|row| row.iter().map(|f| BoundaryGrid::sample_rational(f, grid)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for a in 0..r {
        for b in 0..r {
            let target = if a == b { 1.0 } else { 0.0 };
            for k in 0..grid {
                let s: Complex64 = wg.iter().map(|row| row[a].samples()[k].conj() * row[b].samples()[k]).sum();
                worst = worst.max((s - target).norm());
            }
        }
    }
    if worst > 1e-8 {
        return Err(Error::NotIsometric(worst));
    }
    let zbar = RationalFn::z_pow(-1);
    let mut out = Vec::with_capacity(r);
    for i in 0..r {
        let mut vector = Vec::with_capacity(w.len());
        for row in w {
            let entry = (0..r).fold(RationalFn::zero(), |acc, j| &acc + &(&row[j] * &(&phi[j][i] * &zbar)));
            let samples = BoundaryGrid::sample_rational(&entry, grid)?;
            if samples.relative_negative_mass() > ANALYTIC_TOL {
                return Err(Error::NotInnerVanishing);
            }
            vector.push(entry);
        }
        out.push(vector);
    }
    Ok(out)
}

/// Divides the first row of `G` by `conj(q)` with `q` outer and
/// `|q| = |det G|`, making the determinant unimodular without changing
/// the kernel.
pub fn unimodular_normalize(g: &MatrixSymbol) -> Result<MatrixSymbol> {
    let det = g.det_grid();
    let min = det.samples().iter().map(|s| s.norm()).fold(f64::INFINITY, f64::min);
    if min <= 1e-8 {
        return Err(Error::DetNotInvertible(min));
    }
    let q = outer_from_modulus(&det.abs())?;
    let factor = q.boundary().map(|s| s.conj().inv());
    g.scale_row(0, &factor)
}

/// Matrix factors for `G = G_2^* G_1` with `G_1 = G_1^{o'} G_1^{i'}` and
/// `G_2 = G_2^i G_2^o`.
#[derive(Clone, Debug)]
pub struct DyakonovFactors {
    pub g1_outer: MatrixSymbol,
    pub g1_inner: MatrixSymbol,
    pub g2_inner: MatrixSymbol,
    pub g2_outer: MatrixSymbol,
}

fn inner_defect(m: &MatrixSymbol) -> Result<f64> {
    let id = m.adjoint()?.mul(m)?;
    let n = m.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            for s in id.grid(i, j).samples() {
                worst = worst.max((s - target).norm());
            }
        }
    }
    Ok(worst)
}

fn matrix_inverse(m: &MatrixSymbol) -> Result<MatrixSymbol> {
    let n = m.dim();
    let mut grids = vec![vec![Complex64::new(0.0, 0.0); m.grid_size()]; n * n];
    for k in 0..m.grid_size() {
        let inv = m
            .matrix_at(k)
            .try_inverse()
            .ok_or_else(|| Error::DetNotInvertible(0.0))?;
        for i in 0..n {
            for j in 0..n {
                grids[i * n + j][k] = inv[(i, j)];
            }
        }
    }
    MatrixSymbol::from_grids(n, grids.into_iter().map(BoundaryGrid::from_samples).collect::<Result<_>>()?)
}

fn apply_vec(m: &MatrixSymbol, f: &[BoundaryGrid]) -> Result<Vec<BoundaryGrid>> {
    m.apply(f)
}

/// Verifies `ker T_G = (G_1^{i'})^* ((G_1^{o'})^{-1} K_{G_2^i} ∩ G_1^{i'} H^2)`
/// at truncation `k` in both directions.
pub fn dyakonov_verify(g: &MatrixSymbol, f: &DyakonovFactors, k: usize) -> Result<bool> {
    let g1 = f.g1_outer.mul(&f.g1_inner)?;
    let g2 = f.g2_inner.mul(&f.g2_outer)?;
    let rebuilt = g2.adjoint()?.mul(&g1)?;
    let mismatch = g.max_abs_diff(&rebuilt)?;
    if mismatch >= 1e-6 {
        return Err(Error::FactorizationMismatch(mismatch));
    }
    for inner in [&f.g1_inner, &f.g2_inner] {
        let d = inner_defect(inner)?;
        if d >= 1e-6 {
            return Err(Error::NotInner(d));
        }
    }
    let model = f.g2_inner.adjoint()?;
    let b = kernel_basis(&build_truncated(g, k)?, 1e-8)?;
    for j in 0..b.dim() {
        let v = b.grids(j, g.grid_size())?;
        let image = apply_vec(&g1, &v)?;
        if membership_residual(&model, &image)? >= LOOSE_TOL {
            return Ok(false);
        }
    }
    let outer_inv = matrix_inverse(&f.g1_outer)?;
    let inner_adj = f.g1_inner.adjoint()?;
    let model_basis = kernel_basis(&build_truncated(&model, k)?, 1e-8)?;
    for j in 0..model_basis.dim() {
        let x = model_basis.grids(j, g.grid_size())?;
        let candidate = apply_vec(&inner_adj, &apply_vec(&outer_inv, &x)?)?;
        let total: f64 = candidate.iter().map(|c| c.l2_norm().powi(2)).sum::<f64>().sqrt();
        let neg: f64 = candidate.iter().map(|c| c.negative_mass().powi(2)).sum::<f64>().sqrt();
        if total == 0.0 || neg > ANALYTIC_TOL * total {
            continue;
        }
        if membership_residual(g, &candidate)? >= LOOSE_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Finite-depth evidence that `W_1 H^2` is the minimal kernel of
/// `(W_1, W_1 f)` for cyclic `f`: every symbol in `symbols` whose kernel
/// holds both `W_1` and `W_1 f` also holds `W_1 B^j f` for `j <= depth`.
pub fn w1h2_kmin_verify(w1: &[RationalFn; 2], f: &AnalyticFn, symbols: &[MatrixSymbol], depth: usize, grid: usize) -> Result<bool> {
    let w = [BoundaryGrid::sample_rational(&w1[0], grid)?, BoundaryGrid::sample_rational(&w1[1], grid)?];
    let defect = w[0]
        .samples()
        .iter()
        .zip(w[1].samples())
        .map(|(a, b)| (a.norm_sqr() + b.norm_sqr() - 1.0).abs())
        .fold(0.0, f64::max);
    if defect > 1e-8 {
        return Err(Error::NotIsometric(defect));
    }
    if f.cyclicity() != Cyclicity::CyclicDeclared {
        return Err(Error::NotCyclicFlag);
    }
    let times_w = |x: &BoundaryGrid| -> Result<Vec<BoundaryGrid>> { Ok(vec![&w[0] * x, &w[1] * x]) };
    let one = BoundaryGrid::constant(grid, Complex64::new(1.0, 0.0))?;
    for h in symbols {
        let contains = membership_residual(h, &times_w(&one)?)? < LOOSE_TOL
            && membership_residual(h, &times_w(&f.to_grid(grid)?)?)? < LOOSE_TOL;
        if !contains {
            continue;
        }
        let mut current = f.clone();
        for _ in 0..=depth {
            if membership_residual(h, &times_w(&current.to_grid(grid)?)?)? >= LOOSE_TOL {
                return Ok(false);
            }
            current = current.backward_shift()?;
        }
    }
    Ok(true)
}
