//! Truncated block-Toeplitz matrices and numerical kernels.
//!
//! A vector of `n` polynomials of degree `< K` is stored as the
//! coefficient array with index `freq * n + component`.

mod symbol;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

pub use symbol::{MatrixSymbol, SymbolEntry};

use crate::boundary::{AnalyticFn, BoundaryGrid};
use crate::error::{Error, Result};
use crate::hardy::FiniteBlaschke;
use crate::rational::{region_of, Region};

pub const DEFAULT_TRUNCATION: usize = 256;
pub const DEFAULT_KERNEL_TOL: f64 = 1e-8;
pub const MIN_TRUNCATION: usize = 8;
/// Smallest acceptable ratio between the last retained and first
/// discarded singular value.
pub const MIN_GAP: f64 = 10.0;

const SHIFT_RESIDUAL_TOL: f64 = 1e-6;
const TOP_DEGREE_TOL: f64 = 1e-8;
const RANK_TOL: f64 = 1e-8;

/// The section of `T_G` on polynomials of degree `< K`.
///
/// `matrix` is the square `(nK) x (nK)` section. Kernel extraction uses
/// `augmented`, which keeps output frequencies up to `2K - 1`; the square
/// section alone would admit spurious null vectors whose image is pushed
/// past frequency `K - 1`.
#[derive(Clone, Debug)]
pub struct TruncatedToeplitz {
    symbol: MatrixSymbol,
    order: usize,
    matrix: DMatrix<Complex64>,
    augmented: DMatrix<Complex64>,
}

impl TruncatedToeplitz {
    pub fn symbol(&self) -> &MatrixSymbol {
        &self.symbol
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn augmented(&self) -> &DMatrix<Complex64> {
        &self.augmented
    }

    /// `||T x|| / ||x||` with outputs up to frequency `2K - 1`.
    pub fn relative_residual(&self, x: &DVector<Complex64>) -> f64 {
        let norm = x.norm();
        if norm == 0.0 {
            return 0.0;
        }
        (&self.augmented * x).norm() / norm
    }
}

pub fn build_truncated(g: &MatrixSymbol, k: usize) -> Result<TruncatedToeplitz> {
    if k < MIN_TRUNCATION || k > g.grid_size() / 4 {
        return Err(Error::TruncationTooSmall(format!(
            "truncation {k} outside {MIN_TRUNCATION}..={}",
            g.grid_size() / 4
        )));
    }
    let n = g.dim();
    let mut augmented = DMatrix::<Complex64>::zeros(2 * k * n, k * n);
    for a in 0..n {
        for b in 0..n {
            let grid = g.grid(a, b);
            for j in 0..2 * k {
                for col in 0..k {
                    augmented[(j * n + a, col * n + b)] = grid.coeff(j as i64 - col as i64);
                }
            }
        }
    }
    let matrix = augmented.rows(0, k * n).into_owned();
    Ok(TruncatedToeplitz { symbol: g.clone(), order: k, matrix, augmented })
}

/// Orthonormal numerical kernel of a truncation.
#[derive(Clone, Debug, Serialize)]
pub struct KernelBasis {
    n: usize,
    order: usize,
    #[serde(skip)]
    vectors: DMatrix<Complex64>,
    singular_values: Vec<f64>,
    tol: f64,
    gap: f64,
    residuals: Vec<f64>,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    /// Number of vector components.
    pub fn components(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Basis vectors as columns.
    pub fn vectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    pub fn vector(&self, j: usize) -> DVector<Complex64> {
        self.vectors.column(j).into_owned()
    }

    /// All singular values, descending.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Smallest retained over largest discarded singular value; infinite
    /// when the kernel is exact or empty.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// `||T v||` for each basis vector.
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    /// Coefficient of `z^freq` in component `comp` of vector `j`.
    pub fn coeff(&self, j: usize, freq: usize, comp: usize) -> Complex64 {
        self.vectors[(freq * self.n + comp, j)]
    }

    pub fn value_at_zero(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|c| self.coeff(j, 0, c)).collect()
    }

    pub fn eval(&self, j: usize, z: Complex64) -> Vec<Complex64> {
        (0..self.n)
            .map(|c| {
                (0..self.order)
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, f| acc * z + self.coeff(j, f, c))
            })
            .collect()
    }

    /// Boundary values of vector `j` on an `size`-point grid.
    pub fn grids(&self, j: usize, size: usize) -> Result<Vec<BoundaryGrid>> {
        coefficient_grids(self.vectors.column(j).as_slice(), self.n, size)
    }
}

/// Splits a coefficient array into per-component grids.
pub fn coefficient_grids(x: &[Complex64], n: usize, size: usize) -> Result<Vec<BoundaryGrid>> {
    (0..n)
        .map(|c| {
            let coeffs: Vec<Complex64> = x.iter().skip(c).step_by(n).copied().collect();
            BoundaryGrid::from_laurent(size, 0, &coeffs)
        })
        .collect()
}

/// Coefficient array of analytic grids truncated to degree `< k`.
pub fn grids_to_coefficients(f: &[BoundaryGrid], k: usize) -> DVector<Complex64> {
    let n = f.len();
    DVector::from_fn(n * k, |idx, _| f[idx % n].coeff((idx / n) as i64))
}

/// Singular values (descending) and matching right singular vectors.
fn svd_desc(a: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let cols = a.ncols();
    let square = if a.nrows() > cols {
        a.clone().qr().r()
    } else {
        let mut padded = DMatrix::zeros(cols, cols);
        padded.rows_mut(0, a.nrows()).copy_from(a);
        padded
    };
    let svd = square.svd(false, true);
    let v = svd.v_t.expect("requested right singular vectors").adjoint();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let vectors = DMatrix::from_fn(cols, cols, |r, c| v[(r, order[c])]);
    (values, vectors)
}

/// Right singular vectors with `σ <= tol * σ_max`.
pub fn kernel_basis(t: &TruncatedToeplitz, tol: f64) -> Result<KernelBasis> {
    let (values, v) = svd_desc(&t.augmented);
    let smax = values.first().copied().unwrap_or(0.0);
    let rank = values.iter().take_while(|&&s| s > tol * smax).count();
    let gap = match values.get(rank) {
        Some(&s) if rank > 0 && s > 0.0 => values[rank - 1] / s,
        _ => f64::INFINITY,
    };
    if gap < MIN_GAP {
        return Err(Error::IllConditioned { gap });
    }
    let vectors = v.columns(rank, v.ncols() - rank).into_owned();
    let residuals = vectors
        .column_iter()
        .map(|c| (&t.augmented * c).norm())
        .collect();
    Ok(KernelBasis {
        n: t.symbol.dim(),
        order: t.order,
        vectors,
        singular_values: values,
        tol,
        gap,
        residuals,
    })
}

/// `||P(G f)||_2 / ||f||_2` on the symbol's grid.
pub fn membership_residual(g: &MatrixSymbol, f: &[BoundaryGrid]) -> Result<f64> {
    let image = g.apply(f)?;
    let norm: f64 = f.iter().map(|x| x.l2_norm().powi(2)).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let analytic: f64 = image.iter().map(|x| x.nonnegative_mass().powi(2)).sum::<f64>().sqrt();
    Ok(analytic / norm)
}

pub fn membership_residual_fns(g: &MatrixSymbol, f: &[AnalyticFn]) -> Result<f64> {
    let grids = f
        .iter()
        .map(|x| x.to_grid(g.grid_size()))
        .collect::<Result<Vec<_>>>()?;
    membership_residual(g, &grids)
}

/// Rank of the `n x r` matrix of kernel values at the origin.
pub fn kernel_dim_at_zero(b: &KernelBasis) -> Result<usize> {
    if b.is_empty() {
        return Err(Error::EmptyKernel);
    }
    let values = DMatrix::from_fn(b.n, b.dim(), |c, j| b.coeff(j, 0, c));
    let (sv, _) = svd_desc(&values.adjoint());
    Ok(sv.iter().filter(|&&s| s > RANK_TOL).count())
}

/// Kernel elements whose degree-`(K-1)` coefficients vanish, as columns.
fn low_degree_part(b: &KernelBasis) -> DMatrix<Complex64> {
    let r = b.dim();
    let top = b.vectors.rows((b.order - 1) * b.n, b.n).into_owned();
    let (sv, v) = svd_desc(&top);
    let null: Vec<usize> = (0..r).filter(|&i| sv.get(i).is_none_or(|&s| s <= TOP_DEGREE_TOL)).collect();
    let mut out = DMatrix::zeros(b.vectors.nrows(), null.len());
    for (c, &i) in null.iter().enumerate() {
        out.set_column(c, &(&b.vectors * v.column(i)));
    }
    out
}

/// Multiplication by `z` on a coefficient array.
fn shift_coefficients(x: &DVector<Complex64>, n: usize) -> DVector<Complex64> {
    let len = x.len();
    DVector::from_fn(len, |i, _| if i < n { Complex64::new(0.0, 0.0) } else { x[i - n] })
}

/// Finite-truncation evidence of `z ker T_G ⊆ ker T_G`: every kernel
/// element of degree `< K - 1`, multiplied by `z`, stays in the kernel.
/// False when no such element exists.
pub fn shift_invariance_test(t: &TruncatedToeplitz, b: &KernelBasis) -> Result<bool> {
    if b.is_empty() {
        return Err(Error::EmptyKernel);
    }
    let low = low_degree_part(b);
    if low.ncols() == 0 {
        return Ok(false);
    }
    Ok(low.column_iter().all(|c| {
        let shifted = shift_coefficients(&c.into_owned(), b.n);
        t.relative_residual(&shifted) < SHIFT_RESIDUAL_TOL
    }))
}

/// Membership residual of `conj(η) f`, which must again be analytic.
pub fn near_invariance_check(g: &MatrixSymbol, f: &[AnalyticFn], eta: &FiniteBlaschke) -> Result<f64> {
    let before = membership_residual_fns(g, f)?;
    if before >= SHIFT_RESIDUAL_TOL {
        return Err(Error::HypothesisFails(format!("f is not in the kernel (residual {before:.3e})")));
    }
    let size = g.grid_size();
    let eta_r = eta.to_rational();
    let mut divided = Vec::with_capacity(f.len());
    for x in f {
        let grid = match x {
            AnalyticFn::Rational(r) => {
                let q = r / &eta_r;
                if q.poles().iter().any(|p| region_of(*p) != Region::Outside) {
                    return Err(Error::NotDivisible);
                }
                BoundaryGrid::sample_rational(&q, size)?
            }
            AnalyticFn::Sampled(_) => {
                let q = x.to_grid(size)?.map_with_point(|z, v| v * eta.eval(z).conj());
                if q.relative_negative_mass() > 1e-8 {
                    return Err(Error::NotDivisible);
                }
                q
            }
        };
        divided.push(grid);
    }
    membership_residual(g, &divided)
}

/// Residual of every basis vector under `h`.
pub fn basis_residuals(b: &KernelBasis, h: &MatrixSymbol) -> Result<Vec<f64>> {
    if b.n != h.dim() {
        return Err(Error::DimensionMismatch("kernel and symbol sizes differ".into()));
    }
    (0..b.dim())
        .map(|j| membership_residual(h, &b.grids(j, h.grid_size())?))
        .collect()
}

/// `ker T_G ⊆ ker T_H` on the truncation-`k` kernel of `G`.
pub fn kernel_inclusion_check(g: &MatrixSymbol, h: &MatrixSymbol, k: usize, tol: f64) -> Result<bool> {
    let b = kernel_basis(&build_truncated(g, k)?, DEFAULT_KERNEL_TOL)?;
    basis_included(&b, h, tol)
}

pub fn basis_included(b: &KernelBasis, h: &MatrixSymbol, tol: f64) -> Result<bool> {
    if b.is_empty() {
        return Err(Error::EmptyKernel);
    }
    Ok(basis_residuals(b, h)?.iter().all(|&r| r < tol))
}

/// Kernel dimensions at truncations `k` and `2k`.
pub fn kernel_dims_doubling(g: &MatrixSymbol, k: usize, tol: f64) -> Result<(usize, usize)> {
    let a = kernel_basis(&build_truncated(g, k)?, tol)?.dim();
    let b = kernel_basis(&build_truncated(g, 2 * k)?, tol)?.dim();
    Ok((a, b))
}
