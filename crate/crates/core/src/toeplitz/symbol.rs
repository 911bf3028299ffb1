use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::boundary::{AnalyticFn, BoundaryGrid};
use crate::error::{Error, Result};
use crate::rational::RationalFn;

/// One entry of a matrix symbol.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolEntry {
    Rational(RationalFn),
    Grid(BoundaryGrid),
}

impl From<RationalFn> for SymbolEntry {
    fn from(f: RationalFn) -> Self {
        SymbolEntry::Rational(f)
    }
}

impl From<BoundaryGrid> for SymbolEntry {
    fn from(g: BoundaryGrid) -> Self {
        SymbolEntry::Grid(g)
    }
}

impl SymbolEntry {
    fn to_grid(&self, n: usize) -> Result<BoundaryGrid> {
        match self {
            SymbolEntry::Rational(f) => BoundaryGrid::sample_rational(f, n),
            SymbolEntry::Grid(g) if g.n() == n => Ok(g.clone()),
            SymbolEntry::Grid(g) => Err(Error::GridMismatch(g.n(), n)),
        }
    }

    pub fn as_rational(&self) -> Option<&RationalFn> {
        match self {
            SymbolEntry::Rational(f) => Some(f),
            SymbolEntry::Grid(_) => None,
        }
    }
}

/// `n x n` symbol on the unit circle, stored row-major with every entry
/// also sampled on a common grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSymbol {
    n: usize,
    entries: Vec<SymbolEntry>,
    grids: Vec<BoundaryGrid>,
    essential_sup: f64,
}

impl MatrixSymbol {
    pub fn new(n: usize, entries: Vec<SymbolEntry>, grid_size: usize) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n}x{n} symbol",
                entries.len()
            )));
        }
        let grids = entries
            .iter()
            .map(|e| e.to_grid(grid_size))
            .collect::<Result<Vec<_>>>()?;
        let essential_sup = grids.iter().map(BoundaryGrid::sup_norm).fold(0.0, f64::max);
        if !essential_sup.is_finite() {
            return Err(Error::NotHardy("symbol is unbounded on the grid".into()));
        }
        Ok(MatrixSymbol { n, entries, grids, essential_sup })
    }

    pub fn from_rational_rows(rows: Vec<Vec<RationalFn>>, grid_size: usize) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("symbol rows must form a square".into()));
        }
        Self::new(n, rows.into_iter().flatten().map(SymbolEntry::from).collect(), grid_size)
    }

    pub fn from_grids(n: usize, grids: Vec<BoundaryGrid>) -> Result<Self> {
        let size = grids.first().map(BoundaryGrid::n).unwrap_or(0);
        Self::new(n, grids.into_iter().map(SymbolEntry::from).collect(), size)
    }

    pub fn scalar(entry: impl Into<SymbolEntry>, grid_size: usize) -> Result<Self> {
        Self::new(1, vec![entry.into()], grid_size)
    }

    pub fn diag(entries: Vec<RationalFn>, grid_size: usize) -> Result<Self> {
        let n = entries.len();
        let mut all = vec![SymbolEntry::Rational(RationalFn::zero()); n * n];
        for (i, e) in entries.into_iter().enumerate() {
            all[i * n + i] = SymbolEntry::Rational(e);
        }
        Self::new(n, all, grid_size)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn grid_size(&self) -> usize {
        self.grids[0].n()
    }

    pub fn entry(&self, i: usize, j: usize) -> &SymbolEntry {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[SymbolEntry] {
        &self.entries
    }

    pub fn grid(&self, i: usize, j: usize) -> &BoundaryGrid {
        &self.grids[i * self.n + j]
    }

    /// Largest entry modulus over the grid.
    pub fn essential_sup(&self) -> f64 {
        self.essential_sup
    }

    pub fn is_rational(&self) -> bool {
        self.entries.iter().all(|e| e.as_rational().is_some())
    }

    /// `G f` pointwise on the grid.
    pub fn apply(&self, f: &[BoundaryGrid]) -> Result<Vec<BoundaryGrid>> {
        if f.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for a {}x{} symbol",
                f.len(),
                self.n,
                self.n
            )));
        }
        let size = self.grid_size();
        if let Some(g) = f.iter().find(|g| g.n() != size) {
            return Err(Error::GridMismatch(g.n(), size));
        }
        (0..self.n)
            .map(|i| {
                let mut acc = vec![Complex64::new(0.0, 0.0); size];
                for (j, fj) in f.iter().enumerate() {
                    for ((a, s), v) in acc.iter_mut().zip(self.grid(i, j).samples()).zip(fj.samples()) {
                        *a += s * v;
                    }
                }
                BoundaryGrid::from_samples(acc)
            })
            .collect()
    }

    pub fn apply_fns(&self, f: &[AnalyticFn]) -> Result<Vec<BoundaryGrid>> {
        let grids = f
            .iter()
            .map(|x| x.to_grid(self.grid_size()))
            .collect::<Result<Vec<_>>>()?;
        self.apply(&grids)
    }

    /// Pointwise matrix at grid index `k`.
    pub fn matrix_at(&self, k: usize) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.grid(i, j).samples()[k])
    }

    fn from_pointwise(n: usize, size: usize, f: impl Fn(usize) -> DMatrix<Complex64>) -> Result<Self> {
        let mut samples = vec![vec![Complex64::new(0.0, 0.0); size]; n * n];
        for k in 0..size {
            let m = f(k);
            for i in 0..n {
                for j in 0..n {
                    samples[i * n + j][k] = m[(i, j)];
                }
            }
        }
        let grids = samples
            .into_iter()
            .map(BoundaryGrid::from_samples)
            .collect::<Result<Vec<_>>>()?;
        Self::from_grids(n, grids)
    }

    /// Pointwise product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch("symbol sizes differ".into()));
        }
        if self.grid_size() != other.grid_size() {
            return Err(Error::GridMismatch(self.grid_size(), other.grid_size()));
        }
        Self::from_pointwise(self.n, self.grid_size(), |k| self.matrix_at(k) * other.matrix_at(k))
    }

    /// Pointwise conjugate transpose.
    pub fn adjoint(&self) -> Result<Self> {
        Self::from_pointwise(self.n, self.grid_size(), |k| self.matrix_at(k).adjoint())
    }

    /// Pointwise determinant.
    pub fn det_grid(&self) -> BoundaryGrid {
        let samples = (0..self.grid_size()).map(|k| self.matrix_at(k).determinant()).collect();
        BoundaryGrid::from_samples(samples).expect("grid size already validated")
    }

    /// Symbol with row `i` multiplied pointwise by `factor`.
    pub fn scale_row(&self, i: usize, factor: &BoundaryGrid) -> Result<Self> {
        let mut grids = self.grids.clone();
        for j in 0..self.n {
            grids[i * self.n + j] = self.grid(i, j).zip_with(factor, |a, b| a * b)?;
        }
        Self::from_grids(self.n, grids)
    }

    /// Symbol with columns reordered: column `j` of the result is column
    /// `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        let entries = (0..n * n).map(|idx| self.entries[(idx / n) * n + perm[idx % n]].clone()).collect();
        Self::new(n, entries, self.grid_size())
    }

    /// Largest pointwise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.grids
            .iter()
            .zip(&other.grids)
            .map(|(a, b)| a.max_abs_diff(b))
            .try_fold(0.0, |acc: f64, d| d.map(|d| acc.max(d)))
    }
}
