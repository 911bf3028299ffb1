//! Symbols whose Toeplitz kernels are the minimal kernels of given
//! functions: single vectors, scalar pairs and pairs of 2-vectors.

use num_complex::Complex64;
use serde::Serialize;

use crate::boundary::{lemma21_outer, outer_from_fn, outer_from_modulus, sum_modulus_outer, AnalyticFn, BoundaryGrid};
use crate::error::{Error, Result};
use crate::hardy::{classify_and_factor, minimal_theta_rational, Cyclicity, FiniteBlaschke, HardyClass, HardyFunction};
use crate::rational::RationalFn;
use crate::toeplitz::{membership_residual_fns, MatrixSymbol, SymbolEntry};

/// Input functions must reach this membership residual under the symbol.
pub const CONTAINMENT_TOL: f64 = 1e-6;

/// Relative tolerance for deciding `det M ≡ 0`.
const DET_ZERO_REL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KminKind {
    Symbol,
    /// The cyclic branch fired: the scalar minimal kernel is all of `H^2`.
    /// For vector pairs the symbol is still returned, with a zero bottom row.
    WholeSpace,
}

/// Which construction produced a [`KminResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `κ_min(φ)` for one vector.
    SingleVector,
    /// Scalar pair, non-cyclic quotient: `conj(f°) conj(θ) / f°`.
    ScalarPairTheta,
    /// Scalar pair, cyclic quotient.
    ScalarPairCyclic,
    /// Vector pair with `det M ≢ 0`.
    VectorPairInvertible,
    /// Vector pair, `det M ≡ 0`, non-cyclic: triangular symbol.
    VectorPairTriangular,
    /// Vector pair, `det M ≡ 0`, cyclic: zero bottom row.
    VectorPairCyclic,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::SingleVector => "single_vector",
            Branch::ScalarPairTheta => "scalar_pair_theta",
            Branch::ScalarPairCyclic => "scalar_pair_cyclic",
            Branch::VectorPairInvertible => "vector_pair_invertible",
            Branch::VectorPairTriangular => "vector_pair_triangular",
            Branch::VectorPairCyclic => "vector_pair_cyclic",
        }
    }
}

#[derive(Clone, Debug)]
pub struct KminResult {
    pub kind: KminKind,
    pub symbol: Option<MatrixSymbol>,
    pub theta: Option<FiniteBlaschke>,
    pub branch: Branch,
    pub warnings: Vec<String>,
    /// Membership residual of each input vector, in input order.
    pub residuals: Vec<f64>,
}

impl KminResult {
    pub fn contains_inputs(&self) -> bool {
        self.residuals.iter().all(|&r| r < CONTAINMENT_TOL)
    }
}

fn hardy_or_zero(f: &RationalFn) -> Result<Option<HardyFunction>> {
    if f.is_zero() {
        return Ok(None);
    }
    let h = classify_and_factor(f)?;
    if h.class() != HardyClass::HpAll {
        return Err(Error::NotHardy(format!("{f:?} has poles in the closed disc")));
    }
    Ok(Some(h))
}

fn check_hardy(f: &AnalyticFn) -> Result<()> {
    if let AnalyticFn::Rational(r) = f {
        hardy_or_zero(r)?;
    }
    Ok(())
}

/// `conj(φ) conj(z) / φ°` as a rational function.
fn scalar_minimal_entry(h: &HardyFunction) -> Result<RationalFn> {
    let outer = h.require_outer()?;
    let conj = h.value().boundary_conjugate()?;
    Ok(&(&conj * &RationalFn::z_pow(-1)) / outer)
}

/// Sampled `φ_i / u`.
fn over_outer(f: &RationalFn, u: &BoundaryGrid) -> Result<BoundaryGrid> {
    BoundaryGrid::sample_rational(f, u.n())?.div(u)
}

/// Symbol whose Toeplitz kernel is `κ_min(φ)`.
///
/// Row 0 holds `conj(φ_p) conj(z) / φ_p°` in column `p`. Each other
/// coordinate `i` gets the row `(i == 0 ? p : i)` with `φ_p / u` in
/// column `i` and `-φ_i / u` in column `p`, where
/// `|u| = |φ_1| + ... + |φ_n| + 1`.
pub fn theorem23_symbol(phis: &[RationalFn], pivot: usize, grid: usize) -> Result<MatrixSymbol> {
    let n = phis.len();
    if pivot >= n {
        return Err(Error::DimensionMismatch(format!("pivot {pivot} for a vector of length {n}")));
    }
    let hardy = phis.iter().map(hardy_or_zero).collect::<Result<Vec<_>>>()?;
    let pivot_fn = hardy[pivot].as_ref().ok_or(Error::ZeroPivot)?;
    let mut entries = vec![SymbolEntry::Rational(RationalFn::zero()); n * n];
    entries[pivot] = SymbolEntry::Rational(scalar_minimal_entry(pivot_fn)?);
    if n > 1 {
        let present: Vec<HardyFunction> = hardy.iter().flatten().cloned().collect();
        let u = lemma21_outer(&present, grid)?.into_boundary();
        let lead = over_outer(&phis[pivot], &u)?;
        for (i, phi) in phis.iter().enumerate() {
            if i == pivot {
                continue;
            }
            let row = if i == 0 { pivot } else { i };
            entries[row * n + i] = SymbolEntry::Grid(lead.clone());
            entries[row * n + pivot] = SymbolEntry::Grid(over_outer(phi, &u)?.scale(Complex64::new(-1.0, 0.0)));
        }
    }
    MatrixSymbol::new(n, entries, grid)
}

/// `κ_min(φ)` with the symbol of [`theorem23_symbol`] and the residual of `φ`.
pub fn kmin_vector(phis: &[RationalFn], pivot: usize, grid: usize) -> Result<KminResult> {
    let symbol = theorem23_symbol(phis, pivot, grid)?;
    let inputs: Vec<AnalyticFn> = phis.iter().cloned().map(AnalyticFn::from).collect();
    let residual = membership_residual_fns(&symbol, &inputs)?;
    Ok(KminResult {
        kind: KminKind::Symbol,
        symbol: Some(symbol),
        theta: None,
        branch: Branch::SingleVector,
        warnings: Vec::new(),
        residuals: vec![residual],
    })
}

/// Smallest `θ` with `g / f°` and `f^i` both in `θ*(N⁺)`, as the lcm of
/// their individual minimal thetas.
pub fn pair_theta(f: &HardyFunction, g: &RationalFn) -> Result<FiniteBlaschke> {
    let quotient = g / f.require_outer()?;
    let theta_q = minimal_theta_rational(&quotient).map_err(|e| match e {
        Error::NotSmirnov => Error::QuotientNotSmirnov,
        other => other,
    })?;
    let theta_i = minimal_theta_rational(&f.require_inner()?.to_rational())?;
    Ok(theta_q.lcm(&theta_i))
}

/// `κ_min(f, g)` for scalar `f, g`.
pub fn kmin_pair_scalar(f: &RationalFn, g: &AnalyticFn, grid: usize) -> Result<KminResult> {
    let fh = classify_and_factor(f)?;
    if fh.class() != HardyClass::HpAll {
        return Err(Error::NotHardy("f has poles in the closed disc".into()));
    }
    check_hardy(g)?;
    let whole = |warnings| KminResult {
        kind: KminKind::WholeSpace,
        symbol: None,
        theta: None,
        branch: Branch::ScalarPairCyclic,
        warnings,
        residuals: vec![0.0, 0.0],
    };
    let g_rational = match g {
        AnalyticFn::Rational(r) => r,
        AnalyticFn::Sampled(s) => {
            return match s.cyclicity() {
                Cyclicity::CyclicDeclared => Ok(whole(vec![format!("{} is declared cyclic", s.label())])),
                Cyclicity::Unknown => Err(Error::UndecidedCyclicity(s.label().to_string())),
                Cyclicity::NonCyclic => Err(Error::NeedsRational(format!("non-cyclic {} must be rational", s.label()))),
            }
        }
    };
    let theta = pair_theta(&fh, g_rational)?;
    let outer = fh.require_outer()?;
    let entry = &(&outer.boundary_conjugate()? * &theta.to_rational().boundary_conjugate()?) / outer;
    let symbol = MatrixSymbol::scalar(entry, grid)?;
    let residuals = vec![
        membership_residual_fns(&symbol, &[AnalyticFn::from(f.clone())])?,
        membership_residual_fns(&symbol, std::slice::from_ref(g))?,
    ];
    Ok(KminResult {
        kind: KminKind::Symbol,
        symbol: Some(symbol),
        theta: Some(theta),
        branch: Branch::ScalarPairTheta,
        warnings: Vec::new(),
        residuals,
    })
}

/// Result of extracting `p_j` from `g f_j = conj(z p_j)`.
#[derive(Clone, Debug)]
pub struct PremainReport {
    pub p: Vec<RationalFn>,
    pub inner: Vec<FiniteBlaschke>,
    pub gcd: FiniteBlaschke,
    /// True when the inner parts are coprime, so `κ_min(f_1..f_k) = ker T_g`.
    pub holds: bool,
}

/// `p` with `g f = conj(z p)` on the circle, when `g f` is anti-analytic.
pub fn conjugate_cofactor(g: &RationalFn, f: &RationalFn, grid: usize) -> Result<RationalFn> {
    let gf = g * f;
    let samples = BoundaryGrid::sample_rational(&gf, grid)?;
    let total = samples.l2_norm();
    if total > 0.0 && samples.nonnegative_mass() > 1e-8 * total {
        return Err(Error::HypothesisFails(format!(
            "g f has nonnegative-frequency mass {:.3e}",
            samples.nonnegative_mass() / total
        )));
    }
    let p = &gf.reflect() * &RationalFn::z_pow(-1);
    match hardy_or_zero(&p) {
        Ok(_) => Ok(p),
        Err(_) => Err(Error::HypothesisFails("recovered p is not in H^p".into())),
    }
}

/// Checks that `ker T_g` is the minimal kernel of `f_1..f_k`.
pub fn premain_verify(g: &RationalFn, fs: &[RationalFn], grid: usize) -> Result<PremainReport> {
    let mut p = Vec::with_capacity(fs.len());
    let mut inner = Vec::with_capacity(fs.len());
    for f in fs {
        let pj = conjugate_cofactor(g, f, grid)?;
        let h = hardy_or_zero(&pj)?.ok_or(Error::ZeroInput)?;
        inner.push(h.require_inner()?.clone());
        p.push(pj);
    }
    let gcd = match inner.split_first() {
        Some((first, rest)) => rest.iter().fold(first.with_unit_constant(), |acc, b| acc.gcd(b)),
        None => return Err(Error::ZeroInput),
    };
    Ok(PremainReport { holds: gcd.is_constant(), p, inner, gcd })
}

/// Exact test of `a ≡ b` on cross-multiplied numerators.
fn rational_equal(a: &RationalFn, b: &RationalFn) -> bool {
    let lhs = a.num() * b.den();
    let rhs = b.num() * a.den();
    let scale = lhs.max_abs().max(rhs.max_abs());
    (&lhs - &rhs).max_abs() <= DET_ZERO_REL * scale
}

/// Decides `φ_1 ψ_2 - ψ_1 φ_2 ≡ 0`: exactly for rational data, on the
/// grid otherwise.
fn det_vanishes(phi: &[RationalFn; 2], psi: &[AnalyticFn; 2], grid: usize) -> Result<bool> {
    if let (Some(p1), Some(p2)) = (psi[0].as_rational(), psi[1].as_rational()) {
        return Ok(rational_equal(&(&phi[0] * p2), &(p1 * &phi[1])));
    }
    let f1 = BoundaryGrid::sample_rational(&phi[0], grid)?;
    let f2 = BoundaryGrid::sample_rational(&phi[1], grid)?;
    let g1 = psi[0].to_grid(grid)?;
    let g2 = psi[1].to_grid(grid)?;
    let a = &f1 * &g2;
    let b = &g1 * &f2;
    let diff = (&a - &b).sup_norm();
    let scale = a.sup_norm().max(b.sup_norm());
    Ok(diff <= DET_ZERO_REL * scale)
}

/// `κ_min(φ, ψ)` for `φ, ψ ∈ H^2(D, C^2)`.
pub fn kmin_pair_vector(phi: &[RationalFn; 2], psi: &[AnalyticFn; 2], grid: usize) -> Result<KminResult> {
    for f in phi {
        hardy_or_zero(f)?;
    }
    for f in psi {
        check_hardy(f)?;
    }
    if phi.iter().all(RationalFn::is_zero) {
        return Err(Error::ZeroInput);
    }
    let mut result = if det_vanishes(phi, psi, grid)? {
        if phi[1].is_zero() {
            let swapped_phi = [phi[1].clone(), phi[0].clone()];
            let swapped_psi = [psi[1].clone(), psi[0].clone()];
            let mut r = degenerate_pair(&swapped_phi, &swapped_psi, grid)?;
            r.symbol = r.symbol.map(|s| s.permute_columns(&[1, 0])).transpose()?;
            r.warnings.push("coordinates swapped: first coordinate of phi used as pivot".into());
            r
        } else {
            degenerate_pair(phi, psi, grid)?
        }
    } else {
        invertible_pair(phi, psi, grid)?
    };
    if let Some(symbol) = &result.symbol {
        let phi_fns: Vec<AnalyticFn> = phi.iter().cloned().map(AnalyticFn::from).collect();
        result.residuals = vec![membership_residual_fns(symbol, &phi_fns)?, membership_residual_fns(symbol, psi)?];
    }
    Ok(result)
}

/// `det M ≢ 0`: `(conj(u_1) / conj(u_2)) conj(z) M^{-1}`.
fn invertible_pair(phi: &[RationalFn; 2], psi: &[AnalyticFn; 2], grid: usize) -> Result<KminResult> {
    let mut warnings = Vec::new();
    let (u1, u2) = match (psi[0].as_rational(), psi[1].as_rational()) {
        (Some(p1), Some(p2)) => {
            let det = &(&phi[0] * p2) - &(p1 * &phi[1]);
            let all = [phi[0].clone(), phi[1].clone(), p1.clone(), p2.clone()];
            let u1 = outer_from_fn(grid, |z| det.eval_unchecked(z).norm())?;
            let u2 = outer_from_fn(grid, |z| 1.0 + all.iter().map(|f| f.eval_unchecked(z).norm()).sum::<f64>())?;
            (u1, u2)
        }
        _ => {
            let grids = [
                BoundaryGrid::sample_rational(&phi[0], grid)?,
                BoundaryGrid::sample_rational(&phi[1], grid)?,
                psi[0].to_grid(grid)?,
                psi[1].to_grid(grid)?,
            ];
            let det = &(&grids[0] * &grids[3]) - &(&grids[2] * &grids[1]);
            let u1 = outer_from_modulus(&det.abs())?;
            let u2 = sum_modulus_outer(&grids.iter().collect::<Vec<_>>(), grid)?;
            (u1, u2)
        }
    };
    if u1.has_warning() {
        warnings.push(format!("|det M| clamped at {} of {} grid points", u1.clamped(), grid));
    }
    let f1 = BoundaryGrid::sample_rational(&phi[0], grid)?;
    let f2 = BoundaryGrid::sample_rational(&phi[1], grid)?;
    let g1 = psi[0].to_grid(grid)?;
    let g2 = psi[1].to_grid(grid)?;
    let det = &(&f1 * &g2) - &(&g1 * &f2);
    // conj(z) conj(u_1) / (conj(u_2) det); unimodular times 1/conj(u_2).
    let factor = u1
        .boundary()
        .zip_with(u2.boundary(), |a, b| a.conj() / b.conj())?
        .zip_with(&det, |a, d| a / d)?
        .map_with_point(|z, v| v * z.conj());
    let entries = [&g2, &g1.scale(Complex64::new(-1.0, 0.0)), &f2.scale(Complex64::new(-1.0, 0.0)), &f1]
        .into_iter()
        .map(|e| factor.zip_with(e, |a, b| a * b))
        .collect::<Result<Vec<_>>>()?;
    Ok(KminResult {
        kind: KminKind::Symbol,
        symbol: Some(MatrixSymbol::from_grids(2, entries)?),
        theta: None,
        branch: Branch::VectorPairInvertible,
        warnings,
        residuals: Vec::new(),
    })
}

/// `det M ≡ 0` with `φ_2 ≢ 0`: top row `(φ_2/u, -φ_1/u)`, bottom row
/// `(0, χ)` with `χ` the scalar minimal symbol of `(φ_2, ψ_2)` or zero.
fn degenerate_pair(phi: &[RationalFn; 2], psi: &[AnalyticFn; 2], grid: usize) -> Result<KminResult> {
    if phi[1].is_zero() {
        return Err(Error::ZeroInput);
    }
    let present: Vec<HardyFunction> = phi.iter().filter_map(|f| hardy_or_zero(f).transpose()).collect::<Result<_>>()?;
    let u = lemma21_outer(&present, grid)?.into_boundary();
    let top_left = over_outer(&phi[1], &u)?;
    let top_right = over_outer(&phi[0], &u)?.scale(Complex64::new(-1.0, 0.0));
    let zero = BoundaryGrid::constant(grid, Complex64::new(0.0, 0.0))?;
    let (kind, branch, theta, bottom, warnings) = match psi[1].cyclicity() {
        Cyclicity::Unknown => {
            return Err(Error::UndecidedCyclicity("second coordinate of psi".into()));
        }
        Cyclicity::CyclicDeclared => (
            KminKind::WholeSpace,
            Branch::VectorPairCyclic,
            None,
            zero.clone(),
            vec!["second coordinate of psi is declared cyclic".to_string()],
        ),
        Cyclicity::NonCyclic => {
            let scalar = kmin_pair_scalar(&phi[1], &psi[1], grid)?;
            let chi = scalar.symbol.expect("non-cyclic scalar pair has a symbol").grid(0, 0).clone();
            (KminKind::Symbol, Branch::VectorPairTriangular, scalar.theta, chi, Vec::new())
        }
    };
    Ok(KminResult {
        kind,
        symbol: Some(MatrixSymbol::from_grids(2, vec![top_left, top_right, zero, bottom])?),
        theta,
        branch,
        warnings,
        residuals: Vec::new(),
    })
}
