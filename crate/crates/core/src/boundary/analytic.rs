use num_complex::Complex64;

use super::BoundaryGrid;
use crate::error::{Error, Result};
use crate::hardy::{backward_shift, Cyclicity, FiniteBlaschke};
use crate::rational::{region_of, RationalFn, Region};

/// A function known only through boundary samples, with a declared
/// backward-shift cyclicity flag.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    grid: BoundaryGrid,
    cyclicity: Cyclicity,
    label: String,
}

impl SampledFunction {
    pub fn new(grid: BoundaryGrid, cyclicity: Cyclicity, label: impl Into<String>) -> Self {
        SampledFunction { grid, cyclicity, label: label.into() }
    }

    /// `sum_{j<terms} 2^{-j} z^{2^j}`, a truncated lacunary series declared cyclic.
    pub fn lacunary(n: usize, terms: u32) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..terms {
            let k = 1usize << j;
            if k >= n / 2 {
                return Err(Error::TruncationTooSmall(format!("{terms} lacunary terms need more than {n} samples")));
            }
            coeffs[k] = Complex64::new(0.5f64.powi(j as i32), 0.0);
        }
        Ok(Self::new(
            BoundaryGrid::from_fft_coeffs(coeffs)?,
            Cyclicity::CyclicDeclared,
            format!("lacunary({terms})"),
        ))
    }

    pub fn grid(&self) -> &BoundaryGrid {
        &self.grid
    }

    pub fn cyclicity(&self) -> Cyclicity {
        self.cyclicity
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// A coordinate of a Hardy-space vector: exact rational or sampled.
#[derive(Clone, Debug, PartialEq)]
pub enum AnalyticFn {
    Rational(RationalFn),
    Sampled(SampledFunction),
}

impl From<RationalFn> for AnalyticFn {
    fn from(f: RationalFn) -> Self {
        AnalyticFn::Rational(f)
    }
}

impl From<SampledFunction> for AnalyticFn {
    fn from(f: SampledFunction) -> Self {
        AnalyticFn::Sampled(f)
    }
}

impl AnalyticFn {
    pub fn as_rational(&self) -> Option<&RationalFn> {
        match self {
            AnalyticFn::Rational(f) => Some(f),
            AnalyticFn::Sampled(_) => None,
        }
    }

    pub fn require_rational(&self, what: &str) -> Result<&RationalFn> {
        self.as_rational()
            .ok_or_else(|| Error::NeedsRational(format!("{what} must be rational")))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            AnalyticFn::Rational(f) => f.is_zero(),
            AnalyticFn::Sampled(s) => s.grid.sup_norm() == 0.0,
        }
    }

    /// Rational functions with no closed-disc poles are non-cyclic; sampled
    /// functions carry their declared flag.
    pub fn cyclicity(&self) -> Cyclicity {
        match self {
            AnalyticFn::Rational(f) => {
                if f.poles().iter().all(|p| region_of(*p) == Region::Outside) {
                    Cyclicity::NonCyclic
                } else {
                    Cyclicity::Unknown
                }
            }
            AnalyticFn::Sampled(s) => s.cyclicity,
        }
    }

    /// Boundary values on an `n`-point grid; sampled data is resampled
    /// through its Fourier coefficients.
    pub fn to_grid(&self, n: usize) -> Result<BoundaryGrid> {
        match self {
            AnalyticFn::Rational(f) => BoundaryGrid::sample_rational(f, n),
            AnalyticFn::Sampled(s) => s.grid.resample(n),
        }
    }

    /// Multiplication by an inner function; the cyclicity flag is kept.
    pub fn mul_inner(&self, theta: &FiniteBlaschke) -> Result<Self> {
        Ok(match self {
            AnalyticFn::Rational(f) => AnalyticFn::Rational(f * &theta.to_rational()),
            AnalyticFn::Sampled(s) => AnalyticFn::Sampled(SampledFunction {
                grid: s.grid.map_with_point(|z, v| v * theta.eval(z)),
                cyclicity: s.cyclicity,
                label: format!("B*{}", s.label),
            }),
        })
    }

    pub fn mul_rational(&self, r: &RationalFn) -> Result<Self> {
        Ok(match self {
            AnalyticFn::Rational(f) => AnalyticFn::Rational(f * r),
            AnalyticFn::Sampled(s) => {
                let rg = BoundaryGrid::sample_rational(r, s.grid.n())?;
                AnalyticFn::Sampled(SampledFunction {
                    grid: &s.grid * &rg,
                    cyclicity: s.cyclicity,
                    label: s.label.clone(),
                })
            }
        })
    }

    /// `(f - f(0)) / z`.
    pub fn backward_shift(&self) -> Result<Self> {
        Ok(match self {
            AnalyticFn::Rational(f) => AnalyticFn::Rational(backward_shift(f)?),
            AnalyticFn::Sampled(s) => AnalyticFn::Sampled(SampledFunction {
                grid: s.grid.backward_shift(),
                cyclicity: s.cyclicity,
                label: format!("B({})", s.label),
            }),
        })
    }

    pub fn eval_at_zero(&self) -> Result<Complex64> {
        match self {
            AnalyticFn::Rational(f) => f.eval(Complex64::new(0.0, 0.0)),
            AnalyticFn::Sampled(s) => Ok(s.grid.coeff(0)),
        }
    }
}

impl BoundaryGrid {
    /// Same trigonometric polynomial on an `n`-point grid. Modes that do
    /// not fit are dropped.
    pub fn resample(&self, n: usize) -> Result<BoundaryGrid> {
        if n == self.n() {
            return Ok(self.clone());
        }
        let half = (self.n().min(n) / 2) as i64;
        let lowest = -half;
        let coeffs: Vec<Complex64> = (lowest..half).map(|k| self.coeff(k)).collect();
        BoundaryGrid::from_laurent(n, lowest, &coeffs)
    }
}
