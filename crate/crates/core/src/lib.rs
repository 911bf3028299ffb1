//! Minimal and maximal Toeplitz kernels on the rational Hardy class.
//!
//! Exact constructions run on [`RationalFn`] and [`FiniteBlaschke`];
//! every construction can be checked numerically through truncated
//! block-Toeplitz matrices.

pub mod boundary;
pub mod error;
pub mod expr;
pub mod hardy;
pub mod json;
pub mod maximal;
pub mod minimal;
pub mod rational;
pub mod toeplitz;

pub use boundary::{AnalyticFn, BoundaryGrid, OuterNumeric, SampledFunction};
pub use error::{Error, Result};
pub use hardy::{Cyclicity, FiniteBlaschke, HardyClass, HardyFunction};
pub use rational::{Polynomial, RationalFn};
pub use toeplitz::{KernelBasis, MatrixSymbol, SymbolEntry, TruncatedToeplitz};
