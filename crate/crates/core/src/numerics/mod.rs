//! Numerical kernels shared by the exact and asymptotic solvers: a symmetric
//! tridiagonal eigensolver, adaptive quadrature that tolerates inverse
//! square-root endpoint singularities, bracketed root finding and the
//! Clausen function.

mod clausen;
mod quad;
mod roots;
mod tridiag;

pub use clausen::clausen_cl2;
pub use quad::{integrate, integrate_fn, Integrand, Singularity};
pub use roots::{bisect_predicate, find_root};
pub use tridiag::{eigensolve_tridiagonal, TridiagonalEigen, TridiagonalSymmetric};

use crate::error::{Error, Result};

/// Stopping criteria for iterative kernels.
///
/// For root finding `max_iter` bounds the number of bracket updates; for
/// quadrature it bounds the number of interval bisections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iter: usize) -> Result<Self> {
        let tol = Self {
            abs_tol,
            rel_tol,
            max_iter,
        };
        tol.validate()?;
        Ok(tol)
    }

    /// Defaults for bracketed root finding.
    pub const fn root() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_iter: 60,
        }
    }

    /// Defaults for adaptive quadrature.
    pub const fn quadrature() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_iter: 400,
        }
    }

    /// Root finding down to adjacent floating point numbers.
    pub const fn machine() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: f64::EPSILON,
            max_iter: 200,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let ok_values = self.abs_tol >= 0.0 && self.rel_tol >= 0.0;
        if !ok_values || !(self.abs_tol > 0.0 || self.rel_tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tolerance needs a positive abs_tol or rel_tol, got {} / {}",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be positive".into()));
        }
        Ok(())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::quadrature()
    }
}
