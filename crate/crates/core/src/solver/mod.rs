//! Fixed-point initialization followed by preconditioned nonlinear conjugate gradient.

mod fixed_point;
mod line_search;
mod pcg;
mod precond;

pub use fixed_point::{fixed_point_init, solve_interior, FixedPointResult};
pub use line_search::{quadratic_step, StepGuess};
pub use pcg::{pcg_minimize, pcg_minimize_from, write_trajectory_csv, IterationRecord, SolveResult, StopReason};
pub use precond::{build_preconditioner, Preconditioner};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    /// Fixed-point rounds after the initial harmonic solve.
    pub fpm_iters: usize,
    pub max_iters: usize,
    /// Stop once an accepted step lowers the energy by less than this.
    pub energy_tol: T,
    /// Stop once `sqrt(g^T M^-1 g)` falls below this.
    pub grad_tol: T,
    /// Sufficient-decrease constant of the Wolfe conditions.
    pub c1: T,
    /// Curvature constant of the Wolfe conditions; logged only.
    pub c2: T,
    pub alpha0: T,
    pub reinterp_max: usize,
    /// Use the conjugate direction update; `false` gives preconditioned steepest descent.
    pub conjugate: bool,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            fpm_iters: 10,
            max_iters: 200,
            energy_tol: T::lit(1e-6),
            grad_tol: T::lit(1e-8),
            c1: T::lit(1e-4),
            c2: T::lit(0.4),
            alpha0: T::one(),
            reinterp_max: 3,
            conjugate: true,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let half = T::lit(0.5);
        if !(self.c1 > T::zero() && self.c1 < self.c2 && self.c2 < half) {
            return Err(Error::InvalidConfig("require 0 < c1 < c2 < 1/2".into()));
        }
        if !(self.energy_tol > T::zero() && self.grad_tol > T::zero() && self.alpha0 > T::zero()) {
            return Err(Error::InvalidConfig("tolerances and initial step must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be positive".into()));
        }
        Ok(())
    }
}
