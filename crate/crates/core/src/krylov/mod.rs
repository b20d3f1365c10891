//! Krylov solvers. Both stop on the true relative residual `‖b − A x‖ / ‖b‖`.

mod cg;
mod gmres;

pub use cg::cg;
pub use gmres::{arnoldi_basis, gmres};

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::sparse::{norm2, LinearOperator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub restart: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub record_history: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            restart: 30,
            max_iters: 500,
            tol: 1e-10,
            record_history: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restart == 0 {
            return Err(Error::Invalid("restart must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Invalid("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveLabels {
    pub solver: String,
    pub preconditioner: String,
    pub problem: String,
    /// Preconditioning side; GMRES here is always right-preconditioned.
    pub side: String,
    pub rhs: String,
    pub x0: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    /// Preconditioned operator applications (inner Krylov steps).
    pub iterations: usize,
    pub converged: bool,
    pub final_relres: f64,
    /// Relative residual after each iteration (recurrence estimate).
    pub history: Vec<f64>,
    pub wall_seconds: f64,
    pub labels: SolveLabels,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub x: Vec<f64>,
    pub report: SolveReport,
}

/// `‖b − A x‖₂ / ‖b‖₂`.
pub fn relres<A: LinearOperator + ?Sized>(a: &A, x: &[f64], b: &[f64]) -> Result<f64> {
    check_len(a.dim(), x.len())?;
    check_len(a.dim(), b.len())?;
    let bn = norm2(b);
    if bn == 0.0 {
        return Err(Error::Invalid("right-hand side is zero".into()));
    }
    Ok(residual_norm(a, x, b) / bn)
}

pub(crate) fn residual(a: &(impl LinearOperator + ?Sized), x: &[f64], b: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0; b.len()];
    a.apply(x, &mut r);
    r.iter_mut().zip(b).for_each(|(ri, bi)| *ri = bi - *ri);
    r
}

fn residual_norm(a: &(impl LinearOperator + ?Sized), x: &[f64], b: &[f64]) -> f64 {
    norm2(&residual(a, x, b))
}
