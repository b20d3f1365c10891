//! Hierarchical SSOR preconditioning for structured finite-difference
//! operators, with the comparison preconditioners, Krylov solvers, Fourier
//! symbol analysis and a benchmark harness.

pub mod bench;
pub mod error;
pub mod fourier;
pub mod krylov;
pub mod multigrid;
pub mod precond;
pub mod problems;
pub mod sparse;

pub use error::{Error, Result};
