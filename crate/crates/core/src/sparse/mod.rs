//! Storage formats and the kernels every other module is built on.
//!
//! Grid operators live in [`StencilMatrix`] (seven bands, lexicographic
//! x-fastest ordering); everything else is a canonical [`CsrMatrix`].

mod csr;
mod dense;
pub mod mtx;
mod skyline;
mod stencil;

pub use csr::{tri_solve, CsrMatrix, DiagKind, Triangle};
pub use dense::{assemble_dense, DenseLu, DenseMatrix, DENSE_ASSEMBLY_LIMIT};
pub use mtx::{
    parse_matrix_market, read_matrix_market, read_matrix_market_with_limit,
    to_matrix_market_string, write_matrix_market,
};
pub use skyline::SkylineCholesky;
pub use stencil::{split_offsets, Band, OffsetSplit, StencilMatrix};

/// A square linear map `y = A x`.
///
/// Implementations panic when slice lengths disagree with [`dim`](Self::dim);
/// the checked entry points (`spmv`) return an error instead.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply(x, y)
    }
}

/// Adapts a closure into a [`LinearOperator`].
pub struct FnOperator<F> {
    n: usize,
    f: F,
}

impl<F: Fn(&[f64], &mut [f64])> FnOperator<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F: Fn(&[f64], &mut [f64])> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.n
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (self.f)(x, y)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
