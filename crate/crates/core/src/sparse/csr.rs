use super::{DenseMatrix, LinearOperator};
use crate::error::{check_len, Error, Result};

/// Compressed sparse rows in canonical form: column indices strictly
/// increasing within each row, no duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triangle {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagKind {
    /// Diagonal taken as one; any stored diagonal entry is ignored.
    Unit,
    Stored,
}

impl CsrMatrix {
    /// Builds from raw arrays, checking the canonical-form invariants.
    pub fn from_raw(
        nrows: usize,
        ncols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_offsets.len() != nrows + 1 {
            return Err(Error::Invalid(format!(
                "row_offsets has length {}, expected {}",
                row_offsets.len(),
                nrows + 1
            )));
        }
        if row_offsets[0] != 0 || row_offsets[nrows] != values.len() {
            return Err(Error::Invalid(
                "row_offsets must start at 0 and end at nnz".into(),
            ));
        }
        if col_indices.len() != values.len() {
            return Err(Error::Invalid(
                "col_indices and values differ in length".into(),
            ));
        }
        for i in 0..nrows {
            let (lo, hi) = (row_offsets[i], row_offsets[i + 1]);
            if lo > hi {
                return Err(Error::Invalid(format!("row_offsets decreases at row {i}")));
            }
            let cols = &col_indices[lo..hi];
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invalid(format!(
                    "row {i} is not sorted/deduplicated"
                )));
            }
            if cols.last().is_some_and(|&c| c >= ncols) {
                return Err(Error::Invalid(format!("row {i} has a column out of range")));
            }
        }
        Ok(Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Builds from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        for &(i, j, _) in &sorted {
            if i >= nrows || j >= ncols {
                return Err(Error::Invalid(format!(
                    "entry ({i}, {j}) outside {nrows}x{ncols}"
                )));
            }
        }
        sorted.sort_by_key(|t| (t.0, t.1));
        let mut row_offsets = vec![0usize; nrows + 1];
        let mut col_indices = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            row_offsets[i + 1] += 1;
            col_indices.push(j);
            values.push(v);
            last = Some((i, j));
        }
        for i in 0..nrows {
            row_offsets[i + 1] += row_offsets[i];
        }
        Ok(Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Tridiagonal matrix with constant bands, handy for 1D tests.
    pub fn tridiagonal(n: usize, lower: f64, diag: f64, upper: f64) -> Self {
        let mut t = Vec::with_capacity(3 * n);
        for i in 0..n {
            if i > 0 {
                t.push((i, i - 1, lower));
            }
            t.push((i, i, diag));
            if i + 1 < n {
                t.push((i, i + 1, upper));
            }
        }
        Self::from_triplets(n, n, &t).expect("indices in range")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn nnz(&self) -> usize {
        self.values.len()
    }
    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }
    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (lo, hi) = (self.row_offsets[i], self.row_offsets[i + 1]);
        (&self.col_indices[lo..hi], &self.values[lo..hi])
    }

    /// Stored value at `(i, j)`, zero when absent.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map(|k| vals[k]).unwrap_or(0.0)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols))
            .map(|i| self.get(i, i))
            .collect()
    }

    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.ncols, x.len())?;
        let mut y = vec![0.0; self.nrows];
        self.spmv_into(x, &mut y);
        Ok(y)
    }

    /// `y = A x` with a fixed left-to-right summation order per row.
    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols, "spmv: x has wrong length");
        assert_eq!(y.len(), self.nrows, "spmv: y has wrong length");
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            let mut acc = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                acc += v * x[j];
            }
            *yi = acc;
        }
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &j in &self.col_indices {
            counts[j + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let mut next = counts.clone();
        let mut cols = vec![0usize; self.nnz()];
        let mut vals = vec![0.0; self.nnz()];
        for i in 0..self.nrows {
            let (rc, rv) = self.row(i);
            for (&j, &v) in rc.iter().zip(rv) {
                let k = next[j];
                cols[k] = i;
                vals[k] = v;
                next[j] += 1;
            }
        }
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            row_offsets: counts,
            col_indices: cols,
            values: vals,
        }
    }

    /// Sparse product `self * other`.
    pub fn matmul(&self, other: &CsrMatrix) -> Result<CsrMatrix> {
        check_len(self.ncols, other.nrows)?;
        let mut row_offsets = vec![0usize; self.nrows + 1];
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        let mut acc = vec![0.0; other.ncols];
        let mut mark = vec![usize::MAX; other.ncols];
        let mut touched = Vec::new();
        for i in 0..self.nrows {
            touched.clear();
            let (ac, av) = self.row(i);
            for (&k, &a) in ac.iter().zip(av) {
                let (bc, bv) = other.row(k);
                for (&j, &b) in bc.iter().zip(bv) {
                    if mark[j] != i {
                        mark[j] = i;
                        acc[j] = 0.0;
                        touched.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                col_indices.push(j);
                values.push(acc[j]);
            }
            row_offsets[i + 1] = col_indices.len();
        }
        Ok(Self {
            nrows: self.nrows,
            ncols: other.ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Exact (bitwise value) symmetry test.
    pub fn is_symmetric(&self) -> bool {
        self.nrows == self.ncols && *self == self.transpose()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            let (c, v) = self.row(i);
            for (&j, &x) in c.iter().zip(v) {
                d[(i, j)] = x;
            }
        }
        d
    }

    /// Strict lower part plus diagonal, or diagonal plus strict upper part.
    pub fn triangle(&self, shape: Triangle) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..self.nrows {
            let (c, v) = self.row(i);
            for (&j, &x) in c.iter().zip(v) {
                let keep = match shape {
                    Triangle::Lower => j <= i,
                    Triangle::Upper => j >= i,
                };
                if keep {
                    t.push((i, j, x));
                }
            }
        }
        CsrMatrix::from_triplets(self.nrows, self.ncols, &t).expect("same shape")
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.nrows
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.spmv_into(x, y)
    }
}

/// Solves `A x = b` for triangular `A` by forward or backward substitution.
///
/// Entries on the wrong side of the diagonal are rejected.
pub fn tri_solve(a: &CsrMatrix, b: &[f64], shape: Triangle, diag: DiagKind) -> Result<Vec<f64>> {
    if a.nrows() != a.ncols() {
        return Err(Error::Invalid(
            "triangular solve needs a square matrix".into(),
        ));
    }
    check_len(a.nrows(), b.len())?;
    let n = a.nrows();
    let mut x = vec![0.0; n];
    let solve_row = |i: usize, x: &mut [f64]| -> Result<()> {
        let (cols, vals) = a.row(i);
        let mut s = b[i];
        let mut d = None;
        for (&j, &v) in cols.iter().zip(vals) {
            let wrong_side = match shape {
                Triangle::Lower => j > i,
                Triangle::Upper => j < i,
            };
            if j == i {
                d = Some(v);
            } else if wrong_side {
                if v != 0.0 {
                    return Err(Error::Invalid(format!(
                        "entry ({i}, {j}) violates {shape:?} shape"
                    )));
                }
            } else {
                s -= v * x[j];
            }
        }
        x[i] = match diag {
            DiagKind::Unit => s,
            DiagKind::Stored => match d {
                Some(d) if d != 0.0 => s / d,
                _ => return Err(Error::SingularFactor { row: i }),
            },
        };
        Ok(())
    };
    match shape {
        Triangle::Lower => {
            for i in 0..n {
                solve_row(i, &mut x)?;
            }
        }
        Triangle::Upper => {
            for i in (0..n).rev() {
                solve_row(i, &mut x)?;
            }
        }
    }
    Ok(x)
}
