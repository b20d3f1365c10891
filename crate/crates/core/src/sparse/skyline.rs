use super::CsrMatrix;
use crate::error::{Error, Result};

/// Envelope (skyline) Cholesky factor `A = L Lᵀ` of a symmetric positive
/// definite matrix. Only the lower triangle of the input is read.
///
/// Storage is the row profile: row `i` keeps columns `first[i]..=i`, so a
/// matrix whose couplings stay near the diagonal factors cheaply.
#[derive(Debug, Clone)]
pub struct SkylineCholesky {
    n: usize,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl SkylineCholesky {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::Invalid("Cholesky needs a square matrix".into()));
        }
        let n = a.nrows();
        let mut first = vec![0usize; n];
        let mut start = vec![0usize; n + 1];
        for i in 0..n {
            let (cols, _) = a.row(i);
            first[i] = cols.first().copied().filter(|&c| c < i).unwrap_or(i);
            start[i + 1] = start[i] + (i - first[i] + 1);
        }
        let mut data = vec![0.0; start[n]];
        for i in 0..n {
            let (cols, vals) = a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if j <= i {
                    data[start[i] + j - first[i]] = v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let lo = fi.max(fj);
                let mut s = data[start[i] + j - fi];
                for k in lo..j {
                    s -= data[start[i] + k - fi] * data[start[j] + k - fj];
                }
                if j < i {
                    data[start[i] + j - fi] = s / data[start[j] + j - fj];
                } else {
                    if !(s > 0.0) {
                        return Err(Error::NotSpd {
                            context: format!("nonpositive pivot {s:e} at row {i}"),
                        });
                    }
                    data[start[i] + i - fi] = s.sqrt();
                }
            }
        }
        Ok(Self {
            n,
            first,
            start,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of stored factor entries.
    pub fn profile_len(&self) -> usize {
        self.data.len()
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        for i in 0..self.n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let mut s = x[i];
            for k in fi..i {
                s -= row[k - fi] * x[k];
            }
            x[i] = s / row[i - fi];
        }
        for i in (0..self.n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            x[i] /= row[i - fi];
            let xi = x[i];
            for k in fi..i {
                x[k] -= row[k - fi] * xi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_tridiagonal() {
        let a = CsrMatrix::tridiagonal(6, -1.0, 2.0, -1.0);
        let f = SkylineCholesky::factor(&a).unwrap();
        let mut x = vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0];
        f.solve_in_place(&mut x);
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
        assert_eq!(f.profile_len(), 11);
    }

    #[test]
    fn indefinite_rejected() {
        let a = CsrMatrix::tridiagonal(3, -2.0, 1.0, -2.0);
        assert!(matches!(
            SkylineCholesky::factor(&a),
            Err(Error::NotSpd { .. })
        ));
    }
}
