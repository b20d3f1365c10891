use super::Preconditioner;
use crate::error::{check_len, Error, Result};
use crate::sparse::CsrMatrix;

/// Point SSOR with ω = 1: `B = (D + L) D⁻¹ (D + U)`.
///
/// Applied by a forward and a backward sweep over the matrix itself; the
/// back sweep is written as `z_i = y_i - (U z)_i / d_i`, which is `(D+U)z = Dy`.
#[derive(Debug, Clone)]
pub struct Ssor {
    a: CsrMatrix,
    diag_pos: Vec<usize>,
}

impl Ssor {
    pub fn new(a: CsrMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::Invalid("SSOR needs a square matrix".into()));
        }
        let mut diag_pos = Vec::with_capacity(a.nrows());
        for i in 0..a.nrows() {
            let (cols, vals) = a.row(i);
            match cols.binary_search(&i) {
                Ok(k) if vals[k] != 0.0 => diag_pos.push(a.row_offsets()[i] + k),
                _ => return Err(Error::SingularFactor { row: i }),
            }
        }
        Ok(Self { a, diag_pos })
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.a
    }
}

impl Preconditioner for Ssor {
    fn dim(&self) -> usize {
        self.a.nrows()
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        let n = self.a.nrows();
        assert_eq!(r.len(), n);
        assert_eq!(z.len(), n);
        let offs = self.a.row_offsets();
        let cols = self.a.col_indices();
        let vals = self.a.values();
        for i in 0..n {
            let mut s = r[i];
            for k in offs[i]..self.diag_pos[i] {
                s -= vals[k] * z[cols[k]];
            }
            z[i] = s / vals[self.diag_pos[i]];
        }
        for i in (0..n).rev() {
            let dp = self.diag_pos[i];
            if dp + 1 == offs[i + 1] {
                continue;
            }
            let mut acc = 0.0;
            for k in dp + 1..offs[i + 1] {
                acc += vals[k] * z[cols[k]];
            }
            z[i] -= acc / vals[dp];
        }
    }

    fn name(&self) -> String {
        "ssor".into()
    }
}

pub fn ssor_apply(a: &CsrMatrix, r: &[f64]) -> Result<Vec<f64>> {
    check_len(a.nrows(), r.len())?;
    Ok(Ssor::new(a.clone())?.apply_vec(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_divides() {
        let a = CsrMatrix::from_triplets(3, 3, &[(0, 0, 2.0), (1, 1, 4.0), (2, 2, 8.0)]).unwrap();
        assert_eq!(
            ssor_apply(&a, &[2.0, 2.0, 2.0]).unwrap(),
            vec![1.0, 0.5, 0.25]
        );
    }

    #[test]
    fn hand_computed_two_by_two() {
        let a = CsrMatrix::tridiagonal(2, -1.0, 2.0, -1.0);
        assert_eq!(ssor_apply(&a, &[1.0, 0.0]).unwrap(), vec![0.625, 0.25]);
    }

    #[test]
    fn zero_diagonal_rejected() {
        let a = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        assert!(matches!(
            Ssor::new(a),
            Err(Error::SingularFactor { row: 1 })
        ));
    }
}
