use super::Preconditioner;
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Relative pivot threshold: `|u_ii| < tol · ‖a_i‖₂` is a breakdown.
pub const ILU0_PIVOT_TOL: f64 = 1e-14;

/// ILU(0) factors on the pattern of `A`: unit-lower `L` (unit diagonal
/// stored) and upper `U`.
#[derive(Debug, Clone)]
pub struct Ilu0Factors {
    pub l: CsrMatrix,
    pub u: CsrMatrix,
}

/// IKJ ILU(0): fill is discarded outside the sparsity pattern of `A`.
pub fn ilu0_setup(a: &CsrMatrix) -> Result<Ilu0Factors> {
    if a.nrows() != a.ncols() {
        return Err(Error::Invalid("ILU(0) needs a square matrix".into()));
    }
    let n = a.nrows();
    let offs = a.row_offsets();
    let cols = a.col_indices();
    let mut vals = a.values().to_vec();
    let mut diag = vec![0usize; n];
    for i in 0..n {
        match cols[offs[i]..offs[i + 1]].binary_search(&i) {
            Ok(k) => diag[i] = offs[i] + k,
            Err(_) => return Err(Error::Breakdown { row: i, pivot: 0.0 }),
        }
    }
    let mut pos = vec![usize::MAX; n];
    for i in 0..n {
        let row_norm = a.values()[offs[i]..offs[i + 1]]
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt();
        for k in offs[i]..offs[i + 1] {
            pos[cols[k]] = k;
        }
        for kk in offs[i]..diag[i] {
            let k = cols[kk];
            let f = vals[kk] / vals[diag[k]];
            vals[kk] = f;
            for jj in diag[k] + 1..offs[k + 1] {
                let p = pos[cols[jj]];
                if p != usize::MAX {
                    vals[p] -= f * vals[jj];
                }
            }
        }
        for k in offs[i]..offs[i + 1] {
            pos[cols[k]] = usize::MAX;
        }
        let pivot = vals[diag[i]];
        if !(pivot.abs() >= ILU0_PIVOT_TOL * row_norm) || pivot == 0.0 {
            return Err(Error::Breakdown { row: i, pivot });
        }
    }
    let mut lt = Vec::new();
    let mut ut = Vec::new();
    for i in 0..n {
        for k in offs[i]..offs[i + 1] {
            let j = cols[k];
            if j < i {
                lt.push((i, j, vals[k]));
            } else {
                ut.push((i, j, vals[k]));
            }
        }
        lt.push((i, i, 1.0));
    }
    Ok(Ilu0Factors {
        l: CsrMatrix::from_triplets(n, n, &lt)?,
        u: CsrMatrix::from_triplets(n, n, &ut)?,
    })
}

impl Preconditioner for Ilu0Factors {
    fn dim(&self) -> usize {
        self.l.nrows()
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        let n = self.dim();
        assert_eq!(r.len(), n);
        assert_eq!(z.len(), n);
        for i in 0..n {
            let (c, v) = self.l.row(i);
            let mut s = r[i];
            for (&j, &x) in c.iter().zip(v) {
                if j < i {
                    s -= x * z[j];
                }
            }
            z[i] = s;
        }
        for i in (0..n).rev() {
            let (c, v) = self.u.row(i);
            let mut s = z[i];
            for (&j, &x) in c.iter().zip(v).skip(1) {
                s -= x * z[j];
            }
            z[i] = s / v[0];
        }
    }

    fn name(&self) -> String {
        "ilu0".into()
    }
}
