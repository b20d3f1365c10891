//! Hierarchical SSOR on a structured grid.
//!
//! ```text
//! B = (P + L3)(I + P⁻¹ L3ᵀ)
//! P = (T + L2)(I + T⁻¹ L2ᵀ)
//! T = (M + L1)(I + M⁻¹ L1ᵀ),   M = diag(A)
//! ```
//!
//! `L_a` is the band coupling a node to its predecessor along axis `a`; the
//! stored successor band plays the role of `L_aᵀ`. Level `k` treats the grid
//! as a chain of level-`k-1` blocks (points, lines, planes). A solve with
//! level `k` is a forward sweep over the blocks followed by a backward one,
//! each block solve recursing one level down. Nothing is factored.

use super::Preconditioner;
use crate::error::{check_len, Error, Result};
use crate::sparse::{Band, StencilMatrix};

#[derive(Debug, Clone)]
pub struct Hssor {
    a: StencilMatrix,
    /// `sizes[k]`: number of nodes in one level-`k` block.
    sizes: [usize; 4],
}

impl Hssor {
    pub fn new(a: StencilMatrix) -> Result<Self> {
        if a.is_periodic() {
            return Err(Error::Invalid(
                "HSSOR sweeps need a Dirichlet (non-periodic) stencil".into(),
            ));
        }
        if let Some(p) = a.diagonal().iter().position(|&d| d == 0.0) {
            return Err(Error::SingularFactor { row: p });
        }
        let d = a.dims();
        let sizes = [1, d[0], d[0] * d[1], d[0] * d[1] * d[2]];
        Ok(Self { a, sizes })
    }

    pub fn matrix(&self) -> &StencilMatrix {
        &self.a
    }

    fn levels(&self) -> usize {
        self.a.dim()
    }

    fn work(&self) -> Vec<(Vec<f64>, Vec<f64>)> {
        (0..=self.levels())
            .map(|k| {
                let s = if k >= 2 { self.sizes[k - 1] } else { 0 };
                (vec![0.0; s], vec![0.0; s])
            })
            .collect()
    }

    /// Solves with the level-`level` block starting at node `base`.
    fn solve_block(
        &self,
        level: usize,
        base: usize,
        src: &[f64],
        dst: &mut [f64],
        work: &mut [(Vec<f64>, Vec<f64>)],
    ) {
        match level {
            0 => dst[0] = src[0] / self.a.diagonal()[base],
            1 => self.solve_line(base, src, dst),
            _ => {
                let s = self.sizes[level - 1];
                let nb = self.a.dims()[level - 1];
                let lo = self.a.band(Band::lower(level - 1));
                let up = self.a.band(Band::upper(level - 1));
                let (lower, cur) = work.split_at_mut(level);
                let (t, t2) = &mut cur[0];
                for b in 0..nb {
                    let off = b * s;
                    t.copy_from_slice(&src[off..off + s]);
                    if b > 0 {
                        for q in 0..s {
                            t[q] -= lo[base + off + q] * dst[off - s + q];
                        }
                    }
                    self.solve_block(level - 1, base + off, t, &mut dst[off..off + s], lower);
                }
                for b in (0..nb - 1).rev() {
                    let off = b * s;
                    for q in 0..s {
                        t[q] = up[base + off + q] * dst[off + s + q];
                    }
                    self.solve_block(level - 1, base + off, t, t2, lower);
                    for q in 0..s {
                        dst[off + q] -= t2[q];
                    }
                }
            }
        }
    }

    /// `T`-level solve: bidiagonal forward sweep, then unit-upper back sweep.
    fn solve_line(&self, base: usize, src: &[f64], dst: &mut [f64]) {
        let n = self.sizes[1];
        let m = &self.a.diagonal()[base..base + n];
        let l = &self.a.band(Band::MinusX)[base..base + n];
        let u = &self.a.band(Band::PlusX)[base..base + n];
        let mut prev = 0.0;
        for i in 0..n {
            let mut s = src[i];
            if i > 0 {
                s -= l[i] * prev;
            }
            prev = s / m[i];
            dst[i] = prev;
        }
        for i in (0..n - 1).rev() {
            let acc = u[i] * dst[i + 1];
            dst[i] -= acc / m[i];
        }
    }

    fn multiply_block(&self, level: usize, base: usize, x: &[f64], y: &mut [f64]) {
        if level == 0 {
            y[0] = self.a.diagonal()[base] * x[0];
            return;
        }
        let s = self.sizes[level - 1];
        let nb = self.a.dims()[level - 1];
        let lo = self.a.band(Band::lower(level - 1));
        let up = self.a.band(Band::upper(level - 1));
        let mut work = self.work();
        let mut w = x.to_vec();
        let mut t = vec![0.0; s];
        let mut t2 = vec![0.0; s];
        for b in 0..nb.saturating_sub(1) {
            let off = b * s;
            for q in 0..s {
                t[q] = up[base + off + q] * x[off + s + q];
            }
            self.solve_block(level - 1, base + off, &t, &mut t2, &mut work);
            for q in 0..s {
                w[off + q] += t2[q];
            }
        }
        for b in 0..nb {
            let off = b * s;
            self.multiply_block(
                level - 1,
                base + off,
                &w[off..off + s],
                &mut y[off..off + s],
            );
            if b > 0 {
                for q in 0..s {
                    y[off + q] += lo[base + off + q] * w[off - s + q];
                }
            }
        }
    }

    /// `y = B x` through the factored form.
    pub fn multiply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.a.len());
        assert_eq!(y.len(), self.a.len());
        self.multiply_block(self.levels(), 0, x, y);
    }
}

impl Preconditioner for Hssor {
    fn dim(&self) -> usize {
        self.a.len()
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        assert_eq!(r.len(), self.a.len());
        assert_eq!(z.len(), self.a.len());
        let mut work = self.work();
        self.solve_block(self.levels(), 0, r, z, &mut work);
    }

    fn name(&self) -> String {
        "hssor".into()
    }
}

pub fn hssor_apply(a: &StencilMatrix, r: &[f64]) -> Result<Vec<f64>> {
    check_len(a.len(), r.len())?;
    Ok(Hssor::new(a.clone())?.apply_vec(r))
}

pub fn hssor_multiply(a: &StencilMatrix, x: &[f64]) -> Result<Vec<f64>> {
    check_len(a.len(), x.len())?;
    let h = Hssor::new(a.clone())?;
    let mut y = vec![0.0; a.len()];
    h.multiply(x, &mut y);
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precond::Ssor;
    use crate::problems::{build_laplacian, Boundary, Coefficients, GridSpec};

    fn iso(dim: usize, n: usize) -> StencilMatrix {
        build_laplacian(&GridSpec::isotropic(dim, n).unwrap()).unwrap()
    }

    fn probe(n: usize, seed: u64) -> Vec<f64> {
        (0..n)
            .map(|i| ((i as u64 * 2654435761 + seed) % 1000) as f64 / 500.0 - 1.0)
            .collect()
    }

    #[test]
    fn diagonal_matrix_divides() {
        let mut a = StencilMatrix::zeros([3, 3, 2], 3, false).unwrap();
        for p in 0..a.len() {
            a.set(p, Band::Center, (p + 1) as f64).unwrap();
        }
        let r = vec![6.0; a.len()];
        let z = hssor_apply(&a, &r).unwrap();
        for (p, zp) in z.iter().enumerate() {
            assert_eq!(*zp, 6.0 / (p + 1) as f64);
        }
    }

    #[test]
    fn one_dimensional_is_point_ssor_bitwise() {
        let spec = GridSpec::new(1, 17, Boundary::Dirichlet, Coefficients::ISOTROPIC).unwrap();
        let a = build_laplacian(&spec).unwrap();
        let r = probe(17, 3);
        let h = hssor_apply(&a, &r).unwrap();
        let s = Ssor::new(a.to_csr()).unwrap().apply_vec(&r);
        assert_eq!(h, s);
    }

    #[test]
    fn apply_inverts_multiply() {
        for (dim, n) in [(2, 5), (3, 4)] {
            let a = iso(dim, n);
            let r = probe(a.len(), 11);
            let z = hssor_apply(&a, &r).unwrap();
            let back = hssor_multiply(&a, &z).unwrap();
            let err = back
                .iter()
                .zip(&r)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-13, "{dim}D: {err}");
        }
    }

    #[test]
    fn periodic_and_zero_diagonal_rejected() {
        let spec = GridSpec::new(2, 4, Boundary::Periodic, Coefficients::ISOTROPIC).unwrap();
        assert!(Hssor::new(build_laplacian(&spec).unwrap()).is_err());
        let a = StencilMatrix::zeros([3, 1, 1], 1, false).unwrap();
        assert!(matches!(
            Hssor::new(a),
            Err(Error::SingularFactor { row: 0 })
        ));
    }
}
