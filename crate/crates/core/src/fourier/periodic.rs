use std::f64::consts::PI;

use num_complex::Complex64;

use super::scan::mode_indices;
use super::{AnalysisMode, Convention, FourierMode, SymbolChain};
use crate::error::{Error, Result};
use crate::sparse::{Band, DenseMatrix, StencilMatrix, DENSE_ASSEMBLY_LIMIT};

/// Periodic 7-point operator with diagonal 2Σlₖ and off-diagonals −lₖ.
pub fn periodic_laplacian(n: usize, dim: usize, coeffs: [f64; 3]) -> Result<StencilMatrix> {
    if !(1..=3).contains(&dim) {
        return Err(Error::Invalid(format!(
            "dimension must be 1, 2 or 3, got {dim}"
        )));
    }
    let mut dims = [1; 3];
    dims[..dim].iter_mut().for_each(|d| *d = n);
    let mut a = StencilMatrix::zeros(dims, dim, true)?;
    let m: f64 = 2.0 * coeffs[..dim].iter().sum::<f64>();
    for p in 0..a.len() {
        a.set(p, Band::Center, m)?;
        for (axis, &l) in coeffs.iter().enumerate().take(dim) {
            a.set(p, Band::lower(axis), -l)?;
            a.set(p, Band::upper(axis), -l)?;
        }
    }
    Ok(a)
}

/// Unit-norm e^{ι(iθ + jφ + kξ)} on the n-periodic grid, x fastest.
pub fn fourier_vector(mode: &FourierMode, n: usize) -> Result<Vec<Complex64>> {
    if mode.convention != Some(Convention::Circulant) {
        return Err(Error::Invalid(
            "Fourier vectors are exact eigenvectors only under the circulant convention".into(),
        ));
    }
    let dim = mode.dim;
    let len = n.pow(dim as u32);
    let scale = 1.0 / (len as f64).sqrt();
    let [s, t, r] = mode.index;
    let mut v = Vec::with_capacity(len);
    for p in 0..len {
        let (i, j, k) = (p % n, (p / n) % n, p / (n * n));
        // Reduce the phase in integers so angles stay exact.
        let q = (i * s + j * t + k * r) % n;
        let a = 2.0 * PI * q as f64 / n as f64;
        v.push(Complex64::from_polar(scale, a));
    }
    Ok(v)
}

/// ‖Op v − λ v‖₂ for a real operator applied to a complex vector.
pub fn verify_eigenpair<F>(op: F, v: &[Complex64], expected: f64) -> f64
where
    F: Fn(&[f64], &mut [f64]),
{
    let re: Vec<f64> = v.iter().map(|c| c.re).collect();
    let im: Vec<f64> = v.iter().map(|c| c.im).collect();
    let mut ore = vec![0.0; v.len()];
    let mut oim = vec![0.0; v.len()];
    op(&re, &mut ore);
    op(&im, &mut oim);
    let mut s = 0.0;
    for i in 0..v.len() {
        let dr = ore[i] - expected * re[i];
        let di = oim[i] - expected * im[i];
        s += dr * dr + di * di;
    }
    s.sqrt()
}

/// Dense B of the recursive factorization, built level by level as
/// Xₖ₊₁ = (Xₖ + Lₖ)(I + Xₖ⁻¹Uₖ) with X₀ = diag(A). Couplings wrap on
/// periodic grids.
pub fn hssor_dense(a: &StencilMatrix) -> Result<DenseMatrix> {
    let n = a.len();
    if n > DENSE_ASSEMBLY_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: DENSE_ASSEMBLY_LIMIT,
        });
    }
    let mut x = DenseMatrix::zeros(n, n);
    for (p, &d) in a.diagonal().iter().enumerate() {
        x[(p, p)] = d;
    }
    for axis in 0..a.dim() {
        let mut l = DenseMatrix::zeros(n, n);
        let mut u = DenseMatrix::zeros(n, n);
        for p in 0..n {
            if let Some(q) = a.neighbor(p, Band::lower(axis)) {
                l[(p, q)] += a.band(Band::lower(axis))[p];
            }
            if let Some(q) = a.neighbor(p, Band::upper(axis)) {
                u[(p, q)] += a.band(Band::upper(axis))[p];
            }
        }
        let lu = x.lu()?;
        let mut y = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let col = lu.solve(&u.column(j));
            for (i, v) in col.into_iter().enumerate() {
                y[(i, j)] = v;
            }
        }
        let mut left = x;
        for i in 0..n {
            for j in 0..n {
                left[(i, j)] += l[(i, j)];
            }
        }
        let prod = left.matmul(&y);
        for i in 0..n {
            for j in 0..n {
                left[(i, j)] += prod[(i, j)];
            }
        }
        x = left;
    }
    Ok(x)
}

/// Largest residuals of the operator-versus-symbol check over all modes.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct VerifyReport {
    pub modes: usize,
    pub max_residual_a: f64,
    pub max_residual_b: f64,
}

/// Applies the periodic A and the dense periodic B to every circulant
/// Fourier vector and compares with the exact-mode symbols.
pub fn verify_symbols(n: usize, dim: usize, coeffs: [f64; 3]) -> Result<VerifyReport> {
    let a = periodic_laplacian(n, dim, coeffs)?;
    let b = hssor_dense(&a)?;
    let mut rep = VerifyReport {
        modes: 0,
        max_residual_a: 0.0,
        max_residual_b: 0.0,
    };
    for idx in mode_indices(n, dim, Convention::Circulant) {
        let mode = FourierMode::new(idx, n, dim, Convention::Circulant)?;
        let v = fourier_vector(&mode, n)?;
        let c = SymbolChain::evaluate(&mode, coeffs, AnalysisMode::Exact)?;
        let ra = verify_eigenpair(|x, y| a.spmv_into(x, y), &v, c.lam_a);
        let rb = verify_eigenpair(|x, y| y.copy_from_slice(&b.matvec(x)), &v, c.lam_b);
        rep.modes += 1;
        rep.max_residual_a = rep.max_residual_a.max(ra);
        rep.max_residual_b = rep.max_residual_b.max(rb);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::lambda_a;

    #[test]
    fn vectors_are_orthonormal() {
        let n = 8;
        let a = FourierMode::new([1, 2, 3], n, 3, Convention::Circulant).unwrap();
        let b = FourierMode::new([1, 2, 4], n, 3, Convention::Circulant).unwrap();
        let va = fourier_vector(&a, n).unwrap();
        let vb = fourier_vector(&b, n).unwrap();
        let ip: Complex64 = va.iter().zip(&vb).map(|(x, y)| x.conj() * y).sum();
        assert!(ip.norm() < 1e-13);
        let nn: f64 = va.iter().map(|x| x.norm_sqr()).sum();
        assert!((nn - 1.0).abs() < 1e-13);
        let z = fourier_vector(
            &FourierMode::new([0, 0, 0], n, 3, Convention::Circulant).unwrap(),
            n,
        )
        .unwrap();
        assert!(z.iter().all(|c| (c - z[0]).norm() < 1e-15));
        let p = FourierMode::new([1, 1, 1], n, 3, Convention::Paper).unwrap();
        assert!(fourier_vector(&p, n).is_err());
    }

    #[test]
    fn laplacian_symbol_matches_operator() {
        let n = 8;
        let a = periodic_laplacian(n, 3, [1.0; 3]).unwrap();
        let mode = FourierMode::new([3, 1, 6], n, 3, Convention::Circulant).unwrap();
        let v = fourier_vector(&mode, n).unwrap();
        let res = verify_eigenpair(|x, y| a.spmv_into(x, y), &v, lambda_a(&mode, [1.0; 3]));
        assert!(res < 1e-12);
    }

    #[test]
    fn hssor_symbol_matches_operator_2d() {
        let n = 6;
        let coeffs = [1.0, 0.5, 0.0];
        let a = periodic_laplacian(n, 2, coeffs).unwrap();
        let b = hssor_dense(&a).unwrap();
        for idx in [[0, 0, 0], [1, 4, 0], [3, 3, 0]] {
            let mode = FourierMode::new(idx, n, 2, Convention::Circulant).unwrap();
            let v = fourier_vector(&mode, n).unwrap();
            let c = SymbolChain::evaluate(&mode, coeffs, AnalysisMode::Exact).unwrap();
            let res = verify_eigenpair(|x, y| y.copy_from_slice(&b.matvec(x)), &v, c.lam_b);
            assert!(res < 1e-10, "{idx:?}: {res}");
        }
    }
}
