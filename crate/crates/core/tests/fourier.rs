use std::f64::consts::PI;

use hssor::fourier::{
    cond_asymptotic, cond_discrete, fourier_vector, hssor_dense, lambda_a, periodic_laplacian,
    spectrum_extremes, verify_eigenpair, verify_symbols, AnalysisMode, Convention, FourierMode,
    SymbolChain, ASYMPTOTIC_CONSTANT,
};
use hssor::sparse::{Band, StencilMatrix};
use nalgebra::DMatrix;

const ISO: [f64; 3] = [1.0; 3];

fn chain(angles: [f64; 3], mode: AnalysisMode) -> SymbolChain {
    SymbolChain::evaluate(&FourierMode::from_angles(angles, 3).unwrap(), ISO, mode).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn laplacian_symbol_values() {
    assert!(close(
        chain([PI; 3], AnalysisMode::Paper).lam_a,
        12.0,
        1e-14
    ));
    assert_eq!(chain([0.0; 3], AnalysisMode::Paper).lam_a, 0.0);
    let m = FourierMode::from_angles([2.0 * PI / 5.0, 0.0, 0.0], 3).unwrap();
    assert!(close(lambda_a(&m, ISO), 1.381966011250105, 1e-14));
}

#[test]
fn line_level_symbol() {
    assert!(close(
        chain([PI, 0.0, 0.0], AnalysisMode::Paper).lam_t,
        8.0,
        1e-14
    ));
    assert!(close(
        chain([0.0; 3], AnalysisMode::Paper).lam_t,
        4.0,
        1e-14
    ));
    let exact = chain([PI, 0.0, 0.0], AnalysisMode::Exact).lam_t;
    assert!(close(exact, 8.0 + 1.0 / 6.0, 1e-14));
    // Circulant oracle: circ(6 + 1/6, -1, 0, ..., 0, -1) applied to the alternating vector.
    let n = 8;
    let v: Vec<f64> = (0..n)
        .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    let cv: Vec<f64> = (0..n)
        .map(|i| (6.0 + 1.0 / 6.0) * v[i] - v[(i + 1) % n] - v[(i + n - 1) % n])
        .collect();
    assert!(cv.iter().zip(&v).all(|(c, x)| close(*c, exact * x, 1e-13)));
}

#[test]
fn plane_and_cube_symbols() {
    let p = chain([PI, PI, 0.0], AnalysisMode::Paper);
    assert!(close(p.lam_p, 81.0 / 8.0, 1e-13));
    let c = chain([PI; 3], AnalysisMode::Paper);
    assert!(close(c.lam_b, 7921.0 / 648.0, 1e-13));
    assert!(close(c.lam_b_minus_a, 145.0 / 648.0, 1e-14));
    assert!(close(c.lam_binv_a, 7776.0 / 7921.0, 1e-14));
    let z = chain([0.0; 3], AnalysisMode::Paper);
    assert!(close(z.lam_b, 25.0 / 36.0, 1e-14));
    assert!(close(z.lam_b_minus_a, 25.0 / 36.0, 1e-14));
    assert_ne!(z.lam_b, 95.0 / 36.0);
}

#[test]
fn symbol_identity_over_grid() {
    for mode in [AnalysisMode::Paper, AnalysisMode::Exact] {
        for conv in [Convention::Paper, Convention::Circulant] {
            let lo = if conv == Convention::Paper { 1 } else { 0 };
            for s in lo..16 + lo {
                for t in lo..16 + lo {
                    for r in lo..16 + lo {
                        let m = FourierMode::new([s, t, r], 16, 3, conv).unwrap();
                        let c = SymbolChain::evaluate(&m, ISO, mode).unwrap();
                        assert!((c.lam_b - c.lam_a - c.lam_b_minus_a).abs() <= 1e-14);
                        if !m.null_mode {
                            assert!(c.lam_b_minus_a > 0.0);
                            assert!(c.lam_binv_a > 0.0 && c.lam_binv_a <= 1.0);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn preconditioned_symbol_monotone_spot() {
    let at = |i| {
        let m = FourierMode::new([i, i, i], 32, 3, Convention::Paper).unwrap();
        SymbolChain::evaluate(&m, ISO, AnalysisMode::Paper)
            .unwrap()
            .lam_binv_a
    };
    assert!(at(1) < at(16));
}

#[test]
fn extremes_n16() {
    let e = spectrum_extremes(16, 3, ISO, AnalysisMode::Paper, Convention::Paper).unwrap();
    assert_eq!(e.binv_a.min_mode, [1, 1, 1]);
    assert_eq!(e.binv_a.max_mode, [8, 8, 8]);
    assert!(e.b.max_val < 7921.0 / 648.0);
    assert!(e.b.min_val > 25.0 / 36.0);
    assert!(e.b.min_val < 95.0 / 36.0);
}

#[test]
fn discrete_condition_scaling() {
    let c32 = cond_discrete(32, 3, ISO, AnalysisMode::Paper, Convention::Paper).unwrap();
    let c64 = cond_discrete(64, 3, ISO, AnalysisMode::Paper, Convention::Paper).unwrap();
    let ratio = c64 / c32;
    assert!((3.5..=4.5).contains(&ratio), "{ratio}");
    let h = 1.0 / 65.0;
    let scaled = c64 * h * h;
    assert!((0.004..=0.008).contains(&scaled), "{scaled}");
    let asym = cond_asymptotic(h).unwrap();
    assert!((asym / c64 - 1.0).abs() <= 0.15, "{}", asym / c64);
}

#[test]
fn asymptotic_formula() {
    assert!((0.0055..0.0065).contains(&ASYMPTOTIC_CONSTANT));
    assert!(close(cond_asymptotic(0.01).unwrap(), 58.46, 0.01));
    assert!(cond_asymptotic(0.5).is_err());
}

#[test]
fn discrete_condition_matches_dense_operators() {
    let n = 8;
    let a = periodic_laplacian(n, 3, ISO).unwrap();
    let b = hssor_dense(&a).unwrap();
    let ad = a.to_csr().to_dense();
    let bn = DMatrix::from_row_slice(b.nrows(), b.ncols(), b.as_slice());
    let an = DMatrix::from_row_slice(ad.nrows(), ad.ncols(), ad.as_slice());
    // B is SPD, so B⁻¹A has the spectrum of L⁻¹AL⁻ᵀ with B = LLᵀ.
    let bs = (&bn + bn.transpose()) * 0.5;
    let l = bs.cholesky().unwrap().l();
    let y = l.solve_lower_triangular(&an).unwrap();
    let c = l.solve_lower_triangular(&y.transpose()).unwrap();
    let c = (&c + c.transpose()) * 0.5;
    let mut re: Vec<f64> = c
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .filter(|r| r.abs() > 1e-10)
        .collect();
    re.sort_by(f64::total_cmp);
    assert_eq!(re.len(), n * n * n - 1);
    let dense = re.last().unwrap() / re[0];
    let symbol = cond_discrete(n, 3, ISO, AnalysisMode::Exact, Convention::Circulant).unwrap();
    assert!(
        ((dense - symbol) / symbol).abs() <= 1e-8,
        "{dense} vs {symbol}"
    );
}

#[test]
fn level_symbols_match_circulant_operators() {
    // T and P levels of the 3D chain are the 1D and 2D factorizations with
    // the 3D diagonal.
    let n = 8;
    for dim in [1, 2] {
        let mut dims = [1; 3];
        dims[..dim].iter_mut().for_each(|d| *d = n);
        let mut s = StencilMatrix::zeros(dims, dim, true).unwrap();
        for p in 0..s.len() {
            s.set(p, Band::Center, 6.0).unwrap();
            for axis in 0..dim {
                s.set(p, Band::lower(axis), -1.0).unwrap();
                s.set(p, Band::upper(axis), -1.0).unwrap();
            }
        }
        let b = hssor_dense(&s).unwrap();
        for s_ in 0..n {
            for t in 0..if dim == 2 { n } else { 1 } {
                let m2 = FourierMode::new([s_, t, 0], n, dim, Convention::Circulant).unwrap();
                let m3 = FourierMode::new([s_, t, 0], n, 3, Convention::Circulant).unwrap();
                let c = SymbolChain::evaluate(&m3, ISO, AnalysisMode::Exact).unwrap();
                let expect = if dim == 1 { c.lam_t } else { c.lam_p };
                let v = fourier_vector(&m2, n).unwrap();
                let res = verify_eigenpair(|x, y| y.copy_from_slice(&b.matvec(x)), &v, expect);
                assert!(res <= 1e-8, "dim {dim} mode ({s_},{t}): {res}");
            }
        }
    }
}

#[test]
fn fourier_vectors() {
    let n = 8;
    let z = FourierMode::new([0, 0, 0], n, 3, Convention::Circulant).unwrap();
    let v0 = fourier_vector(&z, n).unwrap();
    assert!(v0.iter().all(|c| (c - v0[0]).norm() < 1e-15));
    let modes = [[1, 0, 0], [0, 3, 5], [7, 7, 7], [4, 4, 4]];
    for (i, a) in modes.iter().enumerate() {
        let va = fourier_vector(
            &FourierMode::new(*a, n, 3, Convention::Circulant).unwrap(),
            n,
        )
        .unwrap();
        assert!((va.iter().map(|c| c.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-13);
        for b in &modes[i + 1..] {
            let vb = fourier_vector(
                &FourierMode::new(*b, n, 3, Convention::Circulant).unwrap(),
                n,
            )
            .unwrap();
            let ip: num_complex::Complex64 = va.iter().zip(&vb).map(|(x, y)| x.conj() * y).sum();
            assert!(ip.norm() < 1e-13);
        }
    }
    let p = FourierMode::new([1, 1, 1], n, 3, Convention::Paper).unwrap();
    assert!(fourier_vector(&p, n).is_err());
}

#[test]
fn operator_eigenpairs() {
    let n = 8;
    let rep = verify_symbols(n, 3, ISO).unwrap();
    assert_eq!(rep.modes, 512);
    assert!(rep.max_residual_a <= 1e-12);
    assert!(rep.max_residual_b <= 1e-10);
    let m = FourierMode::new([2, 5, 1], n, 3, Convention::Circulant).unwrap();
    let v = fourier_vector(&m, n).unwrap();
    assert_eq!(verify_eigenpair(|x, y| y.copy_from_slice(x), &v, 1.0), 0.0);
}

#[test]
fn anisotropic_operator_eigenpairs() {
    let rep = verify_symbols(6, 3, [1.0, 0.1, 3.0]).unwrap();
    assert!(rep.max_residual_a <= 1e-12);
    assert!(rep.max_residual_b <= 1e-10);
}
