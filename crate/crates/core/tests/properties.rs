use hssor::fourier::{x_plus_inv, AnalysisMode, FourierMode, SymbolChain};
use hssor::precond::{hssor_apply, hssor_multiply};
use hssor::problems::{Boundary, Coefficients, GridSpec};
use hssor::sparse::{parse_matrix_market, to_matrix_market_string, Band, CsrMatrix, StencilMatrix};
use proptest::prelude::*;

/// Dirichlet stencil with random negative couplings, mirrored so it is
/// symmetric, and a dominant diagonal.
fn random_stencil(dims: [usize; 3], dim: usize, seed: &[f64]) -> StencilMatrix {
    let mut a = StencilMatrix::zeros(dims, dim, false).unwrap();
    let mut k = 0;
    for p in 0..a.len() {
        for axis in 0..dim {
            if let Some(q) = a.neighbor(p, Band::upper(axis)) {
                let w = -(0.1 + seed[k % seed.len()]);
                k += 1;
                a.set(p, Band::upper(axis), w).unwrap();
                a.set(q, Band::lower(axis), w).unwrap();
            }
        }
    }
    for p in 0..a.len() {
        let off: f64 = Band::ALL
            .iter()
            .filter(|&&b| b != Band::Center)
            .map(|&b| a.band(b)[p].abs())
            .sum();
        a.set(p, Band::Center, off + 0.5).unwrap();
    }
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn x_plus_inv_increases(x in 1.0f64..1e6, dx in 1e-6f64..10.0) {
        prop_assert!(x_plus_inv(x + dx) > x_plus_inv(x));
    }

    #[test]
    fn symbol_identity_random(t in 0.0f64..6.3, p in 0.0f64..6.3, x in 0.0f64..6.3,
                              l1 in 0.01f64..5.0, l2 in 0.01f64..5.0, l3 in 0.01f64..5.0) {
        let m = FourierMode::from_angles([t, p, x], 3).unwrap();
        for mode in [AnalysisMode::Paper, AnalysisMode::Exact] {
            let c = SymbolChain::evaluate(&m, [l1, l2, l3], mode).unwrap();
            prop_assert!((c.lam_b - c.lam_a - c.lam_b_minus_a).abs() <= 1e-13 * c.lam_b.max(1.0));
            prop_assert!(c.lam_b_minus_a > 0.0);
        }
    }

    #[test]
    fn stencil_spmv_linear_and_matches_csr(seed in prop::collection::vec(0.0f64..2.0, 8..32),
                                           x in prop::collection::vec(-1.0f64..1.0, 60),
                                           y in prop::collection::vec(-1.0f64..1.0, 60),
                                           al in -2.0f64..2.0) {
        let a = random_stencil([5, 4, 3], 3, &seed);
        let csr = a.to_csr();
        prop_assert!(a.is_symmetric());
        prop_assert_eq!(a.spmv(&x).unwrap(), csr.spmv(&x).unwrap());
        let mix: Vec<f64> = x.iter().zip(&y).map(|(u, v)| al * u + v).collect();
        let am = a.spmv(&mix).unwrap();
        let (ax, ay) = (a.spmv(&x).unwrap(), a.spmv(&y).unwrap());
        for i in 0..60 {
            prop_assert!((am[i] - (al * ax[i] + ay[i])).abs() <= 1e-12);
        }
    }

    #[test]
    fn hssor_inverse_pair_random_coefficients(seed in prop::collection::vec(0.0f64..2.0, 8..32),
                                              r in prop::collection::vec(-1.0f64..1.0, 48)) {
        let a = random_stencil([4, 4, 3], 3, &seed);
        let back = hssor_apply(&a, &hssor_multiply(&a, &r).unwrap()).unwrap();
        let scale = r.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        for i in 0..48 {
            prop_assert!((back[i] - r[i]).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn matrix_market_round_trip(entries in prop::collection::vec((0usize..12, 0usize..9, -1e6f64..1e6), 0..60)) {
        let a = CsrMatrix::from_triplets(12, 9, &entries).unwrap();
        let back = parse_matrix_market(&to_matrix_market_string(&a)).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn grid_spec_json_round_trip(dim in 1usize..=3, n in 3usize..40, l1 in 0.0f64..4.0, l2 in 0.0f64..4.0,
                                 periodic in any::<bool>(), dc1 in any::<bool>()) {
        let boundary = if periodic { Boundary::Periodic } else { Boundary::Dirichlet };
        let coeff = if dc1 { Coefficients::Dc1 } else { Coefficients::Constant { l1, l2, l3: 1.0 } };
        if let Ok(g) = GridSpec::new(dim, n, boundary, coeff) {
            prop_assert_eq!(GridSpec::from_json(&g.to_json()).unwrap(), g);
        }
    }

    #[test]
    fn matrix_market_parser_never_panics(text in "\\PC{0,200}") {
        let _ = parse_matrix_market(&text);
    }

    #[test]
    fn partition_parser_never_panics(text in "[0-9 \\n#a-z-]{0,80}") {
        let _ = hssor::multigrid::parse_partition(&text);
    }
}
