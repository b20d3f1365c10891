use hssor::problems::{build_dc1, build_laplacian, GridSpec};
use hssor::sparse::{
    assemble_dense, parse_matrix_market, split_offsets, to_matrix_market_string, tri_solve,
    CsrMatrix, DiagKind, LinearOperator, Triangle,
};
use hssor::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn spmv_identity_and_laplacian() {
    let i = CsrMatrix::identity(3);
    assert_eq!(i.spmv(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    let t = CsrMatrix::tridiagonal(3, -1.0, 2.0, -1.0);
    assert_eq!(t.spmv(&[1.0, 1.0, 1.0]).unwrap(), vec![1.0, 0.0, 1.0]);
    assert!(matches!(
        t.spmv(&[1.0]),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn stencil_columns_match_dense_assembly() {
    let a = build_laplacian(&GridSpec::isotropic(3, 3).unwrap()).unwrap();
    let csr = a.to_csr();
    let dense = assemble_dense(a.len(), |x, y| a.spmv_into(x, y)).unwrap();
    let mut e1 = vec![0.0; a.len()];
    e1[1] = 1.0;
    let col = a.spmv(&e1).unwrap();
    assert_eq!(col, dense.column(1));
    assert_eq!(csr.to_dense(), dense);
}

#[test]
fn stencil_and_csr_spmv_agree_bitwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in [
        GridSpec::isotropic(3, 5).unwrap(),
        GridSpec::dc1(2, 9).unwrap(),
        GridSpec::dc1(3, 6).unwrap(),
    ] {
        let a = hssor::problems::build_operator(&spec).unwrap();
        let x: Vec<f64> = (0..a.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        assert_eq!(a.spmv(&x).unwrap(), a.to_csr().spmv(&x).unwrap());
    }
}

#[test]
fn triangular_solves() {
    let l = CsrMatrix::from_triplets(2, 2, &[(0, 0, 2.0), (1, 0, -1.0), (1, 1, 3.0)]).unwrap();
    assert_eq!(
        tri_solve(&l, &[2.0, 2.0], Triangle::Lower, DiagKind::Stored).unwrap(),
        vec![1.0, 1.0]
    );
    let i = CsrMatrix::identity(4);
    let b = [3.0, -1.0, 2.5, 0.0];
    assert_eq!(
        tri_solve(&i, &b, Triangle::Lower, DiagKind::Unit).unwrap(),
        b.to_vec()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 50;
    let mut trip = Vec::new();
    for r in 0..n {
        for c in 0..r {
            if rng.gen_bool(0.3) {
                trip.push((r, c, rng.gen_range(-1.0..1.0) / n as f64));
            }
        }
        trip.push((r, r, 1.0 + rng.gen::<f64>()));
    }
    let a = CsrMatrix::from_triplets(n, n, &trip).unwrap();
    let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let x = tri_solve(&a, &b, Triangle::Lower, DiagKind::Stored).unwrap();
    let ax = a.spmv(&x).unwrap();
    let num: f64 = ax
        .iter()
        .zip(&b)
        .map(|(p, q)| (p - q).powi(2))
        .sum::<f64>()
        .sqrt();
    let den: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!(num / den <= 1e-13);
}

#[test]
fn triangular_solve_rejects_zero_diagonal() {
    let l = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 0, 1.0)]).unwrap();
    assert!(matches!(
        tri_solve(&l, &[1.0, 1.0], Triangle::Lower, DiagKind::Stored),
        Err(Error::SingularFactor { row: 1 })
    ));
}

#[test]
fn offset_split_reassembles_exactly() {
    let a = build_laplacian(&GridSpec::isotropic(3, 4).unwrap()).unwrap();
    let s = split_offsets(&a);
    assert!(s.diag.iter().all(|&d| d == 6.0));
    assert_eq!(s.reassemble(), a);

    let one = build_laplacian(&GridSpec::isotropic(1, 6).unwrap()).unwrap();
    let s1 = split_offsets(&one);
    assert!(s1.is_empty_level(1) && s1.is_empty_level(2));
    assert!(!s1.is_empty_level(0));

    let dc = build_dc1(&GridSpec::dc1(2, 10).unwrap()).unwrap();
    assert_eq!(split_offsets(&dc).reassemble(), dc);
}

#[test]
fn dense_assembly_guard() {
    let d = assemble_dense(4, |x, y| y.copy_from_slice(x)).unwrap();
    assert_eq!(d, hssor::sparse::DenseMatrix::identity(4));
    assert!(matches!(
        assemble_dense(5001, |x, y| y.copy_from_slice(x)),
        Err(Error::TooLarge { .. })
    ));
}

#[test]
fn hssor_operator_is_symmetric_in_1d() {
    let a = build_laplacian(&GridSpec::isotropic(1, 8).unwrap()).unwrap();
    let h = hssor::precond::Hssor::new(a).unwrap();
    let b = assemble_dense(8, |x, y| h.multiply(x, y)).unwrap();
    assert_eq!(b.asymmetry(), 0.0);
}

#[test]
fn matrix_market_round_trip() {
    let a = build_dc1(&GridSpec::dc1(2, 6).unwrap()).unwrap().to_csr();
    let text = to_matrix_market_string(&a);
    assert_eq!(parse_matrix_market(&text).unwrap(), a);
}

#[test]
fn csr_operator_dim() {
    let a = CsrMatrix::identity(5);
    assert_eq!(LinearOperator::dim(&a), 5);
}
