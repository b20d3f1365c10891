#![no_main]

use hssor::sparse::{parse_matrix_market, read_matrix_market_with_limit, to_matrix_market_string};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Small dimension cap keeps allocation bounded.
    let Ok(a) = read_matrix_market_with_limit(data, 1 << 12) else {
        return;
    };
    let back = parse_matrix_market(&to_matrix_market_string(&a)).expect("writer output must parse");
    assert_eq!(
        (back.nrows(), back.ncols(), back.nnz()),
        (a.nrows(), a.ncols(), a.nnz())
    );
});
