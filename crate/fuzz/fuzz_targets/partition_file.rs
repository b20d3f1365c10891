#![no_main]

use hssor::multigrid::{parse_partition, AggregateMap};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(part) = parse_partition(text) {
        if let Ok(agg) = AggregateMap::from_part(part) {
            assert_eq!(agg.sizes().iter().sum::<usize>(), agg.n_fine());
        }
    }
});
