#![no_main]

use hssor::problems::{build_operator, GridSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = GridSpec::from_json(text) else {
        return;
    };
    assert_eq!(GridSpec::from_json(&spec.to_json()).unwrap(), spec);
    if spec.len() <= 4096 {
        let _ = build_operator(&spec);
    }
});
