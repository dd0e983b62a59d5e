#![no_main]

use libfuzzer_sys::fuzz_target;
use sectordim::dimension::{parse_weights, schmidt_number_from_weights};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(weights) = parse_weights(text) else { return };
    if let Ok(k) = schmidt_number_from_weights(&weights) {
        assert!(k >= 1.0 - 1e-9 && k <= weights.len() as f64 + 1e-9);
    }
});
