#![no_main]

use libfuzzer_sys::fuzz_target;
use sectordim::{fringe_dimension, visibility, Fringe};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(fringe) = Fringe::from_csv(text) else { return };
    if let Ok(d) = fringe_dimension(&fringe) {
        assert!(d >= 1.0 - 1e-9 || !d.is_finite());
    }
    let _ = visibility(&fringe);
});
