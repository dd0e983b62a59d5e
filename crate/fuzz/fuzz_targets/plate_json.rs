#![no_main]

use libfuzzer_sys::fuzz_target;
use sectordim::{mode_spectrum, SectorPlate};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(plate) = SectorPlate::from_json(text) else { return };
    let again = SectorPlate::from_json(&plate.to_json()).expect("serialized plate must parse");
    assert!(again.same_as(&plate));
    let power = mode_spectrum(&plate, 8).total_power();
    assert!((power - 1.0).abs() < 1e-9);
});
