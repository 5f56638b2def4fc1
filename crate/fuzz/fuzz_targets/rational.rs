#![no_main]

use libfuzzer_sys::fuzz_target;

use geoplan::rational::{parse_rat, rat_to_json, rat_from_json};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(r) = parse_rat(text) {
            // Round-trip through the JSON representation.
            let v = rat_to_json(&r);
            assert_eq!(rat_from_json(&v).unwrap(), r);
        }
    }
});
