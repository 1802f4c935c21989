#![no_main]

use antichain::search::parse_level_spec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|bytes: &[u8]| {
    if let Ok(spec) = std::str::from_utf8(bytes) {
        if let Ok(levels) = parse_level_spec(spec) {
            assert!(levels.windows(2).all(|w| w[0] < w[1]));
        }
    }
});
