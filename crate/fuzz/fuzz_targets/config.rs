#![no_main]

use libfuzzer_sys::fuzz_target;
use qcaps_cli::config::parse_config;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(map) = parse_config(text) {
            for key in map.keys() {
                assert!(map.raw(key).is_some());
            }
        }
    }
});
