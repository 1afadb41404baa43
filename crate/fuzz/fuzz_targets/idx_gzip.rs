#![no_main]

use libfuzzer_sys::fuzz_target;
use qcaps::datasets::{maybe_gunzip, parse_idx_images, parse_idx_labels};

fuzz_target!(|data: &[u8]| {
    if let Ok(raw) = maybe_gunzip(data.to_vec()) {
        let _ = parse_idx_images(&raw);
        let _ = parse_idx_labels(&raw);
    }
});
