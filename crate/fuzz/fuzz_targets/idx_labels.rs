#![no_main]

use libfuzzer_sys::fuzz_target;
use qcaps::datasets::{parse_idx_labels, serialize_idx_labels};

fuzz_target!(|data: &[u8]| {
    if let Ok(labels) = parse_idx_labels(data) {
        assert_eq!(parse_idx_labels(&serialize_idx_labels(&labels)).unwrap(), labels);
    }
});
