#![no_main]

use libfuzzer_sys::fuzz_target;
use qcaps::datasets::{parse_idx_images, serialize_idx_images};

fuzz_target!(|data: &[u8]| {
    if let Ok(images) = parse_idx_images(data) {
        assert_eq!(images.pixels.len(), images.count() * images.rows * images.cols);
        let again = serialize_idx_images(&images);
        assert_eq!(parse_idx_images(&again).unwrap(), images);
    }
});
