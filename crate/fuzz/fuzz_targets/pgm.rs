#![no_main]

use libfuzzer_sys::fuzz_target;
use qcaps::reconstruction::decode_pgm;

fuzz_target!(|data: &[u8]| {
    if let Ok(img) = decode_pgm(data) {
        assert_eq!(img.pixels.len(), img.width * img.height);
        assert!(img.pixels.iter().all(|p| (0.0..=1.0).contains(p)));
    }
});
