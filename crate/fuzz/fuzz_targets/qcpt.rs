#![no_main]

use libfuzzer_sys::fuzz_target;
use qcaps::network::{decode_checkpoint, encode_checkpoint};

fuzz_target!(|data: &[u8]| {
    if let Ok(ck) = decode_checkpoint(data) {
        let bytes = encode_checkpoint(&ck);
        assert_eq!(encode_checkpoint(&decode_checkpoint(&bytes).unwrap()), bytes);
    }
});
