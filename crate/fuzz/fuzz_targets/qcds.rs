#![no_main]

use libfuzzer_sys::fuzz_target;
use qcaps::datasets::{decode_cache, encode_cache, Dataset, ImageSample, SpinChainSample};

fuzz_target!(|data: &[u8]| {
    if let Ok(ds) = decode_cache::<ImageSample>(data) {
        let again: Dataset<ImageSample> = decode_cache(&encode_cache(&ds)).unwrap();
        assert_eq!(again.samples.len(), ds.samples.len());
    }
    if let Ok(ds) = decode_cache::<SpinChainSample>(data) {
        let again: Dataset<SpinChainSample> = decode_cache(&encode_cache(&ds)).unwrap();
        assert_eq!(again.samples.len(), ds.samples.len());
    }
});
