//! Digit images and spin-chain ground states as labelled quantum inputs.

mod dataset;
mod idx;
mod image;
mod spin;

pub use dataset::{
    build_mnist_split, build_mnist_subset, decode_cache, encode_cache, sample_spt_dataset,
    CacheRecord, Dataset, LabeledState, Split, CACHE_MAGIC, CACHE_VERSION,
};
pub use idx::{
    maybe_gunzip, parse_idx, parse_idx_images, parse_idx_labels, read_idx_files,
    serialize_idx_images, serialize_idx_labels, IdxDataset, IdxImages, IMAGE_MAGIC, LABEL_MAGIC,
};
pub use image::{
    downscale_16, normalize_pixels, resize_bilinear, ImageSample, PIXELS, SOURCE_SIDE, TARGET_SIDE,
};
pub use spin::{
    build_cluster_ising, build_cluster_ising_capped, ground_state, ground_state_with_energy,
    phase_label, sample_alphas, sample_spin_chains, spin_sample, GroundState, SpinChainSample,
    DEFAULT_MAX_SPINS, DEGENERACY_GAP,
};
