//! Decoding digit capsules back into images and probing them with unitary
//! perturbations.

mod decoder;
mod perturb;
mod pgm;
mod tomography;
mod train;

pub use decoder::{DecoderMLP, DecoderTrace, DEFAULT_DECODER_SIZES};
pub use perturb::{default_thetas, perturb_capsule, PerturbationKind};
pub use pgm::{decode_pgm, encode_pgm, pgm_filename, write_pgm, Greymap};
pub use tomography::{inverse_tomography, pauli_strings, tomography_vector};
pub use train::{
    evaluate_reconstruction, most_active, perturbation_sweep, ReconstructionHistory,
    ReconstructionModel, ReconstructionOptions, ReconstructionRow, ReconstructionTrainer,
};
