//! Dataset loading and featurization: IDX images, delimited text with TF-IDF,
//! and a synthetic redundant-blob generator for desk-scale experiments.

mod delimited;
mod idx;
mod synth;
mod tfidf;

pub use delimited::{load_delimited, DelimitedData};
pub use idx::{
    load_idx, load_idx_images, load_idx_labels, write_idx_images, write_idx_labels, IMAGES_MAGIC,
    LABELS_MAGIC,
};
pub use synth::{generate_synthetic, SynthConfig};
pub use tfidf::{fit_tfidf, transform_tfidf, TfidfConfig, TfidfModel};
