//! Surface-group presentations, words, the word problem and homomorphisms.
//!
//! Words are sequences of signed generators `a1 b2^-1 …` in the standard
//! genus-`g` presentation with the single relator `[a₁,b₁]⋯[a_g,b_g]`.
//! Triviality is decided by Dehn's algorithm.

mod dehn;
mod hom;
mod scan;
mod word;

pub use dehn::{dehn_reduce, DehnRewriter};
pub use hom::{mk_doubling, mk_pinch, slit_word, HomError, HomValidation, SurfaceHom};
pub use scan::{
    enumerate_words, is_elementary, is_elementary_with, mk_handle_attach, reduced_word_count,
    scan_classification, ClassCounts, ElementaryCertificate, HandleAttachment, ScanHit,
    ScanOptions, ScanReport, WordEnumerator, KERNEL_TOLERANCE, WITNESS_CAP,
};
pub use word::{free_reduce, GroupWord, Letter, SurfacePresentation, WordError};
