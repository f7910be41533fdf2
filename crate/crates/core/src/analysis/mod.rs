//! Exponent estimates and inequality certificates.

mod presets;
mod regression;
mod spectrum;
mod verify;

pub use presets::{pow2_meshes, proof_sequence_meshes, PROOF_SEQUENCE_MAX};
pub use regression::{
    fit_box_dimension, fit_box_dimension_with, ols, BoxFit, LinearFit, ScalingSample, DEFAULT_MIN_MESH_RATIO,
};
pub use spectrum::{
    estimate_spectrum, fit_spectrum, spectrum_mesh, spectrum_window, theoretical_spectrum, window_side, SpectrumPoint,
    WindowSample, SPECTRUM_COST_GUARD,
};
pub use verify::{
    lower_bound_strip, power_range, verify_chung_erdos_chain, verify_duffin_schaeffer, verify_local_ds,
    verify_strip_lemma, verify_strip_lemma_with, ChainReport, ChainRow, OverlapReport, StripLemmaReport,
    StripLowerBound, StripWitness, DEFAULT_STRIP_EPSILON,
};
