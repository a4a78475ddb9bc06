//! Exact-arithmetic toolkit for building and verifying dual multiwavelet
//! frames from trigonometric polynomial masks.
//!
//! The coefficient field is the Gaussian rationals Q(i); every mask is a
//! Laurent polynomial in `z = e^{-2 pi i gamma}`, so all filter-bank
//! identities are checked exactly, with no floating point involved.
//! Floating point only enters in [`render`], which approximates the
//! scaling functions on a dyadic grid and validates frame reconstruction
//! numerically.

pub mod extension;
pub mod gaussian;
pub mod laurent;
pub mod masks;
pub mod render;

pub use extension::{
    b2_three_term_criterion, b2_wavelet_mask, b2l_demo, condition_ii_holds,
    criterion_matches_condition_ii, demo_names, demo_registry, extend_one_pair, extend_two_pairs,
    mep_verify, realize_real_pair, run_demo, Demo, DemoOutcome, DemoTag, ExtensionArtifacts,
    ExtensionError, ExtensionOutcome, MaskSystem, Verdict, VerifyReport,
};
pub use gaussian::{GaussianRational, ParseCoeffError, Rational};
pub use laurent::{AlgebraError, EvalPoint, LaurentPoly};
pub use masks::{
    bspline_mask, check_setup, compute_m_alpha_beta, extract_lambdas, factor_cos, factor_sin,
    is_bessel_mask, mask_from_time_coeffs, necessary_conditions, time_coeffs_from_mask, Mask,
    MaskError, NecessaryReport, TimeCoeffs,
};
pub use render::{
    bspline_exact, cascade, frame_reconstruct, l2_norm, l2_relative_error, mep_residual_float,
    wavelet_from_mask, CascadeOutcome, FrameSpec, RenderError, SampledFunction, DEFAULT_LEVEL,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};
