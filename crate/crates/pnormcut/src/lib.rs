//! Encoding max-cut instances into matrix p-norm problems.
//!
//! The library builds the stacked gadget/incidence matrices whose induced
//! p-norm encodes the maximum cut of a graph, computes exact mixed (∞,p)
//! norms by hypercube enumeration, estimates p→p operator norms by
//! multistart nonlinear power iteration, and decodes cut values back from
//! norm values with enough precision bits to survive the cancellation in
//! the decode formula `maxcut ≈ (n/2^p)·f^p − n·α^p`.
//!
//! High-precision scalars are [`rug::Float`] values (MPFR); exact matrix
//! entries and gadget weights are [`rug::Rational`].

pub mod error;
pub mod gadget;
pub mod graph;
pub mod matrix;
pub mod norms;
pub mod reduction;
pub mod scalar;
pub mod verify;

pub use error::Error;
pub use gadget::{deficiency_bound, gadget_matrix, gadget_value, pair_inequality_terms};
pub use graph::{cut_value, incidence_matrix, maxcut_bruteforce, parse_graph, CutResult, Graph, SignVector};
pub use matrix::DenseMatrix;
pub use norms::{
    dual_norm_pair, infinity_p_norm_exact, l1_norm, linf_norm, mixed_pq_sign_maximizer_check,
    p_norm_ascent, p_norm_sign_search, rayleigh, AscentConfig, MixedCheckReport, NormEstimate,
    NormMethod,
};
pub use reduction::{
    build_z, build_zdoublestar, build_zstar, build_ztilde, decode_maxcut, decode_maxcut_from_inftyp,
    default_alpha, hp_polish_witness, linf_distance_to_signs, matrix_power_sum, pad_square,
    required_epsilon_inftyp, required_epsilon_pnorm, round_to_signs, solve_maxcut_via_pnorm,
    BlockSpec, DecodeResult, MatrixRepr, PipelineResult, Provenance, ReductionInstance,
    DEFAULT_ROW_LIMIT,
};
pub use scalar::{decode_precision_bits, pow_abs, PExponent, DEFAULT_SEARCH_BITS};
pub use verify::{run_suite, CheckReport, SUITE_NAMES};

pub use rug::ops::Pow;
pub use rug::{Float, Integer, Rational};

/// Default cap on hypercube enumeration (2^(n-1) candidates).
pub const DEFAULT_ENUM_LIMIT: usize = 24;
