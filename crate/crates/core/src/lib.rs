//! Osculating-space subspace codes of Veronese varieties over finite fields.
//!
//! The k-osculating space of the d-uple Veronese embedding of P^n at the
//! point given by a linear form L is the space of forms `L^(d-k) F` with F of
//! degree k. Taking one such space per rational point of P^n gives a
//! constant-dimension, equidistant subspace code for random linear network
//! coding. This crate builds those codes exactly, checks their parameters,
//! and decodes them over a simulated operator channel.

pub mod channel;
pub mod code;
pub mod format;
pub mod gf;
pub mod linalg;
pub mod veronese;

pub use channel::{md_decode, simulate, transmit, ChannelConfig, ChannelOutcome, Decoded, SimulationStats};
pub use code::{build_code, code_params, predicted_params, verify_theorem, Code, CodeParams, TheoremReport};
pub use gf::{Field, FieldElem, GfError};
pub use linalg::{intersect_oracle, subspace_distance, MatrixFq, Subspace};
pub use veronese::{osculating_cone, veronese_point, DensePoly, LinearForm, MonomialBasis, MultiIndex};
