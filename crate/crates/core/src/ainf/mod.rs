//! A∞ structures as Maurer–Cartan elements of the convolution pre-Lie
//! algebra of multilinear maps on the suspension `sV`, with their gauge
//! action, the homotopy transfer along a contraction, and gauge triviality.
//!
//! Every component is a map `(sV)^{⊗n} -> sV`. Structures have degree `-1`,
//! so the Maurer–Cartan equation reads `α ⋆ α = 0`.

mod conv;
mod htt;
pub mod json;
mod multiop;
mod tensor;

pub use conv::{ArityResidual, ConvElement};
pub use htt::{find_trivializer, gauge_act, Check, GaugeTriviality, Setting, Transfer, Trivializer};
pub use multiop::{MultiOp, Space};
pub use tensor::{
    binomial_identities_check, check_homotopy_absorption, check_homotopy_splitting, contraction_factors,
    sym_homotopy, Factor, TensorOp,
};
