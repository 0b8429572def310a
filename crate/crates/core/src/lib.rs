//! Exact symbolic calculator for differential operators over the field of
//! rational functions: the Ore ring F⟨∂⟩, its fraction field F(∂) of
//! rational pseudo-differential operators, the ring F⟨∂⁻¹⟩ of integration
//! operators, truncated formal pseudo-differential series F((∂⁻¹)), and a
//! trace laboratory that computes the 2-cocycle of the Lie algebra of
//! differential operators on the circle.
//!
//! All arithmetic is exact: coefficients are rational functions over
//! arbitrary-precision rationals, and no operation ever rounds.

pub mod cocycle;
pub mod diffop;
mod error;
pub mod expr;
pub mod field;
pub mod formal;
pub mod fraction;
pub mod intop;

pub use error::{Error, Result};
