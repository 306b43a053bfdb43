//! Tame translation surfaces with a prescribed Veech group.
//!
//! Given a finitely generated subgroup `G < GL⁺(2, ℚ)` without contracting
//! elements, this crate builds the assembled surface out of affine copies of a
//! decorated Loch Ness monster (one copy per element of a Cayley ball),
//! checks its flat-geometric invariants and counts its ends at finite
//! truncation.

pub mod group;
pub mod io;
pub mod linalg;
pub mod psv;
pub mod scalar;
pub mod surface;

#[cfg(test)]
mod testutil;

pub use scalar::{Rational, Scalar};

pub type Vec2Q = linalg::Vec2<Rational>;
pub type Vec2F = linalg::Vec2<f64>;
pub type Mat2Q = linalg::Mat2<Rational>;
pub type Mat2F = linalg::Mat2<f64>;
