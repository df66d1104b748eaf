//! Local invariants of `p`-isogenous elliptic curves over the rationals.
//!
//! The crate computes, for a pair of curves linked by a rational isogeny of
//! prime degree, the minimal discriminant, Kodaira symbol, conductor exponent,
//! Tamagawa number and the valuation of the differential pullback scalar at
//! every relevant prime. A separate predictor derives the same quantities from
//! the reduction type of the source curve alone, and [`predict::verify_pair`]
//! diffs the two. The [`periods`] module handles the archimedean side.
//!
//! Everything is exact except [`periods`], which runs on a small
//! multiprecision float with explicit precision. The crate is `no_std` and
//! only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod arith;
pub mod curves;
mod error;
pub mod isogeny;
pub mod localdata;
pub mod periods;
pub mod predict;

pub use arith::{Integer, Rational, Valuation};
pub use curves::{Curve, ModelMap};
pub use localdata::{KodairaSymbol, LocalInvariants, ReductionClass};
pub use error::{Error, Result};


