//! Exact arithmetic for quadratic fields `ℚ(√Δ)`: class groups via binary
//! quadratic forms, fundamental units, local Hilbert symbols and Tate groups,
//! the relative group `K₀` of the norm functor with its exact sequence, and the
//! Mayer–Vietoris maps on finite-support ideles.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod abelian;
pub mod arith;
pub mod classgroup;
pub mod error;
pub mod ideals;
pub mod knorm;
pub mod local;
pub mod mv;
pub mod quadfield;
pub mod units;

pub use error::{Error, Result};
pub use quadfield::{Discriminant, QuadNum, Rational};
