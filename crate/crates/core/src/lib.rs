//! Restricted sumsets `h^A` in cyclic groups `Z_n`.
//!
//! The crate provides exact kernels (bit-parallel sumsets, representation
//! counts by convolution), exponential-sum diagnostics, and a family of
//! exhaustive and seeded-random verifiers that check known covering results
//! for restricted sumsets at desk scale.

pub mod error;
pub mod expsum;
pub mod report;
pub mod reps;
pub mod sample;
pub mod sumset;
pub mod verify;
pub mod zn;

pub use error::{Error, Result};
pub use zn::{enumerate_subsets, ExhaustiveLimits, Modulus, ResidueSet};
