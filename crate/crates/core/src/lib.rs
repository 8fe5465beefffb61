//! PRNG auditing: exact GF(2) linear algebra, bit-exact generators, a
//! linearity-oriented statistical battery and equidistribution analysis.

pub mod battery;
pub mod equidist;
pub mod error;
pub mod generators;
pub mod gf2;
pub mod par;

pub use error::{Error, Result};
