//! Exact p-adic harmonic analysis on locally constant functions.
//!
//! Everything here is `no_std` + `alloc`: arithmetic is exact over the
//! rationals, and real powers go through `libm`.
#![no_std]

extern crate alloc;

pub mod error;
pub mod funcs;
pub mod norms;
pub mod numeric;
pub mod operators;
pub mod padic;
pub mod verify;

pub use error::{Error, Result};
pub use funcs::{BallWeight, CommutatorSymbols, HomogeneousKernel, StepFunction};
pub use numeric::{Rational, Real};
pub use padic::{Ball, BallRelation, Context, PAdicPoint, Prime, Sphere};

/// Crate version.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
