//! Exact arithmetic and ultrametric geometry of `Q_p^n`.

mod ball;
mod point;
mod prime;

pub use ball::{common_refinement, ultrametric_compare, Annulus, Ball, BallRelation, Region, Sphere};
pub use point::{abs_p, valuation, PAdicPoint, Valuation};
pub use prime::{Prime, MAX_PRIME};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 4;
pub const MAX_GAMMA: i32 = 64;

/// The `(p, n)` pair shared by every object of one computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    prime: Prime,
    dim: usize,
}

impl Context {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        let prime = Prime::new(p)?;
        Self::with_prime(prime, n)
    }

    pub fn with_prime(prime: Prime, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::DimensionOutOfRange(n));
        }
        Ok(Context { prime, dim: n })
    }

    pub(crate) fn from_parts(prime: Prime, dim: usize) -> Self {
        Context { prime, dim }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn p(&self) -> u32 {
        self.prime.get()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `p^n`, the branching factor of the ball tree.
    pub fn branching(&self) -> u64 {
        (self.p() as u64).pow(self.dim as u32)
    }

    pub(crate) fn check(&self, prime: Prime, dim: usize) -> Result<()> {
        if self.prime != prime || self.dim != dim {
            return Err(Error::ContextMismatch {
                expected_p: self.p(),
                expected_n: self.dim,
                found_p: prime.get(),
                found_n: dim,
            });
        }
        Ok(())
    }

    pub(crate) fn check_same(&self, other: Context) -> Result<()> {
        self.check(other.prime, other.dim)
    }
}

pub(crate) fn check_gamma(gamma: i64) -> Result<i32> {
    if gamma.abs() > MAX_GAMMA as i64 {
        return Err(Error::GammaOutOfRange(gamma));
    }
    Ok(gamma as i32)
}
