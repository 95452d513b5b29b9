//! Step functions, homogeneous kernels, ball weights and commutator symbols.

mod kernel;
pub mod random;
mod real;
mod step;
mod symbols;
mod weight;

pub use kernel::HomogeneousKernel;
pub use random::{random_kernel, random_step, RandomProfile};
pub use real::RealStep;
pub use step::{PointwiseOp, StepFunction};
pub use symbols::{CampanatoData, CommutatorSymbols};
pub use weight::{BallWeight, PowerLaw};
