//! Exact Haar integration, the truncated singular integrals `T_k`, their
//! limit `T`, commutators, and the Riesz potential.

mod riesz;
mod singular;
mod window;

pub use riesz::{gamma_n, riesz, RieszOrder};
pub use singular::{
    apply_commutator, apply_t, apply_t_unchecked, apply_tk, commutator_integrand, local_constancy_scale,
    TruncationIndex,
};
pub use window::{apply_commutator_as_step, apply_t_as_step, apply_tk_as_step, riesz_as_step, Windowed};

use num_traits::Zero;

use crate::error::{param, Result};
use crate::funcs::{HomogeneousKernel, StepFunction};
use crate::numeric::{pow_p, Rational};
use crate::padic::{Region, Sphere};

/// `∫ f dx`.
pub fn integrate(f: &StepFunction) -> Rational {
    f.integral()
}

/// `∫_R f dx` for a ball, sphere or annulus.
pub fn integrate_region(f: &StepFunction, region: &Region) -> Result<Rational> {
    f.context().check_same(region.context())?;
    let (outer, hole) = region.as_difference();
    let mut total = f.integral_over(&outer);
    if let Some(h) = hole {
        total -= f.integral_over(&h);
    }
    Ok(total)
}

/// `∫_{p^a < |y| <= p^b} Ω(y) |y|^{-n} dy`, summed sphere by sphere.
pub fn annulus_kernel_integral(kernel: &HomogeneousKernel, a: i32, b: i32) -> Result<Rational> {
    if a >= b {
        return Err(param("annulus", alloc::format!("inner exponent {a} is not below outer {b}")));
    }
    let ctx = kernel.context();
    let n = ctx.dim() as i64;
    let mut total = Rational::zero();
    for j in a + 1..=b {
        let shell: Rational = Sphere::centered(ctx, j)
            .cells(j - 1)?
            .iter()
            .map(|c| kernel.integral_over(c))
            .sum();
        total += shell * pow_p(ctx.p(), -n * j as i64);
    }
    Ok(total)
}
