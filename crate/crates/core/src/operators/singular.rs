use alloc::format;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::funcs::{CommutatorSymbols, HomogeneousKernel, StepFunction};
use crate::numeric::{pow_p, rat, render, Rational};
use crate::padic::{check_gamma, Ball, PAdicPoint};

/// Lower truncation `k`: `T_k` integrates over `|y|_p > p^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruncationIndex(i32);

impl TruncationIndex {
    pub fn new(k: i64) -> Result<Self> {
        Ok(TruncationIndex(check_gamma(k)?))
    }

    pub fn get(self) -> i32 {
        self.0
    }
}

/// Contribution of one cell `v·χ_C` to `T_k f(x)`; `k = None` is the limit.
///
/// For `x ∉ C` the distance `|x - z|` is a constant `p^{j0}` on `C`, so the
/// cell gives `v p^{-n j0} ∫_{x - C} Ω`. For `x ∈ C = B_γ(x)` it gives
/// `v Σ_{k<j<=γ} ∫_{S_0} Ω`, one unit-sphere integral per shell.
pub(crate) fn cell_term(kernel: &HomogeneousKernel, k: Option<i32>, x: &PAdicPoint, cell: &Ball, v: &Rational) -> Rational {
    let ctx = kernel.context();
    let diff = x.sub(cell.center());
    match diff.norm_exponent() {
        Some(j0) if j0 > cell.gamma() as i64 => {
            if k.is_some_and(|k| j0 <= k as i64) {
                return Rational::zero();
            }
            let image = Ball::canonical(cell.gamma(), &diff);
            v * pow_p(ctx.p(), -(ctx.dim() as i64) * j0) * kernel.integral_over(&image)
        }
        _ => match k {
            Some(k) => v * rat((cell.gamma() as i64 - k as i64).max(0)) * kernel.unit_sphere_integral(),
            None => Rational::zero(),
        },
    }
}

pub(crate) fn eval_truncated(kernel: &HomogeneousKernel, k: Option<i32>, f: &StepFunction, x: &PAdicPoint) -> Rational {
    f.cells().map(|(c, v)| cell_term(kernel, k, x, c, v)).sum()
}

/// `T_k f(x) = ∫_{|y|_p > p^k} f(x - y) Ω(y) |y|_p^{-n} dy`, exactly.
pub fn apply_tk(kernel: &HomogeneousKernel, k: TruncationIndex, f: &StepFunction, x: &PAdicPoint) -> Result<Rational> {
    let ctx = kernel.context();
    ctx.check_same(f.context())?;
    x.check_context(ctx)?;
    Ok(eval_truncated(kernel, Some(k.get()), f, x))
}

/// Largest `k` with `f(x - y) = f(x)` whenever `|y|_p <= p^k`; `None` for `f = 0`,
/// where every `k` qualifies.
pub fn local_constancy_scale(f: &StepFunction, x: &PAdicPoint) -> Option<i32> {
    if let Some((cell, _)) = f.cell_at(x) {
        return Some(cell.gamma());
    }
    f.cells()
        .filter_map(|(c, _)| x.distance_exponent(c.center()))
        .min()
        .map(|d| d as i32 - 1)
}

/// `T f(x) = lim_{k → -∞} T_k f(x)`, evaluated at the local-constancy scale
/// `k*` after checking that `T_{k*}` and `T_{k*-1}` agree.
pub fn apply_t(kernel: &HomogeneousKernel, f: &StepFunction, x: &PAdicPoint) -> Result<Rational> {
    let ctx = kernel.context();
    ctx.check_same(f.context())?;
    x.check_context(ctx)?;
    let Some(k_star) = local_constancy_scale(f, x) else {
        return Ok(Rational::zero());
    };
    let k = check_gamma(k_star as i64)?;
    let km = check_gamma(k_star as i64 - 1)?;
    let at_k = eval_truncated(kernel, Some(k), f, x);
    let at_km = eval_truncated(kernel, Some(km), f, x);
    if at_k != at_km {
        return Err(Error::StabilizationFailed {
            point: format!("{x}"),
            k,
            k_minus: km,
            at_k: render(&at_k),
            at_k_minus: render(&at_km),
        });
    }
    Ok(at_k)
}

/// The untruncated sum, without the stabilization check.
pub fn apply_t_unchecked(kernel: &HomogeneousKernel, f: &StepFunction, x: &PAdicPoint) -> Rational {
    eval_truncated(kernel, None, f, x)
}

/// `h(z) = Π_i (b_i(x) - b_i(z)) f(z)`, so that `T_k^{b} f(x) = T_k h(x)`.
pub fn commutator_integrand(symbols: &CommutatorSymbols, f: &StepFunction, x: &PAdicPoint) -> Result<StepFunction> {
    let mut h = f.clone();
    for b in symbols.symbols() {
        let c = b.eval(x);
        h = h.scale(&c).sub(&h.mul(b)?)?;
    }
    Ok(h)
}

/// `T_k^{b} f(x) = ∫_{|y|_p > p^k} Π_i (b_i(x) - b_i(x - y)) f(x - y) Ω(y) |y|_p^{-n} dy`.
pub fn apply_commutator(
    kernel: &HomogeneousKernel,
    k: TruncationIndex,
    symbols: &CommutatorSymbols,
    f: &StepFunction,
    x: &PAdicPoint,
) -> Result<Rational> {
    kernel.context().check_same(symbols.context())?;
    let h = commutator_integrand(symbols, f, x)?;
    apply_tk(kernel, k, &h, x)
}
