use alloc::format;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{param, Result};
use crate::funcs::StepFunction;
use crate::numeric::{pow_p, rat, render, to_f64, DoubleDouble, Rational};
use crate::padic::{Context, PAdicPoint};

/// Order `α` of the Riesz potential, `0 < α < n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RieszOrder {
    alpha: Rational,
    ctx: Context,
}

impl RieszOrder {
    pub fn new(ctx: Context, alpha: Rational) -> Result<Self> {
        if !alpha.is_positive() || alpha >= rat(ctx.dim() as i64) {
            return Err(param("alpha", format!("{} is outside (0, {})", render(&alpha), ctx.dim())));
        }
        Ok(RieszOrder { alpha, ctx })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn context(&self) -> Context {
        self.ctx
    }
}

/// `p^e` for rational `e`: the integer part exactly, the fractional part through `libm`.
pub(crate) fn pow_p_frac(p: u32, e: &Rational) -> DoubleDouble {
    let k = e.numer().div_floor(e.denom());
    let frac = e - Rational::from_integer(k.clone());
    let k = k.to_i64().expect("exponent fits in i64");
    let ipart = DoubleDouble::from_rational(&pow_p(p, k));
    if frac == rat(0) {
        return ipart;
    }
    ipart * DoubleDouble::from_f64(libm::pow(p as f64, to_f64(&frac)))
}

/// `Γ_n(α) = (1 - p^{α-n}) / (1 - p^{-α})`.
pub fn gamma_n(ctx: Context, alpha: &Rational) -> f64 {
    let p = ctx.p();
    let n = rat(ctx.dim() as i64);
    let num = 1.0 - pow_p_frac(p, &(alpha - &n)).to_f64();
    let den = 1.0 - pow_p_frac(p, &-alpha).to_f64();
    num / den
}

/// Unnormalized `∫ f(y) |x - y|_p^{α-n} dy`, summed cell by cell.
///
/// A cell at distance `p^{j0}` from `x` contributes `v |C| p^{j0(α-n)}`; the
/// cell `B_γ(x)` contributes `v (1 - p^{-n}) p^{γα} / (1 - p^{-α})`.
pub(crate) fn riesz_integral(order: &RieszOrder, f: &StepFunction, x: &PAdicPoint) -> f64 {
    let ctx = order.ctx;
    let p = ctx.p();
    let n = ctx.dim() as i64;
    let alpha = &order.alpha;
    let near = rat(1) - pow_p(p, -n);
    let near_den = 1.0 - pow_p_frac(p, &-alpha).to_f64();
    let mut far = DoubleDouble::default();
    let mut inner = DoubleDouble::default();
    for (cell, v) in f.cells() {
        match x.distance_exponent(cell.center()) {
            Some(j0) if j0 > cell.gamma() as i64 => {
                let mass = v * cell.measure() * pow_p(p, -n * j0);
                let term = DoubleDouble::from_rational(&mass) * pow_p_frac(p, &(alpha * rat(j0)));
                far = far + term;
            }
            _ => {
                let coef = v * &near;
                let term = DoubleDouble::from_rational(&coef) * pow_p_frac(p, &(alpha * rat(cell.gamma() as i64)));
                inner = inner + term;
            }
        }
    }
    far.to_f64() + inner.to_f64() / near_den
}

/// `I^α f(x) = Γ_n(α)^{-1} ∫ f(y) |x - y|_p^{α-n} dy`.
pub fn riesz(order: &RieszOrder, f: &StepFunction, x: &PAdicPoint) -> Result<f64> {
    order.ctx.check_same(f.context())?;
    x.check_context(order.ctx)?;
    Ok(riesz_integral(order, f, x) / gamma_n(order.ctx, &order.alpha))
}
