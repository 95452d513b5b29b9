use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::error::{param, Error, Result};
use crate::numeric::{pow_p_real, rat, render, Rational, Real};
use crate::padic::{Ball, Context};

use super::StepFunction;

/// `ω(B) = coef · |B|^λ`, used past the edge of a tabulated weight.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLaw {
    pub coef: Rational,
    pub lambda: Rational,
}

/// A positive function of balls, `(a, γ) ↦ ω(B_γ(a))`.
#[derive(Debug, Clone, PartialEq)]
pub enum BallWeight {
    /// `ω(B) = |B|^λ = p^{nγλ}`.
    Power { lambda: Rational },
    /// `ω(B) = ∫_B g`, with `g` equal to `background` off the support of `density`.
    StepIntegral { density: StepFunction, background: Rational },
    /// Explicit values on listed balls, optionally continued by a power law.
    Tabulated {
        ctx: Context,
        table: BTreeMap<Ball, Rational>,
        fallback: Option<PowerLaw>,
    },
}

impl BallWeight {
    pub fn power(lambda: Rational) -> Self {
        BallWeight::Power { lambda }
    }

    pub fn step_integral(density: StepFunction, background: Rational) -> Result<Self> {
        if let Some((b, v)) = density.cells().find(|(_, v)| !v.is_positive()) {
            return Err(Error::NonPositiveWeight {
                ball: format!("{b}"),
                value: render(v),
            });
        }
        if background.is_negative() {
            return Err(param("background", format!("{} is negative", render(&background))));
        }
        Ok(BallWeight::StepIntegral { density, background })
    }

    pub fn tabulated(
        ctx: Context,
        entries: impl IntoIterator<Item = (Ball, Rational)>,
        fallback: Option<PowerLaw>,
    ) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (b, v) in entries {
            b.check_context(ctx)?;
            if !v.is_positive() {
                return Err(Error::NonPositiveWeight {
                    ball: format!("{b}"),
                    value: render(&v),
                });
            }
            table.insert(b, v);
        }
        if let Some(law) = &fallback {
            if !law.coef.is_positive() {
                return Err(param("fallback.coef", format!("{} is not positive", render(&law.coef))));
            }
        }
        Ok(BallWeight::Tabulated { ctx, table, fallback })
    }

    /// `ω(B)`, exact whenever the weight and the exponent allow it.
    pub fn weight_of(&self, b: &Ball) -> Result<Real> {
        let n = b.dim() as i64;
        let value = match self {
            BallWeight::Power { lambda } => {
                return Ok(pow_p_real(b.prime().get(), &(lambda * rat(n * b.gamma() as i64))));
            }
            BallWeight::StepIntegral { density, background } => {
                b.check_context(density.context())?;
                let inside = density.integral_over(b);
                let outside = background * (b.measure() - density.covered_measure(b));
                Real::Exact(inside + outside)
            }
            BallWeight::Tabulated { ctx, table, fallback } => {
                b.check_context(*ctx)?;
                match (table.get(b), fallback) {
                    (Some(v), _) => Real::Exact(v.clone()),
                    (None, Some(law)) => {
                        let e = &law.lambda * rat(n * b.gamma() as i64);
                        Real::Exact(law.coef.clone()) * pow_p_real(b.prime().get(), &e)
                    }
                    (None, None) => return Err(Error::TabulatedMiss(format!("{b}"))),
                }
            }
        };
        if !value.is_positive() {
            return Err(Error::NonPositiveWeight {
                ball: format!("{b}"),
                value: format!("{value}"),
            });
        }
        Ok(value)
    }

    pub fn power_lambda(&self) -> Option<&Rational> {
        match self {
            BallWeight::Power { lambda } => Some(lambda),
            _ => None,
        }
    }

    /// Balls on which the weight is defined piecewise; norm searches add
    /// them to the structure coming from the function itself.
    pub fn structural_balls(&self) -> Vec<Ball> {
        match self {
            BallWeight::Power { .. } => Vec::new(),
            BallWeight::StepIntegral { density, .. } => density.cells().map(|(b, _)| b.clone()).collect(),
            BallWeight::Tabulated { table, .. } => table.keys().cloned().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;
    use crate::padic::PAdicPoint;

    fn c2() -> Context {
        Context::new(2, 1).unwrap()
    }

    #[test]
    fn power_examples() {
        let b = Ball::centered(c2(), 2);
        assert_eq!(BallWeight::power(rat(0)).weight_of(&b).unwrap(), Real::Exact(rat(1)));
        assert_eq!(BallWeight::power(rat(-1)).weight_of(&b).unwrap(), Real::Exact(ratio(1, 4)));
        let half = BallWeight::power(ratio(-1, 2)).weight_of(&Ball::centered(c2(), 1)).unwrap();
        assert!((half.to_f64() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn step_integral_examples() {
        let g = StepFunction::indicator(&Ball::unit(c2()));
        let w = BallWeight::step_integral(g.clone(), rat(0)).unwrap();
        assert_eq!(w.weight_of(&Ball::centered(c2(), 1)).unwrap(), Real::Exact(rat(1)));
        assert_eq!(w.weight_of(&Ball::centered(c2(), -1)).unwrap(), Real::Exact(ratio(1, 2)));
        let far = Ball::new(0, PAdicPoint::in_context(c2(), alloc::vec![ratio(1, 2)]).unwrap()).unwrap();
        assert!(matches!(w.weight_of(&far), Err(Error::NonPositiveWeight { .. })));
        let w = BallWeight::step_integral(g.scale(&rat(3)), ratio(1, 2)).unwrap();
        // 3 on B_0 plus 1/2 on the other half of B_1
        assert_eq!(w.weight_of(&Ball::centered(c2(), 1)).unwrap(), Real::Exact(ratio(7, 2)));
        assert!(BallWeight::step_integral(g.scale(&rat(-1)), rat(1)).is_err());
    }

    #[test]
    fn tabulated_lookup() {
        let b0 = Ball::unit(c2());
        let w = BallWeight::tabulated(c2(), [(b0.clone(), rat(5))], None).unwrap();
        assert_eq!(w.weight_of(&b0).unwrap(), Real::Exact(rat(5)));
        assert!(matches!(w.weight_of(&Ball::centered(c2(), 1)), Err(Error::TabulatedMiss(_))));
        let law = PowerLaw { coef: rat(3), lambda: rat(-1) };
        let w = BallWeight::tabulated(c2(), [(b0.clone(), rat(5))], Some(law)).unwrap();
        assert_eq!(w.weight_of(&Ball::centered(c2(), 1)).unwrap(), Real::Exact(ratio(3, 2)));
        assert!(BallWeight::tabulated(c2(), [(b0, rat(0))], None).is_err());
    }
}
