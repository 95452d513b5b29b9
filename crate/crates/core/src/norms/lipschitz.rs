use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{param, Result};
use crate::funcs::StepFunction;
use crate::numeric::{pow_p_real, rat, render, Rational};
use crate::padic::Ball;

use super::{NormReport, TailCertificate, TailSide};

/// `(min, max)` of `b` over `q`.
fn value_range(b: &StepFunction, q: &Ball) -> (Rational, Rational) {
    if let Some((_, v)) = b.cell_containing_ball(q) {
        return (v.clone(), v.clone());
    }
    let inner = b.restrict(q);
    let mut vals: Vec<Rational> = inner.cells().map(|(_, v)| v.clone()).collect();
    if b.covered_measure(q) < q.measure() {
        vals.push(Rational::zero());
    }
    let lo = vals.iter().min().cloned().unwrap_or_default();
    let hi = vals.iter().max().cloned().unwrap_or_default();
    (lo, hi)
}

/// Largest `|b(x) - b(y)|` over `x, y` in different children of `parent`.
fn max_jump(b: &StepFunction, parent: &Ball) -> Rational {
    let ranges: Vec<(Rational, Rational)> = parent.children().iter().map(|q| value_range(b, q)).collect();
    let mut best = Rational::zero();
    for (i, (_, hi)) in ranges.iter().enumerate() {
        for (j, (lo, _)) in ranges.iter().enumerate() {
            if i != j && hi - lo > best {
                best = hi - lo;
            }
        }
    }
    best
}

/// `sup_{x ≠ y} |b(x) - b(y)| / |x - y|_p^β`.
///
/// Points at distance `p^s` are exactly the pairs lying in different
/// children of one ball of exponent `s`. Below the smallest cell every such
/// ball sees a single value, and above the hull of the support the jumps
/// stop growing while `p^{-sβ}` shrinks, so only the scales in between are
/// examined.
pub fn lipschitz_norm(b: &StepFunction, beta: &Rational) -> Result<NormReport> {
    if !beta.is_positive() || *beta >= rat(1) {
        return Err(param("beta", format!("{} is outside (0, 1)", render(beta))));
    }
    let (Some(lo), Some(hull)) = (b.min_gamma(), b.hull()) else {
        return Ok(NormReport {
            value: 0.0,
            attaining: None,
            certificate: TailCertificate::Vacuous,
            window: (0, 0),
            candidates: 0,
        });
    };
    let hi = hull.gamma() + 1;
    let p = b.context().p();
    let mut parents = BTreeSet::new();
    for s in lo + 1..=hi {
        for (c, _) in b.cells() {
            if s > c.gamma() {
                parents.insert(c.ancestor(s));
            }
        }
    }
    let mut value = 0.0;
    let mut attaining = None;
    for parent in &parents {
        let jump = max_jump(b, parent);
        if jump.is_zero() {
            continue;
        }
        let scale = pow_p_real(p, &(-beta * rat(parent.gamma() as i64)));
        let v = (crate::numeric::Real::Exact(jump) * scale).to_f64();
        if v > value {
            value = v;
            attaining = Some(parent.clone());
        }
    }
    Ok(NormReport {
        value,
        attaining,
        certificate: TailCertificate::ClosedForm {
            small: TailSide::Zero,
            large: TailSide::Monotone,
        },
        window: (lo + 1, hi),
        candidates: parents.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;
    use crate::padic::{Context, PAdicPoint};

    #[test]
    fn indicator_of_unit_ball() {
        let c = Context::new(2, 1).unwrap();
        let f = StepFunction::indicator(&Ball::unit(c));
        for beta in [ratio(1, 2), ratio(1, 4), ratio(9, 10)] {
            let r = lipschitz_norm(&f, &beta).unwrap();
            let want = libm::pow(2.0, -crate::numeric::to_f64(&beta));
            assert!((r.value - want).abs() < 1e-15);
            assert_eq!(r.attaining, Some(Ball::centered(c, 1)));
        }
    }

    #[test]
    fn matches_brute_force_on_points() {
        let c = Context::new(3, 1).unwrap();
        let f = StepFunction::from_cells(
            c,
            [
                (Ball::centered(c, -1), rat(2)),
                (Ball::new(-1, PAdicPoint::from_ints(c, &[1]).unwrap()).unwrap(), rat(-1)),
                (Ball::new(0, PAdicPoint::in_context(c, alloc::vec![ratio(1, 3)]).unwrap()).unwrap(), ratio(1, 2)),
            ],
        )
        .unwrap();
        let beta = ratio(1, 3);
        let got = lipschitz_norm(&f, &beta).unwrap().value;
        let pts: Vec<PAdicPoint> = Ball::centered(c, 3)
            .descendants(-1)
            .into_iter()
            .map(|b| b.center().clone())
            .collect();
        let mut brute: f64 = 0.0;
        for x in &pts {
            for y in &pts {
                if let Some(d) = x.distance_exponent(y) {
                    let diff = crate::numeric::to_f64(&(f.eval(x) - f.eval(y))).abs();
                    brute = brute.max(diff * libm::pow(3.0, -(d as f64) / 3.0));
                }
            }
        }
        assert!((got - brute).abs() < 1e-12, "{got} vs {brute}");
    }

    #[test]
    fn rejects_beta_and_handles_zero() {
        let c = Context::new(5, 1).unwrap();
        assert!(lipschitz_norm(&StepFunction::zero(c), &rat(1)).is_err());
        assert_eq!(lipschitz_norm(&StepFunction::zero(c), &ratio(1, 2)).unwrap().value, 0.0);
    }
}
