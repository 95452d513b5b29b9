//! Summability conditions on weight triples.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{param, Result};
use crate::funcs::BallWeight;
use crate::norms::TailMode;
use crate::numeric::{pow_p_real, rat, render, Rational, Real};
use crate::padic::{Ball, PAdicPoint, MAX_GAMMA};

#[derive(Debug, Clone, PartialEq)]
pub enum ConditionKind {
    /// `Σ_{j≥γ} ν(B_j) / ω(B_γ)`.
    Cond31,
    /// `Σ_{j≥γ} p^{jβ} ν(B_j) / ω(B_γ)`.
    Cond32 { beta: Rational },
    /// `∏ ν_i(B_γ) ν(B_γ) / ω(B_γ)`.
    CondI,
    /// `Σ_{j≥γ+1} (j+1-γ)^m ∏ ν_i(B_j) ν(B_j) / ω(B_γ)`.
    CondII { m: u32 },
}

impl ConditionKind {
    pub fn label(&self) -> &'static str {
        match self {
            ConditionKind::Cond31 => "31",
            ConditionKind::Cond32 { .. } => "32",
            ConditionKind::CondI => "i",
            ConditionKind::CondII { .. } => "ii",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCondition {
    pub kind: ConditionKind,
    pub omega: BallWeight,
    pub nu: BallWeight,
    /// `ν_1, …, ν_m`; only read by `CondI` and `CondII`.
    pub nus: Vec<BallWeight>,
    pub anchor: PAdicPoint,
    pub gamma: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPolicy {
    /// Terms summed explicitly before a geometric tail bound takes over.
    pub terms: u32,
    pub tail_mode: TailMode,
    pub float_rel_tol: f64,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        SeriesPolicy {
            terms: 24,
            tail_mode: TailMode::ClosedFormPower,
            float_rel_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesCertificate {
    /// Power weights: geometric series (times a polynomial for `CondII`) summed in closed form.
    ClosedForm,
    /// `CondI` has a single term.
    SingleTerm,
    /// `partial` over `terms` explicit terms, plus `tail` bounding the rest
    /// under the asserted eventual ratio. The reported value is their sum.
    GeometricTail { ratio: f64, terms: u32, partial: f64, tail: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesOutcome {
    Converges {
        value: Real,
        /// `Cond31` summed from `j = γ + 1` instead of `j = γ`.
        from_next: Option<Real>,
        /// Whether the value is the same for every anchor; known for power weights.
        uniform: Option<bool>,
        certificate: SeriesCertificate,
    },
    Diverges { witness: DivergenceWitness },
    Indeterminate { reason: String },
}

impl SeriesOutcome {
    pub fn converges(&self) -> bool {
        matches!(self, SeriesOutcome::Converges { .. })
    }

    /// Converges with the same value at every anchor.
    pub fn uniformly_bounded(&self) -> Option<bool> {
        match self {
            SeriesOutcome::Converges { uniform, .. } => *uniform,
            SeriesOutcome::Diverges { .. } => Some(false),
            SeriesOutcome::Indeterminate { .. } => None,
        }
    }
}

/// Terms behave like `first · ratio^i` (times `(i+1)^m` for `CondII`) with `ratio >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceWitness {
    pub first_term: Real,
    pub term_ratio: Real,
}

/// Eulerian polynomial coefficients `A(m, k)`, `k = 0..m` (`A_0 = 1`).
pub fn eulerian(m: u32) -> Vec<Rational> {
    let mut row = vec![rat(1)];
    for mm in 1..=m as i64 {
        let mut next = vec![Rational::zero(); mm as usize];
        for k in 0..mm as usize {
            let mut v = Rational::zero();
            if k < row.len() {
                v += rat(k as i64 + 1) * &row[k];
            }
            if k >= 1 && k - 1 < row.len() {
                v += rat(mm - k as i64) * &row[k - 1];
            }
            next[k] = v;
        }
        row = next;
    }
    row
}

/// `Σ_{i≥1} (i+1)^m x^i = A_m(x) / (1-x)^{m+1} - 1` for `|x| < 1`.
pub fn shifted_polylog(m: u32, x: &Real) -> Real {
    let mut a = Real::zero();
    let mut xp = Real::one();
    for c in eulerian(m) {
        a = a + Real::Exact(c) * xp.clone();
        xp = xp * x.clone();
    }
    a / (Real::one() - x.clone()).powi(m + 1) - Real::one()
}

fn powers(c: &SeriesCondition) -> Option<(Rational, Rational, Rational)> {
    let lambda = c.omega.power_lambda()?.clone();
    let mu = c.nu.power_lambda()?.clone();
    let mut nus = Rational::zero();
    if matches!(c.kind, ConditionKind::CondI | ConditionKind::CondII { .. }) {
        for w in &c.nus {
            nus += w.power_lambda()?;
        }
    }
    Some((lambda, mu, nus))
}

fn closed_form(c: &SeriesCondition, lambda: Rational, mu: Rational, nus: Rational) -> SeriesOutcome {
    let ctx = c.anchor.context();
    let p = ctx.p();
    let n = rat(ctx.dim() as i64);
    let g = rat(c.gamma as i64);
    let pw = |e: &Rational| pow_p_real(p, e);
    // first term, its exponent's coefficient of γ, and the term ratio exponent
    let (first_exp, gamma_coef, ratio_exp) = match &c.kind {
        ConditionKind::Cond31 => (&n * &g * (&mu - &lambda), &n * (&mu - &lambda), &n * &mu),
        ConditionKind::Cond32 { beta } => {
            let e = beta + &n * &mu;
            (&g * (&e - &n * &lambda), &e - &n * &lambda, e)
        }
        ConditionKind::CondI => {
            let e = &n * (&nus + &mu - &lambda);
            return SeriesOutcome::Converges {
                value: pw(&(&e * &g)),
                from_next: None,
                uniform: Some(e.is_zero()),
                certificate: SeriesCertificate::SingleTerm,
            };
        }
        ConditionKind::CondII { .. } => {
            let s = &nus + &mu;
            (&n * &g * (&s - &lambda), &n * (&s - &lambda), &n * &s)
        }
    };
    let first = pw(&first_exp);
    let x = pw(&ratio_exp);
    if !ratio_exp.is_negative() {
        return SeriesOutcome::Diverges {
            witness: DivergenceWitness {
                first_term: first,
                term_ratio: x,
            },
        };
    }
    let uniform = Some(gamma_coef.is_zero());
    match c.kind {
        ConditionKind::CondII { m } => SeriesOutcome::Converges {
            value: first * shifted_polylog(m, &x),
            from_next: None,
            uniform,
            certificate: SeriesCertificate::ClosedForm,
        },
        _ => {
            let value = first / (Real::one() - x.clone());
            let from_next = Some(value.clone() * x);
            SeriesOutcome::Converges {
                value,
                from_next,
                uniform,
                certificate: SeriesCertificate::ClosedForm,
            }
        }
    }
}

fn ball_at(c: &SeriesCondition, j: i64) -> Result<Ball> {
    Ball::new(j, c.anchor.clone())
}

fn term(c: &SeriesCondition, j: i64, denom: &Real) -> Result<Real> {
    let b = ball_at(c, j)?;
    let mut t = c.nu.weight_of(&b)? / denom.clone();
    let p = c.anchor.context().p();
    match &c.kind {
        ConditionKind::Cond31 | ConditionKind::CondI => {}
        ConditionKind::Cond32 { beta } => t = t * pow_p_real(p, &(beta * rat(j))),
        ConditionKind::CondII { m } => t = t * Real::Exact(rat(j + 1 - c.gamma as i64)).powi(*m),
    }
    if matches!(c.kind, ConditionKind::CondI | ConditionKind::CondII { .. }) {
        for w in &c.nus {
            t = t * w.weight_of(&b)?;
        }
    }
    Ok(t)
}

fn truncated(c: &SeriesCondition, policy: &SeriesPolicy, ratio: f64) -> Result<SeriesOutcome> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Ok(SeriesOutcome::Indeterminate {
            reason: format!("asserted tail ratio {ratio} is not in (0, 1)"),
        });
    }
    let denom = c.omega.weight_of(&ball_at(c, c.gamma as i64)?)?;
    let start = c.gamma as i64 + i64::from(matches!(c.kind, ConditionKind::CondII { .. }));
    let end = (start + policy.terms.max(4) as i64 - 1).min(MAX_GAMMA as i64);
    if end - start < 3 {
        return Ok(SeriesOutcome::Indeterminate {
            reason: format!("too few scales between {start} and the largest supported exponent"),
        });
    }
    let mut terms = Vec::new();
    for j in start..=end {
        terms.push(term(c, j, &denom)?);
    }
    for w in terms[terms.len() - 4..].windows(2) {
        let (a, b) = (w[0].to_f64(), w[1].to_f64());
        if b > a * ratio * (1.0 + policy.float_rel_tol) {
            return Ok(SeriesOutcome::Indeterminate {
                reason: format!("observed term ratio {} exceeds the asserted {ratio}", b / a),
            });
        }
    }
    let partial = terms.iter().fold(Real::zero(), |s, t| s + t.clone());
    let last = terms.last().expect("nonempty").to_f64();
    let tail = last * ratio / (1.0 - ratio);
    let value = Real::Approx(partial.to_f64() + tail);
    let from_next = matches!(c.kind, ConditionKind::Cond31).then(|| Real::Approx(value.to_f64() - terms[0].to_f64()));
    Ok(SeriesOutcome::Converges {
        value,
        from_next,
        uniform: None,
        certificate: SeriesCertificate::GeometricTail {
            ratio,
            terms: terms.len() as u32,
            partial: partial.to_f64(),
            tail,
        },
    })
}

/// Decides the condition at the anchor `(a, γ)`.
pub fn check_series(c: &SeriesCondition, policy: &SeriesPolicy) -> Result<SeriesOutcome> {
    crate::padic::check_gamma(c.gamma as i64)?;
    if let ConditionKind::Cond32 { beta } = &c.kind {
        let n = rat(c.anchor.dim() as i64);
        if !beta.is_positive() || *beta >= n {
            return Err(param("beta", format!("{} is outside (0, {})", render(beta), render(&n))));
        }
    }
    if let Some((lambda, mu, nus)) = powers(c) {
        return Ok(closed_form(c, lambda, mu, nus));
    }
    if c.kind == ConditionKind::CondI {
        let b = ball_at(c, c.gamma as i64)?;
        let denom = c.omega.weight_of(&b)?;
        return Ok(SeriesOutcome::Converges {
            value: term(c, c.gamma as i64, &denom)?,
            from_next: None,
            uniform: None,
            certificate: SeriesCertificate::SingleTerm,
        });
    }
    match policy.tail_mode {
        TailMode::GeometricBound { ratio } => truncated(c, policy, ratio),
        TailMode::WindowOnly => Ok(SeriesOutcome::Indeterminate {
            reason: "no tail bound for non-power weights under a window-only policy".into(),
        }),
        TailMode::ClosedFormPower => Ok(SeriesOutcome::Indeterminate {
            reason: "closed form needs power weights throughout".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;
    use crate::padic::Context;

    fn cond(kind: ConditionKind, ctx: Context, lambda: Rational, mu: Rational, nus: Vec<Rational>) -> SeriesCondition {
        SeriesCondition {
            kind,
            omega: BallWeight::power(lambda),
            nu: BallWeight::power(mu),
            nus: nus.into_iter().map(BallWeight::power).collect(),
            anchor: PAdicPoint::zero(ctx),
            gamma: 0,
        }
    }

    #[test]
    fn eulerian_rows() {
        assert_eq!(eulerian(0), vec![rat(1)]);
        assert_eq!(eulerian(1), vec![rat(1)]);
        assert_eq!(eulerian(2), vec![rat(1), rat(1)]);
        assert_eq!(eulerian(3), vec![rat(1), rat(4), rat(1)]);
        assert_eq!(eulerian(4), vec![rat(1), rat(11), rat(11), rat(1)]);
    }

    #[test]
    fn polylog_matches_partial_sums() {
        let x = ratio(1, 3);
        for m in 0..5 {
            let mut s = Rational::zero();
            let mut xi = Rational::from_integer(1.into());
            for i in 1..200i64 {
                xi *= &x;
                s += num_traits::pow(rat(i + 1), m as usize) * &xi;
            }
            let closed = shifted_polylog(m, &Real::Exact(x.clone())).to_f64();
            assert!((closed - crate::numeric::to_f64(&s)).abs() < 1e-12 * closed, "m={m}");
        }
    }

    #[test]
    fn cond31_power() {
        let ctx = Context::new(2, 1).unwrap();
        let pol = SeriesPolicy::default();
        let out = check_series(&cond(ConditionKind::Cond31, ctx, rat(-1), rat(-1), vec![]), &pol).unwrap();
        assert_eq!(
            out,
            SeriesOutcome::Converges {
                value: Real::Exact(rat(2)),
                from_next: Some(Real::Exact(rat(1))),
                uniform: Some(true),
                certificate: SeriesCertificate::ClosedForm
            }
        );
        let out = check_series(&cond(ConditionKind::Cond31, ctx, rat(0), rat(0), vec![]), &pol).unwrap();
        assert!(matches!(out, SeriesOutcome::Diverges { .. }));
    }

    #[test]
    fn cond32_sign() {
        let ctx = Context::new(3, 1).unwrap();
        let pol = SeriesPolicy::default();
        let c = |l: Rational, b: Rational| cond(ConditionKind::Cond32 { beta: b }, ctx, l.clone(), l, vec![]);
        assert!(check_series(&c(ratio(-3, 4), ratio(1, 2)), &pol).unwrap().converges());
        assert!(!check_series(&c(ratio(-1, 4), ratio(1, 2)), &pol).unwrap().converges());
        assert!(!check_series(&c(ratio(-1, 2), ratio(1, 2)), &pol).unwrap().converges());
    }

    #[test]
    fn cond_i_ii_for_power_triples() {
        let ctx = Context::new(2, 1).unwrap();
        let pol = SeriesPolicy::default();
        let (l1, l2, l) = (ratio(1, 4), ratio(1, 8), ratio(-1, 2));
        let tilde = &l1 + &l2 + &l;
        let i = check_series(&cond(ConditionKind::CondI, ctx, tilde.clone(), l.clone(), vec![l1.clone(), l2.clone()]), &pol).unwrap();
        assert_eq!(i.uniformly_bounded(), Some(true));
        let ii = check_series(&cond(ConditionKind::CondII { m: 2 }, ctx, tilde, l, vec![l1, l2]), &pol).unwrap();
        assert_eq!(ii.uniformly_bounded(), Some(true));
    }

    #[test]
    fn geometric_tail_agrees_with_closed_form() {
        let ctx = Context::new(2, 1).unwrap();
        let density = crate::funcs::StepFunction::indicator(&Ball::unit(ctx));
        let nu = BallWeight::Tabulated {
            ctx,
            table: Default::default(),
            fallback: Some(crate::funcs::PowerLaw {
                coef: rat(1),
                lambda: rat(-1),
            }),
        };
        let c = SeriesCondition {
            kind: ConditionKind::Cond31,
            omega: BallWeight::step_integral(density, rat(1)).unwrap(),
            nu,
            nus: vec![],
            anchor: PAdicPoint::zero(ctx),
            gamma: 0,
        };
        let pol = SeriesPolicy {
            tail_mode: TailMode::GeometricBound { ratio: 0.5 },
            ..SeriesPolicy::default()
        };
        match check_series(&c, &pol).unwrap() {
            SeriesOutcome::Converges { value, .. } => assert!((value.to_f64() - 2.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let pol = SeriesPolicy {
            tail_mode: TailMode::WindowOnly,
            ..SeriesPolicy::default()
        };
        assert!(matches!(check_series(&c, &pol).unwrap(), SeriesOutcome::Indeterminate { .. }));
    }
}
