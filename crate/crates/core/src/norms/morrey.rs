use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{param, Error, Result};
use crate::funcs::BallWeight;
use crate::numeric::{rat, render, to_f64, Rational, Real};
use crate::padic::{check_gamma, Ball, PAdicPoint, MAX_GAMMA};

use super::cells::{CellSource, Indexed};
use super::{NormPolicy, NormReport, TailCertificate, TailMode, TailSide};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Morrey,
    Campanato,
}

fn check_q(q: &Rational) -> Result<()> {
    if *q < rat(1) {
        return Err(param("q", format!("{} is below 1", render(q))));
    }
    Ok(())
}

/// `(|B|^{-1} ∫_B |f|^q)^{1/q}` or its mean-subtracted version, over `ω(B)`.
fn ball_value(idx: &Indexed, kind: Kind, q: &Rational, w: &BallWeight, b: &Ball) -> Result<f64> {
    let mass = match kind {
        Kind::Morrey => idx.power_mass(b, q),
        Kind::Campanato => idx.oscillation_mass(b, q),
    };
    if mass.to_f64() == 0.0 {
        return Ok(0.0);
    }
    let avg = mass / Real::Exact(b.measure());
    Ok(avg.root(q) / w.weight_of(b)?.to_f64())
}

/// `∫_B |f|^q` averaged, rooted and weighted, for one ball.
pub fn gm_ball_value(f: &impl CellSource, q: &Rational, w: &BallWeight, b: &Ball) -> Result<f64> {
    check_q(q)?;
    f.cell_context().check_same(b.context())?;
    let mut idx = Indexed::new(f);
    idx.index_up_to(b.gamma());
    ball_value(&idx, Kind::Morrey, q, w, b)
}

/// `ω(B)^{-1} (|B|^{-1} ∫_B |f - f_B|^q)^{1/q}` for one ball.
pub fn gc_ball_value(f: &impl CellSource, q: &Rational, w: &BallWeight, b: &Ball) -> Result<f64> {
    check_q(q)?;
    f.cell_context().check_same(b.context())?;
    let mut idx = Indexed::new(f);
    idx.index_up_to(b.gamma());
    ball_value(&idx, Kind::Campanato, q, w, b)
}

/// `‖f‖_{L^q} = (Σ |v|^q |C|)^{1/q}`.
pub fn lq_norm(f: &impl CellSource, q: &Rational) -> Result<f64> {
    check_q(q)?;
    let (a, _, _) = Indexed::new(f).totals(q);
    Ok(a.root(q))
}

/// Level-`γ` sub-balls of `a` that meet no ball of `inner` (all strictly
/// inside `a`): returned as `(top, center)`, meaning `B_γ(center)` qualifies
/// for every `γ <= top`.
fn gaps(a: &Ball, inner: &[&Ball], lo: i32) -> Vec<(i32, PAdicPoint)> {
    let mut out = Vec::new();
    explore(a, inner, lo, &mut out);
    out
}

fn explore(x: &Ball, inner: &[&Ball], lo: i32, out: &mut Vec<(i32, PAdicPoint)>) {
    if x.gamma() - 1 < lo {
        return;
    }
    for child in x.children() {
        let sub: Vec<&Ball> = inner.iter().copied().filter(|b| child.contains_ball(b)).collect();
        if sub.is_empty() {
            if !out.iter().any(|(top, _)| *top >= child.gamma()) {
                out.push((child.gamma(), child.center().clone()));
            }
        } else if !sub.contains(&&child) {
            explore(&child, &sub, lo, out);
        }
        if out.iter().any(|(top, _)| *top == x.gamma() - 1) {
            return;
        }
    }
}

/// Every ball that can matter at exponents in `[lo, hi]`: balls around a
/// structural center, plus one representative per structural ball and
/// level of the balls inside it that avoid all smaller structure.
fn candidates(idx: &Indexed, w: &BallWeight, lo: i32, hi: i32, centered: bool) -> BTreeSet<Ball> {
    let mut out = BTreeSet::new();
    if centered {
        for g in lo..=hi {
            out.insert(Ball::centered(idx.ctx, g));
        }
        return out;
    }
    let mut structure: Vec<Ball> = idx.cells.iter().map(|(b, _)| b.clone()).collect();
    structure.extend(w.structural_balls().into_iter().filter(|b| b.context() == idx.ctx));
    let structure: BTreeSet<Ball> = structure.into_iter().collect();
    for s in &structure {
        for g in lo..=hi {
            out.insert(Ball::canonical(g, s.center()));
        }
        let inner: Vec<&Ball> = structure.iter().filter(|b| *b != s && s.contains_ball(b)).collect();
        for (top, center) in gaps(s, &inner, lo) {
            for g in lo..=top.min(hi) {
                out.insert(Ball::canonical(g, &center));
            }
        }
    }
    out
}

struct Best {
    value: f64,
    ball: Option<Ball>,
    tol: f64,
}

impl Best {
    /// Values within the relative tolerance of the current best count as
    /// ties, which keep the earlier ball.
    fn offer(&mut self, value: f64, ball: &Ball) {
        if value > self.value * (1.0 + self.tol) || self.ball.is_none() {
            self.value = value;
            self.ball = Some(ball.clone());
        }
    }
}

fn level_max(idx: &Indexed, kind: Kind, q: &Rational, w: &BallWeight, g: i32, centered: bool) -> Result<f64> {
    let mut m: f64 = 0.0;
    for b in candidates(idx, w, g, g, centered) {
        m = m.max(ball_value(idx, kind, q, w, &b)?);
    }
    Ok(m)
}

fn search(
    f: &impl CellSource,
    q: &Rational,
    w: &BallWeight,
    policy: &NormPolicy,
    kind: Kind,
    centered: bool,
) -> Result<NormReport> {
    check_q(q)?;
    let (lo, hi) = (policy.gamma_lo, policy.gamma_hi);
    let mut idx = Indexed::new(f);
    let (Some(min_gamma), Some(hull)) = (idx.min_gamma(), idx.hull()) else {
        return Ok(NormReport {
            value: 0.0,
            attaining: None,
            certificate: TailCertificate::Vacuous,
            window: (lo, hi),
            candidates: 0,
        });
    };
    let top = if centered {
        idx.centered_hull_gamma().expect("nonempty")
    } else {
        hull.gamma()
    };
    if lo > min_gamma - 1 || hi < top + 1 {
        return Err(Error::WindowTooSmall {
            lo,
            hi,
            need_lo: min_gamma - 1,
            need_hi: top + 1,
        });
    }
    idx.index_up_to(hi);
    let cands = candidates(&idx, w, lo, hi, centered);
    let mut best = Best {
        value: 0.0,
        ball: None,
        tol: policy.float_rel_tol,
    };
    for b in &cands {
        best.offer(ball_value(&idx, kind, q, w, b)?, b);
    }
    let certificate = match policy.tail_mode {
        TailMode::WindowOnly => TailCertificate::WindowOnly,
        TailMode::GeometricBound { ratio } => {
            geometric_check(&mut idx, kind, q, w, policy, centered, ratio)?;
            TailCertificate::Geometric { ratio, checked: GEOMETRIC_PROBES }
        }
        TailMode::ClosedFormPower => {
            let lambda = w.power_lambda().ok_or_else(|| Error::TailModeMismatch {
                mode: "ClosedFormPower",
                reason: "the weight is not a power of |B|".into(),
            })?;
            closed_form(&mut idx, kind, q, w, lambda, policy, &hull, &mut best)?
        }
    };
    let unbounded = matches!(
        certificate,
        TailCertificate::ClosedForm { small: TailSide::Unbounded, .. }
            | TailCertificate::ClosedForm { large: TailSide::Unbounded, .. }
    );
    if let TailCertificate::ClosedForm { large: TailSide::Limit { value, .. }, .. } = certificate {
        best.value = best.value.max(value);
    }
    Ok(NormReport {
        value: if unbounded { f64::INFINITY } else { best.value },
        attaining: best.ball,
        certificate,
        window: (lo, hi),
        candidates: cands.len(),
    })
}

const GEOMETRIC_PROBES: u32 = 3;

fn geometric_check(
    idx: &mut Indexed,
    kind: Kind,
    q: &Rational,
    w: &BallWeight,
    policy: &NormPolicy,
    centered: bool,
    ratio: f64,
) -> Result<()> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(param("ratio", format!("{ratio} is outside (0, 1]")));
    }
    let (lo, hi) = (policy.gamma_lo, policy.gamma_hi);
    idx.index_up_to(hi + GEOMETRIC_PROBES as i32);
    for (edge, step) in [(lo, -1), (hi, 1)] {
        let edge_max = level_max(idx, kind, q, w, edge, centered)?;
        let mut bound = edge_max;
        for k in 1..=GEOMETRIC_PROBES as i32 {
            let g = check_gamma(edge as i64 + (step * k) as i64)?;
            bound *= ratio;
            let m = level_max(idx, kind, q, w, g, centered)?;
            if m > bound * (1.0 + policy.float_rel_tol) + f64::MIN_POSITIVE {
                return Err(Error::TailModeMismatch {
                    mode: "GeometricBound",
                    reason: format!("scale {g} reaches {m:e}, above the asserted bound {bound:e}"),
                });
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn closed_form(
    idx: &mut Indexed,
    kind: Kind,
    q: &Rational,
    w: &BallWeight,
    lambda: &Rational,
    policy: &NormPolicy,
    hull: &Ball,
    best: &mut Best,
) -> Result<TailCertificate> {
    let s = Rational::one() / q + lambda;
    let small = match kind {
        Kind::Campanato => TailSide::Zero,
        Kind::Morrey if lambda.is_positive() => TailSide::Unbounded,
        Kind::Morrey => TailSide::Monotone,
    };
    let large = if s.is_negative() {
        TailSide::Unbounded
    } else {
        match kind {
            Kind::Morrey => TailSide::Monotone,
            Kind::Campanato => scan_campanato(idx, q, w, &s, policy, hull, best)?,
        }
    };
    Ok(TailCertificate::ClosedForm { small, large })
}

/// Past the window every nonzero ball contains the whole support `S`. With
/// `m = I / |B|`, `A = ∫|b|^q`, `I = ∫b` and the mean value theorem,
/// `∫_B |b - m|^q <= A + q|m| Σ μ_i (|v_i| + |m|)^{q-1} + |B| |m|^q`, which
/// decreases in `|B|`. Scales are scanned until that bound, taken to the
/// power `1/q` and times `|B|^{-s}`, drops below the running maximum. Beyond
/// the largest representable ball the values come from the same expansion
/// without the estimate and only feed the limit.
fn scan_campanato(
    idx: &mut Indexed,
    q: &Rational,
    w: &BallWeight,
    s: &Rational,
    policy: &NormPolicy,
    hull: &Ball,
    best: &mut Best,
) -> Result<TailSide> {
    let p = idx.ctx.p() as f64;
    let n = idx.ctx.dim() as f64;
    let qf = to_f64(q);
    let sf = to_f64(s);
    let cells: Vec<(f64, f64)> = idx.cells.iter().map(|(c, v)| (to_f64(&c.measure()), v.to_f64())).collect();
    let (a, i, support) = idx.totals(q);
    let (a, i) = (a.to_f64(), i.to_f64());
    let support = to_f64(&support);
    let mut limit = if s.is_zero() {
        if q.is_one() {
            a + i.abs()
        } else {
            libm::pow(a, 1.0 / qf)
        }
    } else {
        0.0
    };
    let volume = |g: i32| libm::pow(p, n * g as f64);
    let bound = |g: i32| {
        let v = volume(g);
        let m = i.abs() / v;
        let drift: f64 = cells.iter().map(|(mu, x)| mu * libm::pow(x.abs() + m, qf - 1.0)).sum();
        libm::pow(a + qf * m * drift + v * libm::pow(m, qf), 1.0 / qf) * libm::pow(v, -sf)
    };
    let exact = |g: i32| {
        let v = volume(g);
        let m = i / v;
        let inner: f64 = cells.iter().map(|(mu, x)| mu * libm::pow((x - m).abs(), qf)).sum();
        libm::pow(inner + (v - support) * libm::pow(m.abs(), qf), 1.0 / qf) * libm::pow(v, -sf)
    };
    let mut g = policy.gamma_hi + 1;
    while bound(g) > best.value.max(limit) * (1.0 + policy.float_rel_tol) {
        if g <= MAX_GAMMA {
            idx.index_up_to(g);
            let b = hull.ancestor(g);
            best.offer(ball_value(idx, Kind::Campanato, q, w, &b)?, &b);
        } else if volume(g).is_finite() {
            limit = limit.max(exact(g));
        } else {
            return Err(Error::TailModeMismatch {
                mode: "ClosedFormPower",
                reason: format!("Campanato tail bound still above the maximum at scale {g}"),
            });
        }
        g += 1;
    }
    let until = (g - 1).min(MAX_GAMMA);
    Ok(if limit > best.value {
        TailSide::Limit { value: limit, until }
    } else {
        TailSide::Scanned { until }
    })
}

/// `‖f‖_{GM_{q,ω}}`.
pub fn gm_norm(f: &impl CellSource, q: &Rational, w: &BallWeight, policy: &NormPolicy) -> Result<NormReport> {
    search(f, q, w, policy, Kind::Morrey, false)
}

/// `‖f‖_{GC_{q,ω}}`.
pub fn gc_norm(f: &impl CellSource, q: &Rational, w: &BallWeight, policy: &NormPolicy) -> Result<NormReport> {
    search(f, q, w, policy, Kind::Campanato, false)
}

/// `‖f‖_{CM_{q,λ}}`: balls centered at the origin, `ω(B) = |B|^λ`.
pub fn cm_norm(f: &impl CellSource, q: &Rational, lambda: &Rational, policy: &NormPolicy) -> Result<NormReport> {
    search(f, q, &BallWeight::power(lambda.clone()), policy, Kind::Morrey, true)
}

/// `‖f‖_{CBMO^{q,λ}}`.
pub fn cbmo_norm(f: &impl CellSource, q: &Rational, lambda: &Rational, policy: &NormPolicy) -> Result<NormReport> {
    search(f, q, &BallWeight::power(lambda.clone()), policy, Kind::Campanato, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::StepFunction;
    use crate::numeric::ratio;
    use crate::padic::Context;

    fn c2() -> Context {
        Context::new(2, 1).unwrap()
    }

    fn unit() -> StepFunction {
        StepFunction::indicator(&Ball::unit(c2()))
    }

    fn policy(f: &StepFunction, mode: TailMode) -> NormPolicy {
        NormPolicy::covering(f, 2, mode).unwrap()
    }

    #[test]
    fn lq_examples() {
        assert_eq!(lq_norm(&unit(), &rat(3)).unwrap(), 1.0);
        let f = StepFunction::constant_on(&Ball::centered(c2(), -1), rat(2));
        assert!((lq_norm(&f, &rat(2)).unwrap() - core::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(lq_norm(&StepFunction::zero(c2()), &rat(2)).unwrap(), 0.0);
    }

    #[test]
    fn central_morrey_of_unit_ball() {
        let f = unit();
        for lambda in [ratio(-1, 2), ratio(-1, 3), rat(0)] {
            let r = cm_norm(&f, &rat(2), &lambda, &policy(&f, TailMode::ClosedFormPower)).unwrap();
            assert!((r.value - 1.0).abs() < 1e-15, "{lambda}: {}", r.value);
        }
        // strictly inside (-1/q, 0) the unit ball is the unique maximizer
        let r = cm_norm(&f, &rat(2), &ratio(-1, 3), &policy(&f, TailMode::ClosedFormPower)).unwrap();
        assert_eq!(r.attaining, Some(Ball::unit(c2())));
        // λ < -1/q: large balls blow up
        let r = cm_norm(&f, &rat(2), &rat(-1), &policy(&f, TailMode::ClosedFormPower)).unwrap();
        assert!(r.value.is_infinite());
        // λ > 0: small balls blow up
        let r = cm_norm(&f, &rat(2), &ratio(1, 4), &policy(&f, TailMode::ClosedFormPower)).unwrap();
        assert!(r.value.is_infinite());
    }

    #[test]
    fn gm_matches_cm_for_centered_data() {
        let f = unit();
        let pol = policy(&f, TailMode::ClosedFormPower);
        let gm = gm_norm(&f, &rat(2), &BallWeight::power(ratio(-1, 4)), &pol).unwrap();
        let cm = cm_norm(&f, &rat(2), &ratio(-1, 4), &pol).unwrap();
        assert_eq!(gm.value, cm.value);
    }

    #[test]
    fn campanato_examples() {
        let b = StepFunction::indicator(&Ball::centered(c2(), -1));
        let w0 = BallWeight::power(rat(0));
        assert_eq!(gc_ball_value(&b, &rat(1), &w0, &Ball::unit(c2())).unwrap(), 0.5);
        let r = cbmo_norm(&b, &rat(1), &rat(0), &policy(&b, TailMode::ClosedFormPower)).unwrap();
        assert_eq!(r.value, 0.5);
        assert_eq!(r.attaining, Some(Ball::unit(c2())));
        // λ = -1, q = 1: the supremum is the limit A + |I| = 1, never attained
        let r = cbmo_norm(&b, &rat(1), &rat(-1), &policy(&b, TailMode::ClosedFormPower)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "{}", r.value);
        assert!(matches!(r.certificate, TailCertificate::ClosedForm { large: TailSide::Limit { .. }, .. }));
        let r = gc_norm(&b, &rat(2), &BallWeight::power(ratio(-1, 4)), &policy(&b, TailMode::ClosedFormPower)).unwrap();
        assert!(r.value.is_finite() && r.value > 0.0);
    }

    #[test]
    fn zero_and_window_errors() {
        let z = StepFunction::zero(c2());
        let pol = NormPolicy::new(-3, 3, TailMode::ClosedFormPower).unwrap();
        let r = gm_norm(&z, &rat(2), &BallWeight::power(rat(-1)), &pol).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.certificate, TailCertificate::Vacuous);
        let narrow = NormPolicy::new(0, 0, TailMode::ClosedFormPower).unwrap();
        assert!(matches!(
            gm_norm(&unit(), &rat(2), &BallWeight::power(rat(-1)), &narrow),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    fn brute(f: &StepFunction, q: &Rational, w: &BallWeight, lo: i32, hi: i32, kind: Kind) -> f64 {
        let mut idx = Indexed::new(f);
        idx.index_up_to(hi);
        let mut m: f64 = 0.0;
        for g in lo..=hi {
            for b in Ball::centered(f.context(), hi).descendants(g) {
                m = m.max(ball_value(&idx, kind, q, w, &b).unwrap());
            }
        }
        m
    }

    #[test]
    fn candidates_match_exhaustive_search() {
        use crate::funcs::random::{random_step, RandomProfile};
        let profile = RandomProfile {
            root_gamma: 0,
            min_depth: 1,
            max_depth: 3,
            max_cells: 5,
            value_bound: 4,
            max_denominator: 2,
        };
        for (p, n) in [(2u64, 1usize), (3, 1), (2, 2)] {
            let c = Context::new(p, n).unwrap();
            for seed in 0..8u64 {
                let f = random_step(seed, c, &profile).unwrap();
                let density = random_step(seed + 50, c, &profile).unwrap().abs();
                let weights = [
                    BallWeight::power(ratio(-1, 3)),
                    BallWeight::step_integral(density, ratio(1, 2)).unwrap(),
                ];
                for w in &weights {
                    for q in [rat(1), rat(2)] {
                        let pol = NormPolicy::covering(&f, 0, TailMode::WindowOnly).unwrap();
                        let (lo, hi) = (pol.gamma_lo, pol.gamma_hi);
                        let gm = gm_norm(&f, &q, w, &pol).unwrap().value;
                        let gc = gc_norm(&f, &q, w, &pol).unwrap().value;
                        let bm = brute(&f, &q, w, lo, hi, Kind::Morrey);
                        let bc = brute(&f, &q, w, lo, hi, Kind::Campanato);
                        assert!((gm - bm).abs() <= 1e-12 * bm.max(1.0), "{p} {n} {seed}: {gm} vs {bm}");
                        assert!((gc - bc).abs() <= 1e-12 * bc.max(1.0), "{p} {n} {seed}: {gc} vs {bc}");
                    }
                }
            }
        }
    }
}
