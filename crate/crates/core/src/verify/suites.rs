//! Randomized checks of the lemma-level inequalities and the pointwise
//! bounds used inside the boundedness proofs.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::Result;
use crate::funcs::random::{random_kernel_with, random_point, random_step_with, rng, CorpusRng, RandomProfile};
use crate::funcs::{BallWeight, CommutatorSymbols, HomogeneousKernel, StepFunction};
use crate::norms::{gc_norm, gm_ball_value, gm_norm, lipschitz_norm, NormPolicy, TailMode};
use crate::numeric::{abs_pow, pow_p, rat, ratio, to_f64, Rational, Real};
use crate::operators::{apply_commutator, apply_tk, gamma_n, riesz, RieszOrder, TruncationIndex};
use crate::padic::{Ball, Context, PAdicPoint};

/// Shared knobs of the randomized suites.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub contexts: Vec<Context>,
    pub profile: RandomProfile,
    /// Relative slack allowed where a side involves a real root.
    pub slack: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let contexts = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (5, 2)]
            .into_iter()
            .map(|(p, n)| Context::new(p, n).expect("valid context"))
            .collect();
        SuiteConfig {
            contexts,
            profile: RandomProfile {
                root_gamma: 1,
                min_depth: 1,
                max_depth: 3,
                max_cells: 8,
                value_bound: 8,
                max_denominator: 16,
            },
            slack: 1e-9,
        }
    }
}

/// One inequality `lhs <= rhs` at one random instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRow {
    pub suite: &'static str,
    pub check: &'static str,
    pub seed: u64,
    pub context: Context,
    pub lhs: Real,
    pub rhs: Real,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteReport {
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteRow> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

fn holds(lhs: &Real, rhs: &Real, slack: f64) -> bool {
    match (lhs, rhs) {
        (Real::Exact(a), Real::Exact(b)) => a <= b,
        _ => lhs.to_f64() <= rhs.to_f64() * (1.0 + slack),
    }
}

struct Rows<'a> {
    suite: &'static str,
    seed: u64,
    ctx: Context,
    slack: f64,
    out: &'a mut Vec<SuiteRow>,
}

impl Rows<'_> {
    fn push(&mut self, check: &'static str, lhs: Real, rhs: Real) {
        let pass = holds(&lhs, &rhs, self.slack);
        self.out.push(SuiteRow {
            suite: self.suite,
            check,
            seed: self.seed,
            context: self.ctx,
            lhs,
            rhs,
            pass,
        });
    }
}

fn pick<T: Clone>(r: &mut CorpusRng, xs: &[T]) -> T {
    xs[r.random_range(0..xs.len())].clone()
}

fn nonzero_step(r: &mut CorpusRng, ctx: Context, profile: &RandomProfile) -> Result<StepFunction> {
    loop {
        let f = random_step_with(r, ctx, profile)?;
        if !f.is_zero() {
            return Ok(f);
        }
    }
}

fn kernel_for(r: &mut CorpusRng, ctx: Context) -> Result<HomogeneousKernel> {
    let level = if ctx.branching() > 9 { -1 } else { -2 };
    loop {
        let k = random_kernel_with(r, ctx, level, 4)?;
        if !k.sup_norm().is_zero() {
            return Ok(k);
        }
    }
}

/// A point near the support: inside `B_{root+1}(0)`, random in its top digits.
fn point_near(r: &mut CorpusRng, ctx: Context, profile: &RandomProfile) -> PAdicPoint {
    random_point(r, &Ball::centered(ctx, profile.root_gamma + 1), profile.max_depth + 2)
}

fn power_norm_policy(f: &StepFunction) -> Result<NormPolicy> {
    NormPolicy::covering(f, 1, TailMode::ClosedFormPower)
}

/// `∫_B |b - c|^q`.
pub fn deviation_mass(b: &StepFunction, ball: &Ball, c: &Rational, q: &Rational) -> Real {
    if let Some((_, v)) = b.cell_containing_ball(ball) {
        return abs_pow(&(v - c), q) * Real::Exact(ball.measure());
    }
    let mut s = Real::zero();
    let mut covered = Rational::zero();
    for (cell, v) in b.cells().filter(|(cell, _)| ball.contains_ball(cell)) {
        s = s + abs_pow(&(v - c), q) * Real::Exact(cell.measure());
        covered += cell.measure();
    }
    s + abs_pow(c, q) * Real::Exact(ball.measure() - covered)
}

fn weight(w: &BallWeight, b: &Ball) -> Result<Real> {
    w.weight_of(b)
}

/// `|b_{B_k(a)} - b_{B_j(a)}| <= ‖b‖_{GC_{q,ω}} |j - k| max(ω(B_k(a)), ω(B_j(a)))`,
/// together with its `j = k` degenerate case.
pub fn lemma21_suite(seeds: impl IntoIterator<Item = u64>, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut out = Vec::new();
    for seed in seeds {
        let mut r = rng(seed);
        let ctx = pick(&mut r, &cfg.contexts);
        let b = nonzero_step(&mut r, ctx, &cfg.profile)?;
        let q = pick(&mut r, &[rat(1), ratio(3, 2), rat(2), rat(3)]);
        let lambda = campanato_lambda(&mut r, ctx, &q);
        let w = BallWeight::power(lambda);
        let a = point_near(&mut r, ctx, &cfg.profile);
        let (lo, hi) = (b.min_gamma().expect("nonzero") - 2, b.hull().expect("nonzero").gamma() + 2);
        let j = r.random_range(lo..=hi);
        let k = loop {
            let k = r.random_range(lo..=hi);
            if k != j {
                break k;
            }
        };
        let norm = gc_norm(&b, &q, &w, &power_norm_policy(&b)?)?.value;
        let (bj, bk) = (Ball::new(j as i64, a.clone())?, Ball::new(k as i64, a.clone())?);
        let lhs = (b.ball_mean(&bk) - b.ball_mean(&bj)).abs();
        let wmax = weight(&w, &bj)?.to_f64().max(weight(&w, &bk)?.to_f64());
        let rhs = norm * (j - k).abs() as f64 * wmax;
        let mut rows = Rows {
            suite: "lemma21",
            seed,
            ctx,
            slack: cfg.slack,
            out: &mut out,
        };
        rows.push("mean jump", Real::Exact(lhs), Real::Approx(rhs));
        // j = k: both sides vanish, the right through the factor |j - k| = 0
        let same = b.ball_mean(&bj) - b.ball_mean(&bj);
        rows.push("mean jump j=k", Real::Exact(same.abs()), Real::Exact(Rational::zero()));
    }
    Ok(SuiteReport { rows: out })
}

/// For `j > k`: `(∫_{B_j(a)} |b - b_{B_k(a)}|^q)^{1/q} <= (j+1-k) |B_j(a)|^{1/q} ω(B_j(a)) ‖b‖_{GC_{q,ω}}`.
pub fn integrated_jump_suite(seeds: impl IntoIterator<Item = u64>, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut out = Vec::new();
    for seed in seeds {
        let mut r = rng(seed);
        let ctx = pick(&mut r, &cfg.contexts);
        let b = nonzero_step(&mut r, ctx, &cfg.profile)?;
        let q = pick(&mut r, &[rat(1), ratio(3, 2), rat(2), rat(3)]);
        let lambda = campanato_lambda(&mut r, ctx, &q);
        let w = BallWeight::power(lambda);
        let a = point_near(&mut r, ctx, &cfg.profile);
        let (lo, hi) = (b.min_gamma().expect("nonzero") - 2, b.hull().expect("nonzero").gamma() + 2);
        let k = r.random_range(lo..hi);
        let j = r.random_range(k + 1..=hi);
        let norm = gc_norm(&b, &q, &w, &power_norm_policy(&b)?)?.value;
        let (bj, bk) = (Ball::new(j as i64, a.clone())?, Ball::new(k as i64, a.clone())?);
        let lhs = deviation_mass(&b, &bj, &b.ball_mean(&bk), &q).root(&q);
        let qf = to_f64(&q);
        let rhs = (j + 1 - k) as f64 * libm::pow(to_f64(&bj.measure()), 1.0 / qf) * weight(&w, &bj)?.to_f64() * norm;
        Rows {
            suite: "integrated jump",
            seed,
            ctx,
            slack: cfg.slack,
            out: &mut out,
        }
        .push("integrated jump", Real::Approx(lhs), Real::Approx(rhs));
    }
    Ok(SuiteReport { rows: out })
}

/// `λ` with `‖·‖_{GC_{q,|B|^λ}}` finite: `λ >= -1/q`.
fn campanato_lambda(r: &mut CorpusRng, ctx: Context, q: &Rational) -> Rational {
    let n = rat(ctx.dim() as i64);
    let inv_q = Rational::from_integer(1.into()) / q;
    pick(r, &[-inv_q.clone(), -inv_q / rat(2), rat(0), rat(1) / (rat(4) * n)])
}

/// `λ` with `‖·‖_{GM_{q,|B|^λ}}` finite for compactly supported step functions: `-1/q <= λ <= 0`.
fn morrey_lambda(r: &mut CorpusRng, q: &Rational) -> Rational {
    let inv_q = Rational::from_integer(1.into()) / q;
    pick(r, &[-inv_q.clone(), -inv_q / rat(2), rat(0)])
}

/// Smallest `J` with every cell of `f` inside `B_J(a)`.
fn reach(f: &StepFunction, a: &PAdicPoint) -> i32 {
    f.cells()
        .map(|(c, _)| match a.distance_exponent(c.center()) {
            Some(d) => (d as i32).max(c.gamma()),
            None => c.gamma(),
        })
        .max()
        .unwrap_or(i32::MIN)
}

/// `∫_{S_j(a)} g` for `g >= 0`.
fn shell_integral(g: &StepFunction, a: &PAdicPoint, j: i32) -> Result<Rational> {
    let outer = Ball::new(j as i64, a.clone())?;
    let inner = Ball::new(j as i64 - 1, a.clone())?;
    Ok(g.integral_over(&outer) - g.integral_over(&inner))
}

/// `Σ_{j=γ+1}^{J} p^{-jn} ∫_{S_j(a)} g`, the shell form of the far-field bound.
fn shell_sum(g: &StepFunction, a: &PAdicPoint, gamma: i32) -> Result<Rational> {
    let ctx = g.context();
    let mut s = Rational::zero();
    for j in gamma + 1..=reach(g, a) {
        s += pow_p(ctx.p(), -(ctx.dim() as i64) * j as i64) * shell_integral(g, a, j)?;
    }
    Ok(s)
}

/// `Σ_{j=γ+1}^{J} (j+1-γ)^m Π_w w(B_j(a))`.
fn weighted_sum(weights: &[&BallWeight], a: &PAdicPoint, gamma: i32, top: i32, m: u32) -> Result<f64> {
    let mut s = 0.0;
    for j in gamma + 1..=top {
        let b = Ball::new(j as i64, a.clone())?;
        let mut t = libm::pow((j + 1 - gamma) as f64, m as f64);
        for w in weights {
            t *= w.weight_of(&b)?.to_f64();
        }
        s += t;
    }
    Ok(s)
}

struct FarField {
    ctx: Context,
    kernel: HomogeneousKernel,
    f: StepFunction,
    a: PAdicPoint,
    gamma: i32,
    x: PAdicPoint,
    k: TruncationIndex,
}

impl FarField {
    fn draw(r: &mut CorpusRng, cfg: &SuiteConfig) -> Result<Self> {
        let ctx = pick(r, &cfg.contexts);
        let kernel = kernel_for(r, ctx)?;
        let f = nonzero_step(r, ctx, &cfg.profile)?;
        let a = point_near(r, ctx, &cfg.profile);
        let lo = f.min_gamma().expect("nonzero") - 1;
        let gamma = r.random_range(lo..=reach(&f, &a).max(lo));
        let ball = Ball::new(gamma as i64, a.clone())?;
        let x = random_point(r, &ball, 3);
        let k = TruncationIndex::new(r.random_range(gamma as i64 - 3..=gamma as i64 + 2))?;
        Ok(FarField {
            ctx,
            kernel,
            f,
            a,
            gamma,
            x,
            k,
        })
    }

    fn ball(&self) -> Ball {
        Ball::new(self.gamma as i64, self.a.clone()).expect("valid exponent")
    }

    /// `(g - g_{B_γ(a)})`, as a step function times `h`.
    fn centered_times(&self, g: &StepFunction, h: &StepFunction) -> Result<StepFunction> {
        let m = g.ball_mean(&self.ball());
        g.mul(h)?.sub(&h.scale(&m))
    }
}

/// The far-field bounds: `|T_k(f χ_{B^c})(x)|` for `x ∈ B_γ(a)` in shell form,
/// after Hölder, and with the Morrey norm; then the one- and two-symbol
/// variants with Campanato norms and the factors `(j+1-γ)`, `(j+1-γ)^2`.
///
/// The `j`-series stops at the first ball around `a` holding all of `f`,
/// past which every shell term vanishes.
pub fn tail_bound_suite(seeds: impl IntoIterator<Item = u64>, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut out = Vec::new();
    for seed in seeds {
        let mut r = rng(seed);
        let ff = FarField::draw(&mut r, cfg)?;
        let mut rows = Rows {
            suite: "tails",
            seed,
            ctx: ff.ctx,
            slack: cfg.slack,
            out: &mut out,
        };
        let omega_sup = ff.kernel.sup_norm();
        let fin = ff.f.restrict_complement(&ff.ball());
        let top = reach(&ff.f, &ff.a);

        let q = pick(&mut r, &[ratio(3, 2), rat(2), rat(3)]);
        let nu = BallWeight::power(morrey_lambda(&mut r, &q));
        let f_norm = gm_norm(&ff.f, &q, &nu, &power_norm_policy(&ff.f)?)?.value;
        let lhs = apply_tk(&ff.kernel, ff.k, &fin, &ff.x)?.abs();
        let shells = &omega_sup * shell_sum(&fin.abs(), &ff.a, ff.gamma)?;
        rows.push("local shells", Real::Exact(lhs.clone()), Real::Exact(shells.clone()));
        let mut holder = 0.0;
        for j in ff.gamma + 1..=top {
            let bj = Ball::new(j as i64, ff.a.clone())?;
            holder += nu.weight_of(&bj)?.to_f64() * gm_ball_value(&ff.f, &q, &nu, &bj)?;
        }
        rows.push("local holder", Real::Exact(shells), Real::Approx(to_f64(&omega_sup) * holder));
        let sum_nu = weighted_sum(&[&nu], &ff.a, ff.gamma, top, 0)?;
        rows.push("far field", Real::Exact(lhs), Real::Approx(to_f64(&omega_sup) * f_norm * sum_nu));

        // one symbol: 1/q + 1/q2 <= 1
        let (q, q2) = pick(&mut r, &[(rat(2), rat(2)), (rat(3), ratio(3, 2)), (rat(3), rat(3)), (rat(4), rat(2))]);
        let nu = BallWeight::power(morrey_lambda(&mut r, &q));
        let nu2 = BallWeight::power(campanato_lambda(&mut r, ff.ctx, &q2));
        let b2 = nonzero_step(&mut r, ff.ctx, &cfg.profile)?;
        let f_norm = gm_norm(&ff.f, &q, &nu, &power_norm_policy(&ff.f)?)?.value;
        let b2_norm = gc_norm(&b2, &q2, &nu2, &power_norm_policy(&b2)?)?.value;
        let h = ff.centered_times(&b2, &fin)?;
        let lhs = apply_tk(&ff.kernel, ff.k, &h, &ff.x)?.abs();
        let shells = &omega_sup * shell_sum(&h.abs(), &ff.a, ff.gamma)?;
        rows.push("one-symbol shells", Real::Exact(lhs.clone()), Real::Exact(shells));
        let s = weighted_sum(&[&nu, &nu2], &ff.a, ff.gamma, top, 1)?;
        rows.push("one-symbol", Real::Exact(lhs), Real::Approx(to_f64(&omega_sup) * f_norm * b2_norm * s));

        // two symbols: 1/q + 1/q1 + 1/q2 <= 1
        let q = rat(3);
        let nu = BallWeight::power(morrey_lambda(&mut r, &q));
        let nu1 = BallWeight::power(campanato_lambda(&mut r, ff.ctx, &q));
        let nu2 = BallWeight::power(campanato_lambda(&mut r, ff.ctx, &q));
        let b1 = nonzero_step(&mut r, ff.ctx, &cfg.profile)?;
        let b2 = nonzero_step(&mut r, ff.ctx, &cfg.profile)?;
        let f_norm = gm_norm(&ff.f, &q, &nu, &power_norm_policy(&ff.f)?)?.value;
        let b1_norm = gc_norm(&b1, &q, &nu1, &power_norm_policy(&b1)?)?.value;
        let b2_norm = gc_norm(&b2, &q, &nu2, &power_norm_policy(&b2)?)?.value;
        let h = ff.centered_times(&b1, &ff.centered_times(&b2, &fin)?)?;
        let lhs = apply_tk(&ff.kernel, ff.k, &h, &ff.x)?.abs();
        let shells = &omega_sup * shell_sum(&h.abs(), &ff.a, ff.gamma)?;
        rows.push("two-symbol shells", Real::Exact(lhs.clone()), Real::Exact(shells));
        let s = weighted_sum(&[&nu, &nu1, &nu2], &ff.a, ff.gamma, top, 2)?;
        rows.push(
            "two-symbol",
            Real::Exact(lhs),
            Real::Approx(to_f64(&omega_sup) * f_norm * b1_norm * b2_norm * s),
        );
    }
    Ok(SuiteReport { rows: out })
}

/// `|T_k^{b} f(x)| <= ‖Ω‖_∞ Π ‖b_i‖_{Λ_{β_i}} Γ_n(β) I^β(|f|)(x)`.
pub fn commutator_domination_suite(seeds: impl IntoIterator<Item = u64>, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut out = Vec::new();
    for seed in seeds {
        let mut r = rng(seed);
        let ctx = pick(&mut r, &cfg.contexts);
        let kernel = kernel_for(&mut r, ctx)?;
        let f = nonzero_step(&mut r, ctx, &cfg.profile)?;
        let m = r.random_range(1..=2usize);
        let choices = [ratio(1, 4), ratio(1, 3), ratio(1, 2), ratio(2, 3)];
        let betas: Vec<Rational> = loop {
            let bs: Vec<Rational> = (0..m).map(|_| pick(&mut r, &choices)).collect();
            if bs.iter().sum::<Rational>() < rat(ctx.dim() as i64) {
                break bs;
            }
        };
        let symbols: Vec<StepFunction> = (0..m)
            .map(|_| nonzero_step(&mut r, ctx, &cfg.profile))
            .collect::<Result<_>>()?;
        let x = point_near(&mut r, ctx, &cfg.profile);
        let k = TruncationIndex::new(r.random_range(-4..=3))?;
        let syms = CommutatorSymbols::new(ctx, symbols)?.with_betas(betas.clone())?;
        let lhs = apply_commutator(&kernel, k, &syms, &f, &x)?.abs();
        let mut lip = 1.0;
        for (b, beta) in syms.symbols().iter().zip(&betas) {
            lip *= lipschitz_norm(b, beta)?.value;
        }
        let beta: Rational = betas.iter().sum();
        let order = RieszOrder::new(ctx, beta.clone())?;
        let rhs = to_f64(&kernel.sup_norm()) * lip * gamma_n(ctx, &beta) * riesz(&order, &f.abs(), &x)?;
        Rows {
            suite: "commutator",
            seed,
            ctx,
            slack: cfg.slack,
            out: &mut out,
        }
        .push("domination", Real::Exact(lhs), Real::Approx(rhs));
    }
    Ok(SuiteReport { rows: out })
}

/// Shorthand used by the unit tests and the CLI: the listed seeds as a vector.
pub fn seeds(from: u64, count: u64) -> Vec<u64> {
    (from..from + count).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(p: u64, n: usize) -> Context {
        Context::new(p, n).unwrap()
    }

    #[test]
    fn deviation_mass_two_cells() {
        let ctx = c(2, 1);
        let b = StepFunction::indicator(&Ball::centered(ctx, -1));
        let m = deviation_mass(&b, &Ball::unit(ctx), &ratio(1, 2), &rat(1));
        assert_eq!(m, Real::Exact(ratio(1, 2)));
    }

    #[test]
    fn mean_jump_fails_beyond_two_children() {
        // b = χ_{3Z_3}, λ = 0, q = 2: the mean jumps by 2/3 between B_{-1} and
        // B_0 while the Campanato norm is sqrt(2)/3
        let ctx = c(3, 1);
        let b = StepFunction::indicator(&Ball::centered(ctx, -1));
        let w = BallWeight::power(rat(0));
        let norm = gc_norm(&b, &rat(2), &w, &power_norm_policy(&b).unwrap()).unwrap().value;
        assert!((norm - libm::sqrt(2.0) / 3.0).abs() < 1e-15);
        let jump = b.ball_mean(&Ball::centered(ctx, -1)) - b.ball_mean(&Ball::unit(ctx));
        assert_eq!(jump, ratio(2, 3));
        assert!(to_f64(&jump) > norm);
    }

    #[test]
    fn mean_jump_holds_for_two_children() {
        let cfg = SuiteConfig {
            contexts: vec![c(2, 1)],
            ..SuiteConfig::default()
        };
        let rep = lemma21_suite(seeds(0, 30), &cfg).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures().next());
    }

    #[test]
    fn one_shell_far_field() {
        // f = χ_{B_0(4)} seen from B_0(0): a single shell j = 2
        let ctx = c(2, 1);
        let one = PAdicPoint::from_ints(ctx, &[1]).unwrap();
        let kernel = HomogeneousKernel::from_fn(ctx, -2, |b| if b.contains(&one) { rat(1) } else { rat(-1) }).unwrap();
        let far = PAdicPoint::in_context(ctx, vec![ratio(1, 4)]).unwrap();
        let f = StepFunction::indicator(&Ball::new(0, far.clone()).unwrap());
        let a = PAdicPoint::zero(ctx);
        assert_eq!(reach(&f, &a), 2);
        let lhs = apply_tk(&kernel, TruncationIndex::new(0).unwrap(), &f, &a).unwrap().abs();
        let shells = shell_sum(&f, &a, 0).unwrap();
        assert_eq!(shells, ratio(1, 4));
        assert!(lhs <= shells);
    }

    #[test]
    fn domination_worked_instance() {
        let ctx = c(2, 1);
        let one = PAdicPoint::from_ints(ctx, &[1]).unwrap();
        let kernel = HomogeneousKernel::from_fn(ctx, -2, |b| if b.contains(&one) { rat(1) } else { rat(-1) }).unwrap();
        let b = StepFunction::indicator(&Ball::unit(ctx));
        let f = StepFunction::indicator(&Ball::new(-2, one).unwrap());
        let x = PAdicPoint::zero(ctx);
        let beta = ratio(1, 2);
        let syms = CommutatorSymbols::new(ctx, vec![b.clone()]).unwrap();
        let lhs = apply_commutator(&kernel, TruncationIndex::new(-3).unwrap(), &syms, &f, &x).unwrap();
        let order = RieszOrder::new(ctx, beta.clone()).unwrap();
        let rhs = lipschitz_norm(&b, &beta).unwrap().value * gamma_n(ctx, &beta) * riesz(&order, &f, &x).unwrap();
        assert!(to_f64(&lhs.abs()) <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn suites_run() {
        let cfg = SuiteConfig::default();
        for rep in [
            integrated_jump_suite(seeds(0, 10), &cfg).unwrap(),
            tail_bound_suite(seeds(0, 6), &cfg).unwrap(),
            commutator_domination_suite(seeds(0, 10), &cfg).unwrap(),
        ] {
            assert!(!rep.rows.is_empty());
        }
    }
}
