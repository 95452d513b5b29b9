//! Acceptance criteria AC1-AC10, one PASS/FAIL line each.
//!
//! Run with `cargo test -p padic-harmonics --test acceptance`; `--release`
//! gives runtimes closer to the limits' intent.

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_traits::Zero;

use padic_harmonics::exec::TaskResult;
use padic_harmonics::model::{self, Task, VerifyPlan};
use padic_harmonics::{execute, load_spec, parse_spec, pretty, spec::to_json, RunOptions};
use padic_harmonics_core::funcs::random::{random_point, rng};
use padic_harmonics_core::funcs::{random_kernel, random_step, RandomProfile};
use padic_harmonics_core::norms::{gc_norm, lipschitz_norm, NormPolicy, TailMode};
use padic_harmonics_core::numeric::{pow_p, rat, ratio, to_f64};
use padic_harmonics_core::operators::{
    annulus_kernel_integral, apply_commutator, apply_t, apply_tk, integrate, local_constancy_scale, TruncationIndex,
};
use padic_harmonics_core::verify::{
    check_series, commutator_domination_suite, instance_seed, integrated_jump_suite, lemma21_suite, operator_output, seeds,
    tail_bound_suite, ConditionKind, Output, SeriesCondition, SeriesOutcome, SeriesPolicy, SuiteConfig, SuiteReport,
};
use padic_harmonics_core::{
    Ball, BallWeight, CommutatorSymbols, Context, HomogeneousKernel, PAdicPoint, Rational, Real, Sphere, StepFunction,
};

const CONTEXTS: [(u64, usize); 6] = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (5, 2)];

type Check = Result<String, String>;

fn ctx(i: usize) -> Context {
    let (p, n) = CONTEXTS[i % CONTEXTS.len()];
    Context::new(p, n).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn manifest(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn ac1() -> Check {
    for i in 0..200 {
        let c = ctx(i);
        let h = instance_seed(1, i);
        let gamma = (h % 13) as i64 - 6;
        let center = random_point(&mut rng(h), &Ball::centered(c, 4), 8);
        let b = Ball::new(gamma, center.clone()).unwrap();
        let kids: Rational = b.children().iter().map(Ball::measure).sum();
        ensure(kids == b.measure(), || format!("children of {b} sum to {kids}"))?;
        let n = c.dim() as i64;
        let sphere = Sphere::new(gamma, center.clone()).unwrap().measure();
        let expected = pow_p(c.p(), n * gamma) * (rat(1) - pow_p(c.p(), -n));
        ensure(sphere == expected, || format!("|S_{gamma}| = {sphere}, expected {expected}"))?;
        // Σ_{k≤γ} |S_k| as a geometric series with ratio p^{-n}
        let series = &sphere / (rat(1) - pow_p(c.p(), -n));
        ensure(series == b.measure(), || format!("shell series {series} vs |B| = {}", b.measure()))?;
        let mut partial = Ball::new(gamma - 10, center.clone()).unwrap().measure();
        for k in gamma - 9..=gamma {
            partial += Sphere::new(k, center.clone()).unwrap().measure();
        }
        ensure(partial == b.measure(), || format!("partial shells {partial} vs {}", b.measure()))?;
    }
    Ok("200 balls over 6 contexts".into())
}

/// Depth keeping the brute-force enumeration near 5000 cells.
fn shallow(c: Context) -> RandomProfile {
    let b = c.branching();
    let depth = (1..=3u32).rev().find(|d| b.pow(d + 2) <= 5_000).unwrap_or(1);
    RandomProfile {
        root_gamma: 0,
        min_depth: 0,
        max_depth: depth,
        max_cells: 6,
        value_bound: 8,
        max_denominator: 8,
    }
}

fn ac2() -> Check {
    let mut cells = 0usize;
    for i in 0..100 {
        let c = ctx(i);
        let f = random_step(instance_seed(2, i), c, &shallow(c)).unwrap();
        let Some(hull) = f.hull() else {
            ensure(integrate(&f).is_zero(), || "zero function integrates to nonzero".into())?;
            continue;
        };
        let fine = hull.descendants(f.min_gamma().unwrap() - 2);
        cells += fine.len();
        let brute: Rational = fine.iter().map(|d| f.eval(d.center()) * d.measure()).sum();
        let exact = integrate(&f);
        ensure(brute == exact, || format!("instance {i}: brute force {brute} vs {exact}"))?;
    }
    Ok(format!("100 functions, {cells} enumerated cells"))
}

fn kernel_level(c: Context) -> i32 {
    if c.branching() > 9 {
        -1
    } else {
        -2
    }
}

fn ac3() -> Check {
    for i in 0..50 {
        let c = ctx(i);
        let k = random_kernel(instance_seed(3, i), c, kernel_level(c), 6).unwrap();
        ensure(!k.sup_norm().is_zero() || i > 0, || "degenerate first kernel".into())?;
        for a in -5..5 {
            for b in a + 1..=5 {
                let v = annulus_kernel_integral(&k, a, b).unwrap();
                ensure(v.is_zero(), || format!("kernel {i}: annulus ({a}, {b}] integrates to {v}"))?;
            }
        }
    }
    Ok("50 kernels, 55 annuli each".into())
}

fn ac4() -> Check {
    let profile = RandomProfile {
        root_gamma: 0,
        min_depth: 0,
        max_depth: 3,
        max_cells: 6,
        value_bound: 8,
        max_denominator: 8,
    };
    let (mut done, mut i, mut inside) = (0, 0usize, 0);
    while done < 100 {
        let c = ctx(i);
        let h = instance_seed(4, i);
        i += 1;
        let kernel = random_kernel(h, c, kernel_level(c), 4).unwrap();
        let f = random_step(h.rotate_left(17), c, &profile).unwrap();
        // every other point sits in a cell of f
        let around = match f.cells().nth((h % 7) as usize % f.len().max(1)) {
            Some((cell, _)) if i % 2 == 0 => cell.clone(),
            _ => Ball::centered(c, 2),
        };
        let x = random_point(&mut rng(h.rotate_left(31)), &around, 5);
        let Some(k_star) = local_constancy_scale(&f, &x) else {
            continue;
        };
        inside += usize::from(f.cell_at(&x).is_some());
        let tk = |k: i32| apply_tk(&kernel, TruncationIndex::new(k as i64).unwrap(), &f, &x).unwrap();
        let v = tk(k_star - 1);
        for k in [k_star - 2, k_star - 3] {
            let w = tk(k);
            ensure(w == v, || format!("instance {i}: T_{k} = {w} but T_{} = {v}", k_star - 1))?;
        }
        let t = apply_t(&kernel, &f, &x).unwrap();
        ensure(t == v, || format!("instance {i}: T = {t}, stabilized value {v}"))?;
        done += 1;
    }
    Ok(format!("100 triples, {inside} points inside the support"))
}

fn omega2() -> HomogeneousKernel {
    let c = Context::new(2, 1).unwrap();
    let one = PAdicPoint::from_ints(c, &[1]).unwrap();
    HomogeneousKernel::from_fn(c, -2, |b| if b.contains(&one) { rat(1) } else { rat(-1) }).unwrap()
}

fn ac5() -> Check {
    let c = Context::new(2, 1).unwrap();
    let kernel = omega2();
    let f = StepFunction::indicator(&Ball::new(-2, PAdicPoint::from_ints(c, &[1]).unwrap()).unwrap());
    let zero = PAdicPoint::zero(c);
    let k = TruncationIndex::new(-3).unwrap();
    let t = apply_tk(&kernel, k, &f, &zero).unwrap();
    ensure(t == ratio(-1, 4), || format!("T_-3 = {t}"))?;
    let syms = CommutatorSymbols::new(c, vec![f.clone()]).unwrap();
    let comm = apply_commutator(&kernel, k, &syms, &f, &zero).unwrap();
    ensure(comm == ratio(1, 4), || format!("commutator = {comm}"))?;
    let unit = StepFunction::indicator(&Ball::unit(c));
    for (num, den) in [(1, 4), (1, 2), (3, 4)] {
        let beta = ratio(num, den);
        let v = lipschitz_norm(&unit, &beta).unwrap().value;
        let want = 2f64.powf(-(num as f64) / den as f64);
        ensure((v - want).abs() <= 1e-12, || format!("Lipschitz norm at β = {num}/{den}: {v} vs {want}"))?;
    }
    Ok("T_-3 = -1/4, commutator = 1/4, Lipschitz norms 2^-β".into())
}

fn suite_summary(name: &str, rep: &SuiteReport) -> Result<String, String> {
    match rep.failures().next() {
        None => Ok(format!("{name}: {} rows", rep.rows.len())),
        Some(r) => Err(format!(
            "{name}: {} of {} rows fail, first at seed {} ({}): {} > {}",
            rep.failures().count(),
            rep.rows.len(),
            r.seed,
            r.check,
            r.lhs,
            r.rhs
        )),
    }
}

fn ac6() -> Check {
    let cfg = SuiteConfig::default();
    let jumps = lemma21_suite(seeds(0, 100), &cfg).unwrap();
    let integrated = integrated_jump_suite(seeds(0, 100), &cfg).unwrap();
    for r in jumps.rows.iter().filter(|r| r.check == "mean jump j=k") {
        let zero = Real::Exact(Rational::zero());
        ensure(r.lhs == zero && r.rhs == zero && r.pass, || format!("j = k row at seed {}: {} vs {}", r.seed, r.lhs, r.rhs))?;
    }
    let a = suite_summary("mean jump", &jumps)?;
    let b = suite_summary("integrated jump", &integrated)?;
    Ok(format!("{a}; {b}; slack {:e}", cfg.slack))
}

/// Known exceptions outside the sampled instances, recomputed here.
fn ac6_notes() -> Vec<String> {
    let mut notes = Vec::new();
    let c = Context::new(3, 1).unwrap();
    let b = StepFunction::indicator(&Ball::centered(c, -1));
    let policy = NormPolicy::covering(&b, 1, TailMode::ClosedFormPower).unwrap();
    let norm = gc_norm(&b, &rat(2), &BallWeight::power(rat(0)), &policy).unwrap().value;
    let jump = b.ball_mean(&Ball::centered(c, -1)) - b.ball_mean(&Ball::unit(c));
    notes.push(format!(
        "mean jump fails for p^n > 2: p = 3, b = χ(3Z_3), q = 2, λ = 0 gives jump {jump} = {:.6} between B_-1 and B_0 against a bound of {norm:.6}",
        to_f64(&jump)
    ));
    let rep = integrated_jump_suite([160, 179], &SuiteConfig::default()).unwrap();
    let failing: Vec<String> = rep
        .failures()
        .map(|r| format!("seed {} (p = {}, n = {}): {:.6} > {:.6}", r.seed, r.context.p(), r.context.dim(), r.lhs.to_f64(), r.rhs.to_f64()))
        .collect();
    if !failing.is_empty() {
        notes.push(format!("integrated jump fails beyond the sampled seeds: {}", failing.join("; ")));
    }
    notes
}

fn cond(kind: ConditionKind, c: Context, omega: Rational, nu: Rational, gamma: i32) -> SeriesOutcome {
    let cond = SeriesCondition {
        kind,
        omega: BallWeight::power(omega),
        nu: BallWeight::power(nu),
        nus: Vec::new(),
        anchor: PAdicPoint::zero(c),
        gamma,
    };
    check_series(&cond, &SeriesPolicy::default()).unwrap()
}

fn ac7() -> Check {
    let lambdas = [ratio(-2, 1), ratio(-1, 1), ratio(-1, 2), ratio(-1, 4), rat(0), ratio(1, 4), rat(1)];
    let mut exact = 0;
    for i in 0..6 {
        let c = ctx(i);
        let n = rat(c.dim() as i64);
        for l in &lambdas {
            for gamma in [-3, 0, 2] {
                let out = cond(ConditionKind::Cond31, c, l.clone(), l.clone(), gamma);
                let negative = *l < rat(0);
                match (&out, negative) {
                    (SeriesOutcome::Converges { value, .. }, true) => {
                        let e = &n * l;
                        if e.is_integer() {
                            let want = rat(1) / (rat(1) - pow_p(c.p(), e.to_integer().try_into().unwrap()));
                            ensure(*value == Real::Exact(want.clone()), || format!("{c:?}, λ = {l}: {value} vs {want}"))?;
                            exact += 1;
                        } else {
                            let want = 1.0 / (1.0 - (c.p() as f64).powf(to_f64(&e)));
                            ensure(rel_close(value.to_f64(), want, 1e-12), || format!("{c:?}, λ = {l}: {value} vs {want}"))?;
                        }
                    }
                    (SeriesOutcome::Diverges { .. }, false) => {}
                    _ => return Err(format!("{c:?}, λ = {l}, γ = {gamma}: unexpected {out:?}")),
                }
            }
        }
        let grid_l = [ratio(-1, 1), ratio(-1, 2), ratio(-1, 4), rat(0), ratio(1, 4)];
        let grid_b = [ratio(1, 8), ratio(1, 4), ratio(1, 2), ratio(3, 4), ratio(7, 8)];
        for l in &grid_l {
            for beta in &grid_b {
                let omega = l + beta / &n;
                let out = cond(ConditionKind::Cond32 { beta: beta.clone() }, c, omega, l.clone(), 0);
                let should = &n * l + beta < rat(0);
                ensure(out.converges() == should, || format!("{c:?}, λ = {l}, β = {beta}: {out:?}"))?;
                ensure(!matches!(out, SeriesOutcome::Indeterminate { .. }), || format!("indeterminate at λ = {l}, β = {beta}"))?;
            }
        }
    }
    Ok(format!("cond31 on 6 contexts x 7 exponents x 3 anchors ({exact} exact values), cond32 on 6 x 5x5 grids"))
}

/// `sup_B ω(B)^{-1} (|B|^{-1} ∫_B |g|^q)^{1/q}` for `ω(B) = |B|^λ`, by
/// enumerating every ball of the finest level inside the support's hull and
/// aggregating upwards, plus 60 levels below and 200 above.
fn brute_gm(c: Context, cells: &[Ball], eval: &dyn Fn(&PAdicPoint) -> f64, q: f64, lambda: f64) -> f64 {
    let Some(first) = cells.first() else {
        return 0.0;
    };
    let mut hull = first.clone();
    for b in cells {
        while !hull.contains_ball(b) {
            hull = hull.parent();
        }
    }
    let fine = cells.iter().map(Ball::gamma).min().unwrap();
    let (p, n) = (c.p() as f64, c.dim() as f64);
    let vol = |g: i32| p.powf(n * g as f64);
    let value = |mass: f64, g: i32| {
        if mass == 0.0 {
            0.0
        } else {
            (mass / vol(g)).powf(1.0 / q) / vol(g).powf(lambda)
        }
    };
    let mut level: BTreeMap<Ball, f64> = BTreeMap::new();
    let mut best = 0.0f64;
    for d in hull.descendants(fine) {
        let v = eval(d.center()).abs();
        for g in fine - 60..fine {
            best = best.max(value(v.powf(q) * vol(g), g));
        }
        level.insert(d, v.powf(q) * vol(fine));
    }
    for g in fine..=hull.gamma() {
        for m in level.values() {
            best = best.max(value(*m, g));
        }
        if g < hull.gamma() {
            let mut up = BTreeMap::new();
            for (b, m) in level {
                *up.entry(b.parent()).or_insert(0.0) += m;
            }
            level = up;
        }
    }
    let total: f64 = level.values().sum();
    for g in hull.gamma() + 1..=hull.gamma() + 200 {
        best = best.max(value(total, g));
    }
    best
}

fn power(w: &BallWeight) -> f64 {
    to_f64(w.power_lambda().expect("power weights"))
}

fn ac8() -> Check {
    let specs = ["tests/specs/theorems-2-1.json", "tests/specs/theorems-3-1.json"];
    let (mut experiments, mut instances, mut compared) = (0, 0, 0);
    for path in specs {
        let spec = load_spec(&manifest(path)).map_err(|e| e.to_string())?;
        let (_, model) = model::build(&spec).unwrap();
        let opts = |jobs| RunOptions { jobs, ..RunOptions::default() };
        let one = execute(&spec, &opts(1), "-").unwrap();
        let four = execute(&spec, &opts(4), "-").unwrap();
        let again = execute(&spec, &opts(4), "-").unwrap();
        let text = pretty(&one.report);
        ensure(text == pretty(&four.report), || format!("{path}: report differs between 1 and 4 jobs"))?;
        ensure(text == pretty(&again.report), || format!("{path}: report differs between reruns"))?;
        for (task, outcome) in model.tasks.iter().zip(&one.outcomes) {
            let Task::Verify { plan: VerifyPlan::Theorem(es), .. } = task else {
                continue;
            };
            let Ok(TaskResult::Theorem(reports)) = &outcome.result else {
                return Err(format!("{}: {:?}", outcome.id, outcome.result.as_ref().err()));
            };
            for (e, rep) in es.iter().zip(reports) {
                experiments += 1;
                ensure(rep.instances.len() == 50, || format!("{}: {} instances", outcome.id, rep.instances.len()))?;
                ensure(rep.all_ratios_finite(), || format!("{} {}: infinite ratio", outcome.id, rep.operator))?;
                for inst in &rep.instances {
                    instances += 1;
                    let (Some(src), Some(tgt)) = (&inst.source, &inst.target) else {
                        continue;
                    };
                    let f = &inst.function;
                    let fcells: Vec<Ball> = f.cells().map(|(b, _)| b.clone()).collect();
                    let s = brute_gm(e.context, &fcells, &|x| to_f64(&f.eval(x)), to_f64(&e.source.q), power(&e.source.weight));
                    let t = match operator_output(e, f).unwrap() {
                        Output::Exact(g) => {
                            let cells: Vec<Ball> = g.cells().map(|(b, _)| b.clone()).collect();
                            brute_gm(e.context, &cells, &|x| to_f64(&g.eval(x)), to_f64(&e.target.q), power(&e.target.weight))
                        }
                        Output::Real(g) => {
                            let cells: Vec<Ball> = g.cells().map(|(b, _)| b.clone()).collect();
                            brute_gm(e.context, &cells, &|x| g.eval(x), to_f64(&e.target.q), power(&e.target.weight))
                        }
                    };
                    for (which, got, want) in [("source", src.value, s), ("target", tgt.value, t)] {
                        ensure(rel_close(got, want, 1e-9), || {
                            format!("{} {} instance {}: {which} norm {got} vs brute force {want}", outcome.id, rep.operator, inst.id)
                        })?;
                    }
                    compared += 1;
                }
            }
        }
    }
    Ok(format!(
        "{experiments} experiments, {instances} instances, {compared} norm pairs brute-forced, reports identical for jobs 1/4 and reruns"
    ))
}

fn ac9() -> Check {
    let cfg = SuiteConfig::default();
    let tails = tail_bound_suite(seeds(0, 100), &cfg).unwrap();
    let dom = commutator_domination_suite(seeds(0, 100), &cfg).unwrap();
    let a = suite_summary("tail bounds", &tails)?;
    let b = suite_summary("commutator domination", &dom)?;
    Ok(format!("{a}; {b}"))
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_padic-harmonics"))
        .args(args)
        .env_remove("PADIC_HARMONICS_JOBS")
        .output()
        .unwrap()
}

fn masked(report: &str) -> String {
    report
        .lines()
        .map(|l| {
            if l.trim_start().starts_with("\"timestamp\"") {
                "  \"timestamp\": \"<masked>\"".to_string()
            } else {
                l.to_string()
            }
        })
        .map(|l| l + "\n")
        .collect()
}

fn ac10() -> Check {
    let worked = manifest("specs/worked.json");
    let worked_s = worked.to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(name);

    let canon = cli(&["validate", "--spec", worked_s, "--canonical"]);
    ensure(canon.status.code() == Some(0), || "validate failed".into())?;
    let text = String::from_utf8(canon.stdout).unwrap();
    let reparsed = parse_spec(&text).map_err(|e| e.to_string())?;
    ensure(to_json(&reparsed) == text, || "canonical spec does not round-trip".into())?;

    let golden = fs::read_to_string(manifest("tests/golden/worked.report.json")).unwrap();
    let mut reports = Vec::new();
    for (name, jobs) in [("a", "1"), ("b", "3")] {
        let o = cli(&["run", "--spec", worked_s, "--out", out(name).to_str().unwrap(), "--jobs", jobs]);
        ensure(o.status.code() == Some(0), || format!("worked spec exited {:?}", o.status.code()))?;
        reports.push(masked(&fs::read_to_string(out(name).join("report.json")).unwrap()));
    }
    ensure(reports[0] == reports[1], || "report bytes differ between runs".into())?;
    ensure(reports[0] == golden, || "report differs from the golden file".into())?;
    for needle in ["\"integral\": \"1/4\"", "\"value\": \"-1/4\"", "\"value\": \"-1/8\""] {
        ensure(golden.contains(needle), || format!("golden report lacks {needle}"))?;
    }

    let failing = manifest("tests/specs/integrated_jump_160.json");
    let o = cli(&["run", "--spec", failing.to_str().unwrap(), "--out", out("fail").to_str().unwrap()]);
    ensure(o.status.code() == Some(1), || format!("failing task exited {:?}", o.status.code()))?;

    let bad = fs::read_to_string(&worked).unwrap().replace("\"value\": \"-1\"", "\"value\": \"-2\"");
    let bad_path = out("bad.json");
    fs::write(&bad_path, bad).unwrap();
    let o = cli(&["run", "--spec", bad_path.to_str().unwrap(), "--out", out("bad").to_str().unwrap()]);
    ensure(o.status.code() == Some(2), || format!("invalid spec exited {:?}", o.status.code()))?;
    ensure(String::from_utf8_lossy(&o.stderr).contains("mean-zero violated"), || "missing mean-zero message".into())?;
    let o = cli(&["run", "--spec", worked_s]);
    ensure(o.status.code() == Some(2), || "missing --out accepted".into())?;
    Ok("round-trip, golden bytes, exit codes 0/1/2, num/den values".into())
}

struct Criterion {
    id: &'static str,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: "AC1", title: "exact measure identities", limit: Some(Duration::from_secs(1)), run: ac1 },
        Criterion { id: "AC2", title: "integration vs brute force", limit: Some(Duration::from_secs(5)), run: ac2 },
        Criterion { id: "AC3", title: "kernel cancellation", limit: Some(Duration::from_secs(5)), run: ac3 },
        Criterion { id: "AC4", title: "stabilization of T", limit: Some(Duration::from_secs(10)), run: ac4 },
        Criterion { id: "AC5", title: "worked values", limit: None, run: ac5 },
        Criterion { id: "AC6", title: "mean jump suites", limit: None, run: ac6 },
        Criterion { id: "AC7", title: "condition checkers", limit: None, run: ac7 },
        Criterion { id: "AC8", title: "theorem ratio experiments", limit: Some(Duration::from_secs(300)), run: ac8 },
        Criterion { id: "AC9", title: "tail bounds and domination", limit: None, run: ac9 },
        Criterion { id: "AC10", title: "CLI contract", limit: None, run: ac10 },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        let time = match c.limit {
            Some(l) => format!("{:.3}s of {}s", elapsed.as_secs_f64(), l.as_secs()),
            None => format!("{:.3}s", elapsed.as_secs_f64()),
        };
        match result {
            Ok(detail) => println!("{:<4} PASS  {}: {detail} [{time}]", c.id, c.title),
            Err(detail) => {
                failed += 1;
                println!("{:<4} FAIL  {}: {detail} [{time}]", c.id, c.title);
            }
        }
        if c.id == "AC6" {
            for note in ac6_notes() {
                println!("      NOTE  {note}");
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
