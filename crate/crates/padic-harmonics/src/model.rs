//! Resolution of a parsed spec into core objects.

use std::collections::BTreeMap;

use padic_harmonics_core::funcs::{CampanatoData, PowerLaw, RandomProfile};
use padic_harmonics_core::norms::TailMode;
use padic_harmonics_core::numeric::{parse_rational, pow_p, rat, render, Rational};
use padic_harmonics_core::verify::{
    ConditionKind, Corpus, ExperimentPolicy, NormSpec as CoreNormSpec, OperatorSpec as CoreOperator, RatioExperiment,
    SeriesCondition, SeriesPolicy, SuiteConfig, Theorem,
};
use padic_harmonics_core::{Ball, BallWeight, CommutatorSymbols, Context, HomogeneousKernel, PAdicPoint, StepFunction};

use crate::spec::{
    BallSpec, CellSpec, ConditionSpec, ExperimentSpec, KernelSpec, NormKind, NormSpec, OperatorSpec, PolicySpec,
    PowerLawSpec, SpecError, SuiteKind, SymbolsSpec, TailModeSpec, TaskSpec, WeightSpec, SCHEMA,
};

#[derive(Debug, Clone)]
pub struct Policy {
    pub window_margin: i32,
    pub norm_margin: i32,
    pub tail_mode: TailMode,
    pub float_rel_tol: f64,
    pub series_terms: u32,
    pub slack: f64,
}

impl Policy {
    pub fn series(&self) -> SeriesPolicy {
        SeriesPolicy {
            terms: self.series_terms,
            tail_mode: self.tail_mode,
            float_rel_tol: self.float_rel_tol,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Operator {
    Tk(i32),
    T,
    Commutator { k: i32, symbols: CommutatorSymbols },
    Riesz(Rational),
}

#[derive(Debug, Clone)]
pub enum NormTask {
    Lq { q: Rational },
    Gm { q: Rational, weight: BallWeight },
    Cm { q: Rational, lambda: Rational },
    Gc { q: Rational, weight: BallWeight },
    Cbmo { q: Rational, lambda: Rational },
    Lip { beta: Rational },
}

#[derive(Debug, Clone)]
pub enum VerifyPlan {
    /// One experiment per operator.
    Theorem(Vec<RatioExperiment>),
    Lemma21 { seeds: Vec<u64>, config: SuiteConfig },
    Tails { seeds: Vec<u64>, config: SuiteConfig },
}

#[derive(Debug, Clone)]
pub enum Task {
    Integrate {
        id: String,
        function: StepFunction,
        region: Option<Ball>,
    },
    Apply {
        id: String,
        operator: Operator,
        function: StepFunction,
        points: Vec<PAdicPoint>,
    },
    Norm {
        id: String,
        norm: NormTask,
        function: StepFunction,
    },
    Check {
        id: String,
        condition: SeriesCondition,
    },
    Verify {
        id: String,
        suite: SuiteKind,
        plan: VerifyPlan,
    },
}

impl Task {
    pub fn id(&self) -> &str {
        match self {
            Task::Integrate { id, .. }
            | Task::Apply { id, .. }
            | Task::Norm { id, .. }
            | Task::Check { id, .. }
            | Task::Verify { id, .. } => id,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Model {
    pub ctx: Context,
    pub kernel: Option<HomogeneousKernel>,
    pub functions: BTreeMap<String, StepFunction>,
    pub weights: BTreeMap<String, BallWeight>,
    pub tasks: Vec<Task>,
    pub seed: u64,
    pub policy: Policy,
}

fn invalid(field: &str, message: impl ToString) -> SpecError {
    SpecError::invalid(field, message)
}

fn rational(field: &str, s: &str) -> Result<(Rational, String), SpecError> {
    let r = parse_rational(s).map_err(|e| invalid(field, e))?;
    let text = render(&r);
    Ok((r, text))
}

fn point(field: &str, ctx: Context, coords: &[String]) -> Result<PAdicPoint, SpecError> {
    let xs = coords
        .iter()
        .enumerate()
        .map(|(i, c)| rational(&format!("{field}[{i}]"), c).map(|r| r.0))
        .collect::<Result<Vec<_>, _>>()?;
    PAdicPoint::in_context(ctx, xs).map_err(|e| invalid(field, e))
}

fn render_point(x: &PAdicPoint) -> Vec<String> {
    x.coords().iter().map(render).collect()
}

fn ball(field: &str, ctx: Context, b: &BallSpec) -> Result<(Ball, BallSpec), SpecError> {
    let c = point(&format!("{field}.center"), ctx, &b.center)?;
    let ball = Ball::new(b.gamma as i64, c).map_err(|e| invalid(field, e))?;
    let canon = BallSpec {
        gamma: b.gamma,
        center: render_point(ball.center()),
    };
    Ok((ball, canon))
}

/// Parsed cells and their canonical spelling.
type Cells = (Vec<(Ball, Rational)>, Vec<CellSpec>);

fn cells(field: &str, ctx: Context, cs: &[CellSpec]) -> Result<Cells, SpecError> {
    let mut out = Vec::new();
    let mut canon = Vec::new();
    for (i, c) in cs.iter().enumerate() {
        let f = format!("{field}[{i}]");
        let (b, bs) = ball(
            &f,
            ctx,
            &BallSpec {
                gamma: c.gamma,
                center: c.center.clone(),
            },
        )?;
        let (v, vs) = rational(&format!("{f}.value"), &c.value)?;
        out.push((b, v));
        canon.push(CellSpec {
            gamma: bs.gamma,
            center: bs.center,
            value: vs,
        });
    }
    Ok((out, canon))
}

fn kernel(ctx: Context, k: &KernelSpec) -> Result<(HomogeneousKernel, KernelSpec), SpecError> {
    let p = ctx.p();
    let depth = -k.level;
    if depth < 1 {
        return Err(invalid("kernel.level", format!("{} must be at most -1", k.level)));
    }
    let mut balls = Vec::new();
    let mut canon = k.clone();
    for (i, cell) in k.cells.iter().enumerate() {
        let f = format!("kernel.cells[{i}]");
        if cell.digits.len() != ctx.dim() {
            return Err(invalid(
                &format!("{f}.digits"),
                format!("{} coordinates, expected {}", cell.digits.len(), ctx.dim()),
            ));
        }
        let mut coords = Vec::new();
        for (j, ds) in cell.digits.iter().enumerate() {
            if ds.len() != depth as usize {
                return Err(invalid(
                    &format!("{f}.digits[{j}]"),
                    format!("{} digits, expected {depth}", ds.len()),
                ));
            }
            if let Some(d) = ds.iter().find(|&&d| d >= p) {
                return Err(invalid(&format!("{f}.digits[{j}]"), format!("digit {d} is not below p = {p}")));
            }
            coords.push(ds.iter().enumerate().map(|(e, &d)| rat(d as i64) * pow_p(p, e as i64)).sum::<Rational>());
        }
        let c = PAdicPoint::in_context(ctx, coords).map_err(|e| invalid(&f, e))?;
        let b = Ball::new(k.level as i64, c).map_err(|e| invalid(&f, e))?;
        let (v, vs) = rational(&format!("{f}.value"), &cell.value)?;
        canon.cells[i].value = vs;
        balls.push((b, v));
    }
    let kernel = HomogeneousKernel::new(ctx, k.level, balls).map_err(|e| invalid("kernel.cells", e))?;
    Ok((kernel, canon))
}

fn tail_mode(t: &TailModeSpec) -> Result<TailMode, SpecError> {
    Ok(match t {
        TailModeSpec::ClosedFormPower => TailMode::ClosedFormPower,
        TailModeSpec::WindowOnly => TailMode::WindowOnly,
        TailModeSpec::GeometricBound { ratio } => {
            if !(*ratio > 0.0 && *ratio < 1.0) {
                return Err(invalid("policy.tail_mode.geometric_bound.ratio", format!("{ratio} is outside (0, 1)")));
            }
            TailMode::GeometricBound { ratio: *ratio }
        }
    })
}

fn policy(p: &PolicySpec) -> Result<Policy, SpecError> {
    if !(p.float_rel_tol >= 0.0 && p.float_rel_tol < 1.0) {
        return Err(invalid("policy.float_rel_tol", format!("{} is outside [0, 1)", p.float_rel_tol)));
    }
    if !(p.slack >= 0.0 && p.slack.is_finite()) {
        return Err(invalid("policy.slack", format!("{} is not a nonnegative number", p.slack)));
    }
    if p.norm_margin < 0 {
        return Err(invalid("policy.norm_margin", "must be nonnegative"));
    }
    if p.series_terms < 4 {
        return Err(invalid("policy.series_terms", "at least 4 terms are needed for the ratio check"));
    }
    Ok(Policy {
        window_margin: p.window_margin,
        norm_margin: p.norm_margin,
        tail_mode: tail_mode(&p.tail_mode)?,
        float_rel_tol: p.float_rel_tol,
        series_terms: p.series_terms,
        slack: p.slack,
    })
}

/// Name lookups with precise errors.
struct Scope<'a> {
    functions: &'a BTreeMap<String, StepFunction>,
    weights: &'a BTreeMap<String, BallWeight>,
}

impl Scope<'_> {
    fn function(&self, field: &str, name: &str) -> Result<StepFunction, SpecError> {
        self.functions
            .get(name)
            .cloned()
            .ok_or_else(|| invalid(field, format!("unknown function {name:?}")))
    }

    fn weight(&self, field: &str, name: &str) -> Result<BallWeight, SpecError> {
        self.weights
            .get(name)
            .cloned()
            .ok_or_else(|| invalid(field, format!("unknown weight {name:?}")))
    }

    fn norm_spec(&self, field: &str, n: &NormSpec) -> Result<(CoreNormSpec, NormSpec), SpecError> {
        let (q, qs) = rational(&format!("{field}.q"), &n.q)?;
        let weight = self.weight(&format!("{field}.weight"), &n.weight)?;
        Ok((
            CoreNormSpec { q, weight },
            NormSpec {
                q: qs,
                weight: n.weight.clone(),
            },
        ))
    }

    fn symbols(&self, field: &str, ctx: Context, s: &SymbolsSpec) -> Result<(CommutatorSymbols, SymbolsSpec), SpecError> {
        let fs = s
            .functions
            .iter()
            .enumerate()
            .map(|(i, n)| self.function(&format!("{field}.functions[{i}]"), n))
            .collect::<Result<Vec<_>, _>>()?;
        let mut syms = CommutatorSymbols::new(ctx, fs).map_err(|e| invalid(&format!("{field}.functions"), e))?;
        let mut canon = s.clone();
        if let Some(betas) = &s.betas {
            let mut bs = Vec::new();
            let mut texts = Vec::new();
            for (i, b) in betas.iter().enumerate() {
                let (r, t) = rational(&format!("{field}.betas[{i}]"), b)?;
                bs.push(r);
                texts.push(t);
            }
            syms = syms.with_betas(bs).map_err(|e| invalid(&format!("{field}.betas"), e))?;
            canon.betas = Some(texts);
        }
        if let Some(data) = &s.campanato {
            let mut ds = Vec::new();
            let mut texts = Vec::new();
            for (i, d) in data.iter().enumerate() {
                let (n, t) = self.norm_spec(&format!("{field}.campanato[{i}]"), d)?;
                ds.push(CampanatoData { q: n.q, weight: n.weight });
                texts.push(t);
            }
            syms = syms.with_campanato(ds).map_err(|e| invalid(&format!("{field}.campanato"), e))?;
            canon.campanato = Some(texts);
        }
        Ok((syms, canon))
    }

    fn operator(&self, field: &str, ctx: Context, o: &OperatorSpec) -> Result<(Operator, OperatorSpec), SpecError> {
        Ok(match o {
            OperatorSpec::Tk { k } => (Operator::Tk(*k), o.clone()),
            OperatorSpec::T => (Operator::T, o.clone()),
            OperatorSpec::Commutator { k, symbols } => {
                let (s, canon) = self.symbols(&format!("{field}.symbols"), ctx, symbols)?;
                (
                    Operator::Commutator { k: *k, symbols: s },
                    OperatorSpec::Commutator { k: *k, symbols: canon },
                )
            }
            OperatorSpec::Riesz { alpha } => {
                let (a, t) = rational(&format!("{field}.alpha"), alpha)?;
                (Operator::Riesz(a), OperatorSpec::Riesz { alpha: t })
            }
        })
    }
}

fn core_operator(op: &Operator) -> (CoreOperator, Option<CommutatorSymbols>) {
    match op {
        Operator::Tk(k) => (CoreOperator::Tk { k: *k }, None),
        Operator::T => (CoreOperator::T, None),
        Operator::Commutator { k, symbols } => (CoreOperator::Commutator { k: *k }, Some(symbols.clone())),
        Operator::Riesz(a) => (CoreOperator::Riesz { alpha: a.clone() }, None),
    }
}

fn require<'a, T>(field: &str, v: &'a Option<T>, what: &str) -> Result<&'a T, SpecError> {
    v.as_ref().ok_or_else(|| invalid(field, format!("{what} is required")))
}

/// Validates `spec` and returns its canonical form with the resolved model.
pub fn build(spec: &ExperimentSpec) -> Result<(ExperimentSpec, Model), SpecError> {
    if spec.schema != SCHEMA {
        return Err(invalid("schema", format!("expected {SCHEMA:?}, found {:?}", spec.schema)));
    }
    let ctx = Context::new(spec.context.p, spec.context.n).map_err(|e| invalid("context", e))?;
    let mut canon = spec.clone();
    let pol = policy(&spec.policy)?;

    let kernel = match &spec.kernel {
        Some(k) => {
            let (kernel, kc) = kernel(ctx, k)?;
            canon.kernel = Some(kc);
            Some(kernel)
        }
        None => None,
    };

    let mut functions = BTreeMap::new();
    for (i, f) in spec.functions.iter().enumerate() {
        let field = format!("functions[{i}]");
        let (cs, cc) = cells(&format!("{field}.cells"), ctx, &f.cells)?;
        let step = StepFunction::from_cells(ctx, cs).map_err(|e| invalid(&format!("{field}.cells"), e))?;
        if functions.insert(f.name.clone(), step).is_some() {
            return Err(invalid(&format!("{field}.name"), format!("duplicate function {:?}", f.name)));
        }
        canon.functions[i].cells = cc;
    }

    let mut weights = BTreeMap::new();
    for (i, w) in spec.weights.iter().enumerate() {
        let field = format!("weights[{i}]");
        let (weight, wc) = match w {
            WeightSpec::Power { name, lambda } => {
                let (l, t) = rational(&format!("{field}.lambda"), lambda)?;
                (
                    BallWeight::power(l),
                    WeightSpec::Power {
                        name: name.clone(),
                        lambda: t,
                    },
                )
            }
            WeightSpec::StepIntegral {
                name,
                density,
                background,
            } => {
                let g = functions
                    .get(density)
                    .cloned()
                    .ok_or_else(|| invalid(&format!("{field}.density"), format!("unknown function {density:?}")))?;
                let (bg, t) = rational(&format!("{field}.background"), background)?;
                (
                    BallWeight::step_integral(g, bg).map_err(|e| invalid(&field, e))?,
                    WeightSpec::StepIntegral {
                        name: name.clone(),
                        density: density.clone(),
                        background: t,
                    },
                )
            }
            WeightSpec::Tabulated {
                name,
                entries,
                fallback,
            } => {
                let (es, ec) = cells(&format!("{field}.entries"), ctx, entries)?;
                let (law, lc) = match fallback {
                    Some(fb) => {
                        let (coef, ct) = rational(&format!("{field}.fallback.coef"), &fb.coef)?;
                        let (lambda, lt) = rational(&format!("{field}.fallback.lambda"), &fb.lambda)?;
                        (
                            Some(PowerLaw { coef, lambda }),
                            Some(PowerLawSpec { coef: ct, lambda: lt }),
                        )
                    }
                    None => (None, None),
                };
                (
                    BallWeight::tabulated(ctx, es, law).map_err(|e| invalid(&field, e))?,
                    WeightSpec::Tabulated {
                        name: name.clone(),
                        entries: ec,
                        fallback: lc,
                    },
                )
            }
        };
        if weights.insert(w.name().to_string(), weight).is_some() {
            return Err(invalid(&format!("{field}.name"), format!("duplicate weight {:?}", w.name())));
        }
        canon.weights[i] = wc;
    }

    let scope = Scope {
        functions: &functions,
        weights: &weights,
    };
    let mut ids = std::collections::BTreeSet::new();
    let mut tasks = Vec::new();
    for (i, t) in spec.tasks.iter().enumerate() {
        let field = format!("tasks[{i}]");
        if t.id().is_empty() || !t.id().chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            return Err(invalid(
                &format!("{field}.id"),
                format!("{:?} must be nonempty ASCII letters, digits, '-', '_' or '.'", t.id()),
            ));
        }
        if !ids.insert(t.id().to_string()) {
            return Err(invalid(&format!("{field}.id"), format!("duplicate task id {:?}", t.id())));
        }
        let (task, tc) = build_task(&field, t, ctx, kernel.as_ref(), &scope, &pol, spec.seed)?;
        tasks.push(task);
        canon.tasks[i] = tc;
    }

    Ok((
        canon,
        Model {
            ctx,
            kernel,
            functions,
            weights,
            tasks,
            seed: spec.seed,
            policy: pol,
        },
    ))
}

fn need_kernel<'a>(field: &str, kernel: Option<&'a HomogeneousKernel>) -> Result<&'a HomogeneousKernel, SpecError> {
    kernel.ok_or_else(|| invalid(field, "the spec has no kernel"))
}

fn build_task(
    field: &str,
    t: &TaskSpec,
    ctx: Context,
    kernel: Option<&HomogeneousKernel>,
    scope: &Scope<'_>,
    pol: &Policy,
    seed: u64,
) -> Result<(Task, TaskSpec), SpecError> {
    let mut canon = t.clone();
    let task = match t {
        TaskSpec::Integrate { id, function, region } => {
            let f = scope.function(&format!("{field}.function"), function)?;
            let region = match region {
                Some(r) => {
                    let (b, bc) = ball(&format!("{field}.region"), ctx, r)?;
                    if let TaskSpec::Integrate { region, .. } = &mut canon {
                        *region = Some(bc);
                    }
                    Some(b)
                }
                None => None,
            };
            Task::Integrate {
                id: id.clone(),
                function: f,
                region,
            }
        }
        TaskSpec::Apply {
            id,
            operator,
            function,
            points,
        } => {
            let f = scope.function(&format!("{field}.function"), function)?;
            let (op, oc) = scope.operator(&format!("{field}.operator"), ctx, operator)?;
            if !matches!(op, Operator::Riesz(_)) {
                need_kernel(&format!("{field}.operator"), kernel)?;
            }
            if let Operator::Riesz(a) = &op {
                padic_harmonics_core::operators::RieszOrder::new(ctx, a.clone())
                    .map_err(|e| invalid(&format!("{field}.operator.alpha"), e))?;
            }
            let mut xs = Vec::new();
            let mut pc = Vec::new();
            for (j, x) in points.iter().enumerate() {
                let pt = point(&format!("{field}.points[{j}]"), ctx, x)?;
                pc.push(render_point(&pt));
                xs.push(pt);
            }
            if let TaskSpec::Apply {
                operator, points, ..
            } = &mut canon
            {
                *operator = oc;
                *points = pc;
            }
            Task::Apply {
                id: id.clone(),
                operator: op,
                function: f,
                points: xs,
            }
        }
        TaskSpec::Norm {
            id,
            norm,
            function,
            q,
            weight,
            lambda,
            beta,
        } => {
            let f = scope.function(&format!("{field}.function"), function)?;
            let rq = |c: &mut TaskSpec| -> Result<Rational, SpecError> {
                let (r, s) = rational(&format!("{field}.q"), require(&format!("{field}.q"), q, "q")?)?;
                if let TaskSpec::Norm { q, .. } = c {
                    *q = Some(s);
                }
                Ok(r)
            };
            let rl = |c: &mut TaskSpec| -> Result<Rational, SpecError> {
                let (r, s) = rational(
                    &format!("{field}.lambda"),
                    require(&format!("{field}.lambda"), lambda, "lambda")?,
                )?;
                if let TaskSpec::Norm { lambda, .. } = c {
                    *lambda = Some(s);
                }
                Ok(r)
            };
            let rw = || scope.weight(&format!("{field}.weight"), require(&format!("{field}.weight"), weight, "weight")?);
            let nt = match norm {
                NormKind::Lq => NormTask::Lq { q: rq(&mut canon)? },
                NormKind::Gm => NormTask::Gm {
                    q: rq(&mut canon)?,
                    weight: rw()?,
                },
                NormKind::Gc => NormTask::Gc {
                    q: rq(&mut canon)?,
                    weight: rw()?,
                },
                NormKind::Cm => NormTask::Cm {
                    q: rq(&mut canon)?,
                    lambda: rl(&mut canon)?,
                },
                NormKind::Cbmo => NormTask::Cbmo {
                    q: rq(&mut canon)?,
                    lambda: rl(&mut canon)?,
                },
                NormKind::Lip => {
                    let (b, s) = rational(&format!("{field}.beta"), require(&format!("{field}.beta"), beta, "beta")?)?;
                    if let TaskSpec::Norm { beta, .. } = &mut canon {
                        *beta = Some(s);
                    }
                    NormTask::Lip { beta: b }
                }
            };
            if let NormTask::Lq { q } | NormTask::Gm { q, .. } | NormTask::Gc { q, .. } | NormTask::Cm { q, .. } | NormTask::Cbmo { q, .. } = &nt {
                if *q < rat(1) {
                    return Err(invalid(&format!("{field}.q"), format!("{} is below 1", render(q))));
                }
            }
            Task::Norm {
                id: id.clone(),
                norm: nt,
                function: f,
            }
        }
        TaskSpec::Check {
            id,
            condition,
            omega,
            nu,
            nus,
            beta,
            m,
            anchor,
        } => {
            let om = scope.weight(&format!("{field}.omega"), omega)?;
            let n = scope.weight(&format!("{field}.nu"), nu)?;
            let ns = nus
                .iter()
                .enumerate()
                .map(|(j, w)| scope.weight(&format!("{field}.nus[{j}]"), w))
                .collect::<Result<Vec<_>, _>>()?;
            let (b, bc) = ball(&format!("{field}.anchor"), ctx, anchor)?;
            let kind = match condition {
                ConditionSpec::Cond31 => ConditionKind::Cond31,
                ConditionSpec::Cond32 => {
                    let (b, s) = rational(&format!("{field}.beta"), require(&format!("{field}.beta"), beta, "beta")?)?;
                    if b <= rat(0) || b >= rat(ctx.dim() as i64) {
                        return Err(invalid(&format!("{field}.beta"), format!("{} is outside (0, n)", render(&b))));
                    }
                    if let TaskSpec::Check { beta, .. } = &mut canon {
                        *beta = Some(s);
                    }
                    ConditionKind::Cond32 { beta: b }
                }
                ConditionSpec::CondI => ConditionKind::CondI,
                ConditionSpec::CondII => ConditionKind::CondII {
                    m: m.unwrap_or(ns.len() as u32),
                },
            };
            if let TaskSpec::Check { anchor, .. } = &mut canon {
                *anchor = bc;
            }
            Task::Check {
                id: id.clone(),
                condition: SeriesCondition {
                    kind,
                    omega: om,
                    nu: n,
                    nus: ns,
                    anchor: b.center().clone(),
                    gamma: b.gamma(),
                },
            }
        }
        TaskSpec::Verify {
            id,
            suite,
            count,
            source,
            target,
            operator,
            profile,
        } => {
            let prof: Option<RandomProfile> = profile.as_ref().map(Into::into);
            if let Some(p) = &prof {
                p.validate().map_err(|e| invalid(&format!("{field}.profile"), e))?;
            }
            let plan = match suite {
                SuiteKind::Lemma21 | SuiteKind::Tails => {
                    let mut config = SuiteConfig {
                        contexts: vec![ctx],
                        slack: pol.slack,
                        ..SuiteConfig::default()
                    };
                    if let Some(p) = prof {
                        config.profile = p;
                    }
                    let seeds = (seed..seed + *count as u64).collect();
                    if *suite == SuiteKind::Lemma21 {
                        VerifyPlan::Lemma21 { seeds, config }
                    } else {
                        VerifyPlan::Tails { seeds, config }
                    }
                }
                SuiteKind::Thm31 | SuiteKind::Thm32 | SuiteKind::Thm33 => {
                    let theorem = match suite {
                        SuiteKind::Thm31 => Theorem::Thm31,
                        SuiteKind::Thm32 => Theorem::Thm32,
                        _ => Theorem::Thm33,
                    };
                    let k = need_kernel(field, kernel)?;
                    let (src, sc) = scope.norm_spec(
                        &format!("{field}.source"),
                        require(&format!("{field}.source"), source, "source")?,
                    )?;
                    let (tgt, tc) = scope.norm_spec(
                        &format!("{field}.target"),
                        require(&format!("{field}.target"), target, "target")?,
                    )?;
                    let ops: Vec<Operator> = match operator {
                        Some(o) => {
                            let (op, oc) = scope.operator(&format!("{field}.operator"), ctx, o)?;
                            if let TaskSpec::Verify { operator, .. } = &mut canon {
                                *operator = Some(oc);
                            }
                            vec![op]
                        }
                        None if theorem == Theorem::Thm31 => (-4..=4).map(Operator::Tk).chain([Operator::T]).collect(),
                        None => return Err(invalid(&format!("{field}.operator"), "a commutator is required")),
                    };
                    let corpus = Corpus {
                        seed,
                        count: *count,
                        profile: prof.clone().unwrap_or_default(),
                    };
                    let mut experiments = Vec::new();
                    for op in &ops {
                        let (operator, symbols) = core_operator(op);
                        let e = RatioExperiment {
                            theorem,
                            context: ctx,
                            kernel: k.clone(),
                            operator,
                            symbols,
                            source: src.clone(),
                            target: tgt.clone(),
                            corpus: corpus.clone(),
                            policy: ExperimentPolicy {
                                window_margin: pol.window_margin,
                                norm_margin: pol.norm_margin,
                                tail_mode: pol.tail_mode,
                                series: pol.series(),
                            },
                        };
                        e.validate().map_err(|err| invalid(field, err))?;
                        experiments.push(e);
                    }
                    if let TaskSpec::Verify { source, target, .. } = &mut canon {
                        *source = Some(sc);
                        *target = Some(tc);
                    }
                    VerifyPlan::Theorem(experiments)
                }
            };
            Task::Verify {
                id: id.clone(),
                suite: *suite,
                plan,
            }
        }
    };
    Ok((task, canon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{parse_spec, to_json};

    const BASE: &str = r#"{
        "schema": "padic-harmonics/spec-v1",
        "context": { "p": 2, "n": 1 },
        "kernel": { "level": -2, "cells": [
            { "digits": [[1, 0]], "value": "2/2" },
            { "digits": [[1, 1]], "value": "-1" } ] },
        "functions": [ { "name": "f", "cells": [ { "gamma": -2, "center": ["5"], "value": "2/4" } ] } ],
        "weights": [ { "kind": "power", "name": "w", "lambda": "-2/4" } ],
        "tasks": [
            { "op": "integrate", "id": "i", "function": "f" },
            { "op": "norm", "id": "n", "norm": "gm", "function": "f", "q": "2", "weight": "w" }
        ]
    }"#;

    fn err(text: &str) -> SpecError {
        build(&parse_spec(text).unwrap()).unwrap_err()
    }

    #[test]
    fn canonical_form_round_trips() {
        let (canon, model) = build(&parse_spec(BASE).unwrap()).unwrap();
        assert_eq!(canon.functions[0].cells[0].center, vec!["1/1".to_string()]);
        assert_eq!(canon.functions[0].cells[0].value, "1/2");
        assert_eq!(canon.kernel.as_ref().unwrap().cells[0].value, "1/1");
        let again = parse_spec(&to_json(&canon)).unwrap();
        assert_eq!(again, canon);
        assert_eq!(build(&again).unwrap().0, canon);
        assert_eq!(model.tasks.len(), 2);
    }

    #[test]
    fn nonzero_mean_kernel_is_rejected() {
        let e = err(&BASE.replace("\"-1\"", "\"-1/2\""));
        assert!(e.to_string().starts_with("kernel.cells: mean-zero violated"), "{e}");
    }

    #[test]
    fn dangling_references_are_rejected() {
        let e = err(&BASE.replace("\"function\": \"f\" }", "\"function\": \"g\" }"));
        assert_eq!(e.to_string(), "tasks[0].function: unknown function \"g\"");
        let e = err(&BASE.replace("\"weight\": \"w\"", "\"weight\": \"v\""));
        assert_eq!(e.to_string(), "tasks[1].weight: unknown weight \"v\"");
    }

    #[test]
    fn field_errors_name_the_field() {
        let e = err(&BASE.replace("\"value\": \"2/4\"", "\"value\": \"1/0\""));
        assert!(e.to_string().starts_with("functions[0].cells[0].value:"), "{e}");
        let e = err(&BASE.replace("[[1, 1]]", "[[1, 2]]"));
        assert_eq!(e.to_string(), "kernel.cells[1].digits[0]: digit 2 is not below p = 2");
        let e = err(&BASE.replace("\"q\": \"2\"", "\"q\": \"1/2\""));
        assert_eq!(e.to_string(), "tasks[1].q: 1/2 is below 1");
        let e = err(&BASE.replace("\"id\": \"n\"", "\"id\": \"i\""));
        assert_eq!(e.to_string(), "tasks[1].id: duplicate task id \"i\"");
    }

    #[test]
    fn overlapping_cells_are_rejected() {
        let e = err(&BASE.replace(
            r#"{ "gamma": -2, "center": ["5"], "value": "2/4" }"#,
            r#"{ "gamma": -2, "center": ["5"], "value": "2/4" }, { "gamma": 0, "center": ["0"], "value": "1" }"#,
        ));
        assert!(e.to_string().starts_with("functions[0].cells: cells overlap"), "{e}");
    }

    #[test]
    fn parse_errors_carry_a_location() {
        match parse_spec("{\n  \"schema\": 3\n}") {
            Err(SpecError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_spec(&BASE.replace("\"seed\"", "x").replace("\"tasks\"", "\"taskz\"")) {
            Err(SpecError::Parse { message, .. }) => assert!(message.contains("taskz"), "{message}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn theorem_tasks_need_their_inputs() {
        let t = r#"{ "op": "verify", "id": "v", "suite": "thm32", "count": 2,
            "source": { "q": "2", "weight": "w" }, "target": { "q": "4", "weight": "w" } }"#;
        let e = err(&BASE.replace(r#"{ "op": "integrate", "id": "i", "function": "f" }"#, t));
        assert_eq!(e.to_string(), "tasks[0].operator: a commutator is required");
        let t = r#"{ "op": "verify", "id": "v", "suite": "thm31", "count": 2, "source": { "q": "2", "weight": "w" },
            "target": { "q": "2", "weight": "w" } }"#;
        let (_, model) = build(&parse_spec(&BASE.replace(r#"{ "op": "integrate", "id": "i", "function": "f" }"#, t)).unwrap()).unwrap();
        match &model.tasks[0] {
            Task::Verify {
                plan: VerifyPlan::Theorem(es),
                ..
            } => assert_eq!(es.len(), 10),
            _ => panic!("not a theorem task"),
        }
    }
}
