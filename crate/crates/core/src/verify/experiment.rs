//! Empirical operator-norm ratios on seeded corpora.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::error::{param, Result};
use crate::funcs::random::{random_step, RandomProfile};
use crate::funcs::{BallWeight, CommutatorSymbols, HomogeneousKernel, RealStep, StepFunction};
use crate::norms::{gc_norm, gm_norm, lipschitz_norm, NormPolicy, NormReport, TailMode};
use crate::numeric::{rat, render, Rational};
use crate::operators::{
    apply_commutator_as_step, apply_t_as_step, apply_tk_as_step, riesz_as_step, RieszOrder, TruncationIndex,
};
use crate::padic::{Ball, Context, PAdicPoint};

use super::series::{check_series, ConditionKind, SeriesCondition, SeriesOutcome, SeriesPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Theorem {
    /// `T_k, T : GM_{q,ν} → GM_{q,ω}` under the summability of `ν` against `ω`.
    Thm31,
    /// Lipschitz commutators `GM_{q,ν} → GM_{r,ω}`, `1/r = 1/q - β/n`.
    Thm32,
    /// Campanato commutators `GM_{q,ν} → GM_{r,ω}`, `1/r = 1/q + Σ 1/q_i`.
    Thm33,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Theorem::Thm31 => "thm31",
            Theorem::Thm32 => "thm32",
            Theorem::Thm33 => "thm33",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSpec {
    Tk { k: i32 },
    T,
    /// Uses the experiment's symbols.
    Commutator { k: i32 },
    Riesz { alpha: Rational },
}

impl OperatorSpec {
    pub fn label(&self) -> String {
        match self {
            OperatorSpec::Tk { k } => format!("Tk({k})"),
            OperatorSpec::T => "T".into(),
            OperatorSpec::Commutator { k } => format!("commutator({k})"),
            OperatorSpec::Riesz { alpha } => format!("riesz({})", render(alpha)),
        }
    }
}

/// `‖·‖_{GM_{q,w}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpec {
    pub q: Rational,
    pub weight: BallWeight,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub seed: u64,
    pub count: usize,
    pub profile: RandomProfile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPolicy {
    /// Outputs are tabulated on `B_{root + window_margin}(0)`, `root` being the corpus root exponent.
    pub window_margin: i32,
    /// Extra scales around the minimal norm window.
    pub norm_margin: i32,
    pub tail_mode: TailMode,
    pub series: SeriesPolicy,
}

impl Default for ExperimentPolicy {
    fn default() -> Self {
        ExperimentPolicy {
            window_margin: 2,
            norm_margin: 1,
            tail_mode: TailMode::ClosedFormPower,
            series: SeriesPolicy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioExperiment {
    pub theorem: Theorem,
    pub context: Context,
    pub kernel: HomogeneousKernel,
    pub operator: OperatorSpec,
    /// Lipschitz exponents attached for `Thm32`, Campanato data for `Thm33`.
    pub symbols: Option<CommutatorSymbols>,
    pub source: NormSpec,
    pub target: NormSpec,
    pub corpus: Corpus,
    pub policy: ExperimentPolicy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceResult {
    pub id: usize,
    pub seed: u64,
    pub function: StepFunction,
    pub source: Option<NormReport>,
    pub target: Option<NormReport>,
    /// `None` for the zero function and for a source norm of 0 or infinity.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub condition: ConditionKind,
    pub gamma: i32,
    pub outcome: SeriesOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub enum HypothesisStatus {
    Satisfied,
    /// Run anyway, for contrast.
    Violated { reasons: Vec<String> },
    Indeterminate { reasons: Vec<String> },
}

impl HypothesisStatus {
    pub fn label(&self) -> &'static str {
        match self {
            HypothesisStatus::Satisfied => "satisfied",
            HypothesisStatus::Violated { .. } => "hypothesis-violated",
            HypothesisStatus::Indeterminate { .. } => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub theorem: Theorem,
    pub operator: String,
    pub instances: Vec<InstanceResult>,
    /// Largest ratio; the earliest instance wins ties.
    pub c_emp: Option<f64>,
    pub attaining: Option<usize>,
    pub conditions: Vec<ConditionCheck>,
    pub hypotheses: HypothesisStatus,
    /// `‖b_i‖_{Λ_{β_i}}` or `‖b_i‖_{GC_{q_i,ν_i}}`.
    pub symbol_norms: Vec<f64>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn all_ratios_finite(&self) -> bool {
        self.instances.iter().all(|i| i.ratio.is_none_or(f64::is_finite))
    }
}

/// Seed of instance `i`; a larger corpus with the same seed extends a smaller one.
pub fn instance_seed(seed: u64, i: usize) -> u64 {
    let mut z = seed ^ (i as u64).wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn inv(q: &Rational) -> Rational {
    Rational::one() / q
}

impl RatioExperiment {
    pub fn validate(&self) -> Result<()> {
        let ctx = self.context;
        ctx.check_same(self.kernel.context())?;
        for q in [&self.source.q, &self.target.q] {
            if *q < rat(1) {
                return Err(param("q", format!("{} is below 1", render(q))));
            }
        }
        if let Some(s) = &self.symbols {
            ctx.check_same(s.context())?;
        }
        match (&self.operator, &self.symbols) {
            (OperatorSpec::Commutator { .. }, None) => {
                return Err(param("symbols", "a commutator needs symbols"));
            }
            (OperatorSpec::Riesz { alpha }, _) => {
                RieszOrder::new(ctx, alpha.clone())?;
            }
            _ => {}
        }
        match self.theorem {
            Theorem::Thm32 if matches!(self.operator, OperatorSpec::Commutator { .. }) => {
                if self.symbols.as_ref().and_then(CommutatorSymbols::betas).is_none() {
                    return Err(param("symbols", "Lipschitz exponents are required"));
                }
            }
            Theorem::Thm33 if self.symbols.as_ref().and_then(CommutatorSymbols::campanato).is_none() => {
                return Err(param("symbols", "Campanato data (q_i, ν_i) are required"));
            }
            _ => {}
        }
        TruncationIndex::new(self.k_or_zero() as i64)?;
        Ok(())
    }

    fn k_or_zero(&self) -> i32 {
        match self.operator {
            OperatorSpec::Tk { k } | OperatorSpec::Commutator { k } => k,
            _ => 0,
        }
    }

    pub fn window(&self) -> Ball {
        Ball::centered(self.context, self.corpus.profile.root_gamma + self.policy.window_margin)
    }

    pub fn instance_function(&self, i: usize) -> Result<StepFunction> {
        random_step(instance_seed(self.corpus.seed, i), self.context, &self.corpus.profile)
    }

    /// `β` in the Lipschitz/Riesz exponent relation.
    fn beta(&self) -> Option<Rational> {
        match &self.operator {
            OperatorSpec::Riesz { alpha } => Some(alpha.clone()),
            _ => self.symbols.as_ref().and_then(CommutatorSymbols::beta),
        }
    }
}

/// Operator image on the experiment window.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Exact(StepFunction),
    Real(RealStep),
}

pub fn operator_output(e: &RatioExperiment, f: &StepFunction) -> Result<Output> {
    let w = e.window();
    Ok(match &e.operator {
        OperatorSpec::Tk { k } => Output::Exact(apply_tk_as_step(&e.kernel, TruncationIndex::new(*k as i64)?, f, &w)?.function),
        OperatorSpec::T => Output::Exact(apply_t_as_step(&e.kernel, f, &w)?.function),
        OperatorSpec::Commutator { k } => {
            let syms = e.symbols.as_ref().ok_or_else(|| param("symbols", "a commutator needs symbols"))?;
            Output::Exact(apply_commutator_as_step(&e.kernel, TruncationIndex::new(*k as i64)?, syms, f, &w)?.function)
        }
        OperatorSpec::Riesz { alpha } => {
            Output::Real(riesz_as_step(&RieszOrder::new(e.context, alpha.clone())?, f, &w)?.function)
        }
    })
}

/// Source norm of instance `i`, and the target norm of its image restricted to the window.
pub fn run_instance(e: &RatioExperiment, i: usize) -> Result<InstanceResult> {
    let seed = instance_seed(e.corpus.seed, i);
    let f = e.instance_function(i)?;
    if f.is_zero() {
        return Ok(InstanceResult {
            id: i,
            seed,
            function: f,
            source: None,
            target: None,
            ratio: None,
        });
    }
    let (margin, mode) = (e.policy.norm_margin, e.policy.tail_mode);
    let source = gm_norm(&f, &e.source.q, &e.source.weight, &NormPolicy::covering(&f, margin, mode)?)?;
    let target = match operator_output(e, &f)? {
        Output::Exact(g) => gm_norm(&g, &e.target.q, &e.target.weight, &NormPolicy::covering(&g, margin, mode)?)?,
        Output::Real(g) => gm_norm(&g, &e.target.q, &e.target.weight, &NormPolicy::covering(&g, margin, mode)?)?,
    };
    let ratio = (source.value > 0.0 && source.value.is_finite()).then(|| target.value / source.value);
    Ok(InstanceResult {
        id: i,
        seed,
        function: f,
        source: Some(source),
        target: Some(target),
        ratio,
    })
}

/// Anchors `(0, γ)` at the finest corpus scale, the corpus root and the window.
fn anchor_gammas(e: &RatioExperiment) -> Vec<i32> {
    let p = &e.corpus.profile;
    let mut gs = vec![
        p.root_gamma - p.max_depth as i32 - 1,
        p.root_gamma,
        p.root_gamma + e.policy.window_margin,
    ];
    gs.dedup();
    gs
}

fn conditions_for(e: &RatioExperiment) -> Vec<ConditionKind> {
    match e.theorem {
        Theorem::Thm31 => vec![ConditionKind::Cond31],
        Theorem::Thm32 => match e.beta() {
            Some(beta) => vec![ConditionKind::Cond32 { beta }],
            None => Vec::new(),
        },
        Theorem::Thm33 => {
            let m = e.symbols.as_ref().map_or(0, CommutatorSymbols::m) as u32;
            vec![ConditionKind::CondI, ConditionKind::CondII { m }]
        }
    }
}

/// Evaluates the theorem's weight conditions and exponent relations.
pub fn check_hypotheses(e: &RatioExperiment) -> Result<(Vec<ConditionCheck>, HypothesisStatus)> {
    let mut checks = Vec::new();
    let mut violated = Vec::new();
    let mut unknown = Vec::new();
    let nus: Vec<BallWeight> = e
        .symbols
        .as_ref()
        .and_then(CommutatorSymbols::campanato)
        .map(|d| d.iter().map(|c| c.weight.clone()).collect())
        .unwrap_or_default();
    for kind in conditions_for(e) {
        for gamma in anchor_gammas(e) {
            let c = SeriesCondition {
                kind: kind.clone(),
                omega: e.target.weight.clone(),
                nu: e.source.weight.clone(),
                nus: nus.clone(),
                anchor: PAdicPoint::zero(e.context),
                gamma,
            };
            let outcome = check_series(&c, &e.policy.series)?;
            match outcome.uniformly_bounded() {
                Some(true) => {}
                Some(false) if outcome.converges() => violated.push(format!(
                    "condition ({}) depends on the scale: not bounded uniformly in γ",
                    kind.label()
                )),
                Some(false) => violated.push(format!("condition ({}) diverges at γ = {gamma}", kind.label())),
                None => unknown.push(format!("condition ({}) at γ = {gamma} not decided uniformly", kind.label())),
            }
            checks.push(ConditionCheck {
                condition: kind.clone(),
                gamma,
                outcome,
            });
        }
    }
    let n = rat(e.context.dim() as i64);
    let (q, r) = (&e.source.q, &e.target.q);
    match e.theorem {
        Theorem::Thm31 => {
            if q != r {
                violated.push(format!("target exponent {} differs from source {}", render(r), render(q)));
            }
            if *q <= rat(1) {
                violated.push(format!("q = {} is not above 1", render(q)));
            }
        }
        Theorem::Thm32 => match e.beta() {
            Some(beta) => {
                if inv(r) != inv(q) - &beta / &n {
                    violated.push(format!("1/r = 1/q - β/n fails for q = {}, r = {}", render(q), render(r)));
                }
                if *q <= rat(1) || *q >= &n / &beta || *r <= rat(1) {
                    violated.push(format!("need 1 < q < n/β and r > 1, got q = {}, r = {}", render(q), render(r)));
                }
            }
            None => violated.push("no Lipschitz exponents".into()),
        },
        Theorem::Thm33 => {
            let qs: Vec<Rational> = e
                .symbols
                .as_ref()
                .and_then(CommutatorSymbols::campanato)
                .map(|d| d.iter().map(|c| c.q.clone()).collect())
                .unwrap_or_default();
            let total = qs.iter().fold(inv(q), |s, qi| s + inv(qi));
            if inv(r) != total {
                violated.push(format!("1/r = 1/q + Σ 1/q_i fails for r = {}", render(r)));
            }
            if qs.iter().chain([q, r]).any(|x| *x <= rat(1)) {
                violated.push("all of q, r, q_i must exceed 1".into());
            }
        }
    }
    if matches!(e.operator, OperatorSpec::Commutator { .. }) && e.theorem == Theorem::Thm31 {
        violated.push("commutators are covered by the other two theorems".into());
    }
    let status = if !violated.is_empty() {
        HypothesisStatus::Violated { reasons: violated }
    } else if !unknown.is_empty() {
        HypothesisStatus::Indeterminate { reasons: unknown }
    } else {
        HypothesisStatus::Satisfied
    };
    Ok((checks, status))
}

fn symbol_norms(e: &RatioExperiment) -> Result<Vec<f64>> {
    let Some(syms) = &e.symbols else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    match e.theorem {
        Theorem::Thm33 => {
            for (b, d) in syms.symbols().iter().zip(syms.campanato().unwrap_or_default()) {
                let pol = NormPolicy::covering(b, e.policy.norm_margin, e.policy.tail_mode)?;
                out.push(gc_norm(b, &d.q, &d.weight, &pol)?.value);
            }
        }
        _ => {
            for (b, beta) in syms.symbols().iter().zip(syms.betas().unwrap_or_default()) {
                out.push(lipschitz_norm(b, beta)?.value);
            }
        }
    }
    Ok(out)
}

/// Combines per-instance results (in any order) into the report.
pub fn assemble_report(e: &RatioExperiment, mut instances: Vec<InstanceResult>) -> Result<ExperimentReport> {
    instances.sort_by_key(|i| i.id);
    let mut c_emp: Option<f64> = None;
    let mut attaining = None;
    for inst in &instances {
        if let Some(r) = inst.ratio {
            if c_emp.is_none_or(|c| r > c) {
                c_emp = Some(r);
                attaining = Some(inst.id);
            }
        }
    }
    let (conditions, hypotheses) = check_hypotheses(e)?;
    let mut notes = Vec::new();
    notes.push(format!(
        "target norms are taken of the output restricted to B_{}(0)",
        e.window().gamma()
    ));
    if matches!(e.theorem, Theorem::Thm32 | Theorem::Thm33) {
        notes.push("target measured in GM_r; the limit statement for the untruncated commutator names GM_q".into());
    }
    if e.theorem == Theorem::Thm33 && e.symbols.as_ref().is_some_and(|s| s.m() > 2) {
        notes.push("m > 2 is experimental; the proof treats m = 2".into());
    }
    if e.theorem == Theorem::Thm31 {
        notes.push("the summability condition on ν against ω is reported summed from j = γ and from j = γ + 1".into());
    }
    Ok(ExperimentReport {
        theorem: e.theorem,
        operator: e.operator.label(),
        instances,
        c_emp,
        attaining,
        conditions,
        hypotheses,
        symbol_norms: symbol_norms(e)?,
        notes,
    })
}

/// Runs every instance in order.
pub fn run_ratio_experiment(e: &RatioExperiment) -> Result<ExperimentReport> {
    e.validate()?;
    let instances = (0..e.corpus.count).map(|i| run_instance(e, i)).collect::<Result<Vec<_>>>()?;
    assemble_report(e, instances)
}
