//! Task execution.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use padic_harmonics_core::norms::{
    cbmo_norm, cm_norm, gc_norm, gm_norm, lipschitz_norm, lq_norm, NormPolicy, NormReport,
};
use padic_harmonics_core::operators::{apply_commutator, apply_t, apply_tk, riesz, RieszOrder, TruncationIndex};
use padic_harmonics_core::verify::{
    assemble_report, check_series, commutator_domination_suite, integrated_jump_suite, lemma21_suite, run_instance,
    tail_bound_suite, ExperimentReport, HypothesisStatus, RatioExperiment, SeriesOutcome, SuiteReport,
};
use padic_harmonics_core::{Error, PAdicPoint, Rational, StepFunction};

use crate::model::{Model, NormTask, Operator, Policy, Task, VerifyPlan};

#[derive(Debug, Clone, PartialEq)]
pub enum ApplyValue {
    Exact(Rational),
    /// Riesz potentials are real.
    Approx(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TaskResult {
    Integral(Rational),
    Apply(Vec<(PAdicPoint, ApplyValue)>),
    Lq(f64),
    Norm(NormReport),
    Check(SeriesOutcome),
    Theorem(Vec<ExperimentReport>),
    Suite(SuiteReport),
}

#[derive(Debug, Clone)]
pub struct TaskOutcome {
    pub id: String,
    pub op: &'static str,
    /// Suite label for verify tasks, norm kind for norms.
    pub detail: Option<&'static str>,
    pub result: Result<TaskResult, String>,
    pub passed: bool,
    pub elapsed: Duration,
}

fn with_instance(i: usize, e: Error) -> Error {
    Error::Instance {
        instance: i,
        source: Box::new(e),
    }
}

/// Instances run in parallel; the report orders them by id.
pub fn run_experiment(e: &RatioExperiment) -> padic_harmonics_core::Result<ExperimentReport> {
    let instances = (0..e.corpus.count)
        .into_par_iter()
        .map(|i| run_instance(e, i).map_err(|err| with_instance(i, err)))
        .collect::<padic_harmonics_core::Result<Vec<_>>>()?;
    assemble_report(e, instances)
}

fn apply_at(model: &Model, op: &Operator, f: &StepFunction, x: &PAdicPoint) -> padic_harmonics_core::Result<ApplyValue> {
    let kernel = || model.kernel.as_ref().expect("checked on load");
    Ok(match op {
        Operator::Tk(k) => ApplyValue::Exact(apply_tk(kernel(), TruncationIndex::new(*k as i64)?, f, x)?),
        Operator::T => ApplyValue::Exact(apply_t(kernel(), f, x)?),
        Operator::Commutator { k, symbols } => {
            ApplyValue::Exact(apply_commutator(kernel(), TruncationIndex::new(*k as i64)?, symbols, f, x)?)
        }
        Operator::Riesz(a) => ApplyValue::Approx(riesz(&RieszOrder::new(model.ctx, a.clone())?, f, x)?),
    })
}

fn norm(p: &Policy, n: &NormTask, f: &StepFunction) -> padic_harmonics_core::Result<TaskResult> {
    let policy = || NormPolicy::covering(f, p.norm_margin, p.tail_mode).map(|mut np| {
        np.float_rel_tol = p.float_rel_tol;
        np
    });
    Ok(match n {
        NormTask::Lq { q } => TaskResult::Lq(lq_norm(f, q)?),
        NormTask::Gm { q, weight } => TaskResult::Norm(gm_norm(f, q, weight, &policy()?)?),
        NormTask::Gc { q, weight } => TaskResult::Norm(gc_norm(f, q, weight, &policy()?)?),
        NormTask::Cm { q, lambda } => TaskResult::Norm(cm_norm(f, q, lambda, &policy()?)?),
        NormTask::Cbmo { q, lambda } => TaskResult::Norm(cbmo_norm(f, q, lambda, &policy()?)?),
        NormTask::Lip { beta } => TaskResult::Norm(lipschitz_norm(f, beta)?),
    })
}

fn norm_label(n: &NormTask) -> &'static str {
    match n {
        NormTask::Lq { .. } => "lq",
        NormTask::Gm { .. } => "gm",
        NormTask::Gc { .. } => "gc",
        NormTask::Cm { .. } => "cm",
        NormTask::Cbmo { .. } => "cbmo",
        NormTask::Lip { .. } => "lip",
    }
}

fn execute(model: &Model, task: &Task) -> padic_harmonics_core::Result<TaskResult> {
    Ok(match task {
        Task::Integrate { function, region, .. } => TaskResult::Integral(match region {
            Some(b) => function.integral_over(b),
            None => function.integral(),
        }),
        Task::Apply {
            operator,
            function,
            points,
            ..
        } => TaskResult::Apply(
            points
                .iter()
                .map(|x| Ok((x.clone(), apply_at(model, operator, function, x)?)))
                .collect::<padic_harmonics_core::Result<_>>()?,
        ),
        Task::Norm { norm: n, function, .. } => norm(&model.policy, n, function)?,
        Task::Check { condition, .. } => TaskResult::Check(check_series(condition, &model.policy.series())?),
        Task::Verify { plan, .. } => match plan {
            VerifyPlan::Theorem(es) => TaskResult::Theorem(es.iter().map(run_experiment).collect::<padic_harmonics_core::Result<_>>()?),
            VerifyPlan::Lemma21 { seeds, config } => {
                let mut rep = lemma21_suite(seeds.iter().copied(), config)?;
                rep.rows.extend(integrated_jump_suite(seeds.iter().copied(), config)?.rows);
                TaskResult::Suite(rep)
            }
            VerifyPlan::Tails { seeds, config } => {
                let mut rep = tail_bound_suite(seeds.iter().copied(), config)?;
                rep.rows.extend(commutator_domination_suite(seeds.iter().copied(), config)?.rows);
                TaskResult::Suite(rep)
            }
        },
    })
}

/// Whether a finished task counts as passing. Only verify tasks can fail on
/// their content; `strict` also fails on indeterminate condition checks.
fn judge(result: &Result<TaskResult, String>, strict: bool) -> bool {
    match result {
        Err(_) => false,
        Ok(TaskResult::Suite(rep)) => rep.passed(),
        Ok(TaskResult::Theorem(reps)) => reps.iter().all(|r| {
            r.all_ratios_finite() && !(strict && matches!(r.hypotheses, HypothesisStatus::Indeterminate { .. }))
        }),
        Ok(TaskResult::Check(SeriesOutcome::Indeterminate { .. })) => !strict,
        Ok(_) => true,
    }
}

fn op_of(task: &Task) -> (&'static str, Option<&'static str>) {
    match task {
        Task::Integrate { .. } => ("integrate", None),
        Task::Apply { .. } => ("apply", None),
        Task::Norm { norm, .. } => ("norm", Some(norm_label(norm))),
        Task::Check { .. } => ("check", None),
        Task::Verify { suite, .. } => ("verify", Some(suite.label())),
    }
}

/// Runs every task on a pool of `jobs` threads (0 picks the machine's
/// parallelism); outcomes come back in spec order.
pub fn run_tasks(model: &Model, strict: bool, jobs: usize) -> Result<Vec<TaskOutcome>, rayon::ThreadPoolBuildError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    Ok(pool.install(|| {
        model
            .tasks
            .par_iter()
            .map(|task| {
                let start = Instant::now();
                let result = execute(model, task).map_err(|e| e.to_string());
                let (op, detail) = op_of(task);
                TaskOutcome {
                    id: task.id().to_string(),
                    op,
                    detail,
                    passed: judge(&result, strict),
                    result,
                    elapsed: start.elapsed(),
                }
            })
            .collect()
    }))
}
