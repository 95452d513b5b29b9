//! `report.json` and `runtime.json`.
//!
//! Exact values are `"num/den"` strings. Finite floats are JSON numbers
//! written with 17 significant digits; infinities and NaN become the strings
//! `"inf"`, `"-inf"` and `"nan"`.

use serde_json::{json, Map, Number, Value};
use sha2::{Digest, Sha256};

use padic_harmonics_core::norms::{NormReport, TailCertificate, TailSide};
use padic_harmonics_core::numeric::render;
use padic_harmonics_core::verify::{
    ConditionCheck, ExperimentReport, HypothesisStatus, InstanceResult, SeriesCertificate, SeriesOutcome, SuiteReport,
};
use padic_harmonics_core::{Ball, PAdicPoint, Rational, Real, StepFunction};

use crate::exec::{ApplyValue, TaskOutcome, TaskResult};

pub const REPORT_SCHEMA: &str = "padic-harmonics/report-v1";

/// `x` with 17 significant digits.
pub fn float_text(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(float_text(x).parse::<Number>().expect("formatted floats parse"))
    } else {
        Value::String(float_text(x))
    }
}

pub fn rational(r: &Rational) -> Value {
    Value::String(render(r))
}

pub fn real(r: &Real) -> Value {
    match r {
        Real::Exact(q) => rational(q),
        Real::Approx(x) => num(*x),
    }
}

/// Text of a real for tables.
pub fn real_text(r: &Real) -> String {
    match r {
        Real::Exact(q) => render(q),
        Real::Approx(x) => float_text(*x),
    }
}

fn point(x: &PAdicPoint) -> Value {
    Value::Array(x.coords().iter().map(rational).collect())
}

fn ball(b: &Ball) -> Value {
    json!({ "gamma": b.gamma(), "center": point(b.center()) })
}

fn function(f: &StepFunction) -> Value {
    Value::Array(
        f.cells()
            .map(|(b, v)| json!({ "gamma": b.gamma(), "center": point(b.center()), "value": rational(v) }))
            .collect(),
    )
}

/// First 16 hex digits of the SHA-256 of `text`.
pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn function_digest(f: &StepFunction) -> String {
    let mut s = String::new();
    for (b, v) in f.cells() {
        s.push_str(&format!("{b}={};", render(v)));
    }
    digest(&s)
}

fn side(s: &TailSide) -> Value {
    match s {
        TailSide::Zero => json!({ "kind": "zero" }),
        TailSide::Monotone => json!({ "kind": "monotone" }),
        TailSide::Scanned { until } => json!({ "kind": "scanned", "until": until }),
        TailSide::Limit { value, until } => json!({ "kind": "limit", "value": num(*value), "until": until }),
        TailSide::Unbounded => json!({ "kind": "unbounded" }),
    }
}

fn certificate(c: &TailCertificate) -> Value {
    match c {
        TailCertificate::Vacuous => json!({ "kind": "vacuous" }),
        TailCertificate::ClosedForm { small, large } => {
            json!({ "kind": "closed_form", "small": side(small), "large": side(large) })
        }
        TailCertificate::Geometric { ratio, checked } => {
            json!({ "kind": "geometric", "ratio": num(*ratio), "checked": checked })
        }
        TailCertificate::WindowOnly => json!({ "kind": "window_only" }),
    }
}

pub fn norm_report(r: &NormReport) -> Value {
    json!({
        "value": num(r.value),
        "attaining": r.attaining.as_ref().map(ball),
        "certificate": certificate(&r.certificate),
        "window": [r.window.0, r.window.1],
        "candidates": r.candidates,
        "window_restricted": r.window_restricted(),
    })
}

fn opt_real(r: &Option<Real>) -> Value {
    r.as_ref().map_or(Value::Null, real)
}

pub fn series_outcome(o: &SeriesOutcome) -> Value {
    match o {
        SeriesOutcome::Converges {
            value,
            from_next,
            uniform,
            certificate,
        } => {
            let cert = match certificate {
                SeriesCertificate::ClosedForm => json!({ "kind": "closed_form" }),
                SeriesCertificate::SingleTerm => json!({ "kind": "single_term" }),
                SeriesCertificate::GeometricTail {
                    ratio,
                    terms,
                    partial,
                    tail,
                } => json!({
                    "kind": "geometric_tail",
                    "ratio": num(*ratio),
                    "terms": terms,
                    "partial": num(*partial),
                    "tail": num(*tail),
                }),
            };
            json!({
                "outcome": "converges",
                "value": real(value),
                "from_next": opt_real(from_next),
                "uniform": uniform,
                "certificate": cert,
            })
        }
        SeriesOutcome::Diverges { witness } => json!({
            "outcome": "diverges",
            "first_term": real(&witness.first_term),
            "term_ratio": real(&witness.term_ratio),
        }),
        SeriesOutcome::Indeterminate { reason } => json!({ "outcome": "indeterminate", "reason": reason }),
    }
}

fn condition(c: &ConditionCheck) -> Value {
    json!({ "condition": c.condition.label(), "gamma": c.gamma, "result": series_outcome(&c.outcome) })
}

fn hypotheses(h: &HypothesisStatus) -> Value {
    let reasons = match h {
        HypothesisStatus::Satisfied => Vec::new(),
        HypothesisStatus::Violated { reasons } | HypothesisStatus::Indeterminate { reasons } => reasons.clone(),
    };
    json!({ "status": h.label(), "reasons": reasons })
}

fn instance(i: &InstanceResult) -> Value {
    json!({
        "id": i.id,
        "seed": i.seed,
        "digest": function_digest(&i.function),
        "function": function(&i.function),
        "source": i.source.as_ref().map(norm_report),
        "target": i.target.as_ref().map(norm_report),
        "ratio": i.ratio.map_or(Value::Null, num),
    })
}

pub fn experiment(e: &ExperimentReport) -> Value {
    json!({
        "theorem": e.theorem.label(),
        "operator": e.operator,
        "c_emp": e.c_emp.map_or(Value::Null, num),
        "attaining_instance": e.attaining,
        "hypotheses": hypotheses(&e.hypotheses),
        "conditions": e.conditions.iter().map(condition).collect::<Vec<_>>(),
        "symbol_norms": e.symbol_norms.iter().map(|x| num(*x)).collect::<Vec<_>>(),
        "notes": e.notes,
        "all_ratios_finite": e.all_ratios_finite(),
        "instances": e.instances.iter().map(instance).collect::<Vec<_>>(),
    })
}

pub fn suite(s: &SuiteReport) -> Value {
    let rows: Vec<Value> = s
        .rows
        .iter()
        .map(|r| {
            json!({
                "suite": r.suite,
                "check": r.check,
                "seed": r.seed,
                "context": { "p": r.context.p(), "n": r.context.dim() },
                "lhs": real(&r.lhs),
                "rhs": real(&r.rhs),
                "pass": r.pass,
            })
        })
        .collect();
    json!({ "passed": s.passed(), "failures": s.failures().count(), "rows": rows })
}

fn result(r: &TaskResult) -> Value {
    match r {
        TaskResult::Integral(v) => json!({ "integral": rational(v) }),
        TaskResult::Apply(vals) => Value::Array(
            vals.iter()
                .map(|(x, v)| {
                    let value = match v {
                        ApplyValue::Exact(q) => rational(q),
                        ApplyValue::Approx(f) => num(*f),
                    };
                    json!({ "point": point(x), "value": value })
                })
                .collect(),
        ),
        TaskResult::Lq(v) => json!({ "value": num(*v) }),
        TaskResult::Norm(n) => norm_report(n),
        TaskResult::Check(o) => series_outcome(o),
        TaskResult::Theorem(es) => Value::Array(es.iter().map(experiment).collect()),
        TaskResult::Suite(s) => suite(s),
    }
}

pub fn task(t: &TaskOutcome) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), json!(t.id));
    m.insert("op".into(), json!(t.op));
    if let Some(d) = t.detail {
        m.insert("kind".into(), json!(d));
    }
    m.insert("passed".into(), json!(t.passed));
    match &t.result {
        Ok(r) => {
            m.insert("result".into(), result(r));
        }
        Err(e) => {
            m.insert("error".into(), json!(e));
        }
    }
    Value::Object(m)
}

pub struct Provenance {
    pub seed: u64,
    pub config_hash: String,
    pub strict: bool,
}

/// The full report; `timestamp` is the only field that varies between runs.
pub fn report(outcomes: &[TaskOutcome], prov: &Provenance, timestamp: &str) -> Value {
    let failing: Vec<&str> = outcomes.iter().filter(|t| !t.passed).map(|t| t.id.as_str()).collect();
    json!({
        "schema": REPORT_SCHEMA,
        "timestamp": timestamp,
        "provenance": {
            "seed": prov.seed,
            "config_hash": prov.config_hash,
            "spec_schema": crate::spec::SCHEMA,
            "strict": prov.strict,
            "versions": {
                "padic-harmonics": env!("CARGO_PKG_VERSION"),
                "padic-harmonics-core": padic_harmonics_core::VERSION,
            },
        },
        "passed": failing.is_empty(),
        "failing_tasks": failing,
        "tasks": outcomes.iter().map(task).collect::<Vec<_>>(),
    })
}

pub fn runtime(outcomes: &[TaskOutcome], jobs: usize, total: std::time::Duration) -> Value {
    json!({
        "jobs": jobs,
        "total_seconds": num(total.as_secs_f64()),
        "tasks": outcomes
            .iter()
            .map(|t| json!({ "id": t.id, "seconds": num(t.elapsed.as_secs_f64()) }))
            .collect::<Vec<_>>(),
    })
}
