//! One CSV table per task under `tables/`.

use std::path::Path;

use padic_harmonics_core::numeric::render;

use crate::exec::{ApplyValue, TaskOutcome, TaskResult};
use crate::report::{digest, float_text, function_digest, real_text};

pub const HEADER: [&str; 8] = ["task_id", "instance_id", "inputs_digest", "label", "lhs", "rhs", "ratio", "pass"];

/// `[task_id, instance_id, inputs_digest, label, lhs, rhs, ratio, pass]`.
pub type Row = [String; 8];

#[allow(clippy::too_many_arguments)]
fn row(t: &TaskOutcome, instance: usize, input: String, label: &str, lhs: String, rhs: String, ratio: String, pass: String) -> Row {
    [t.id.clone(), instance.to_string(), input, label.to_string(), lhs, rhs, ratio, pass]
}

fn pass_text(b: bool) -> String {
    if b { "pass" } else { "fail" }.into()
}

pub fn rows(t: &TaskOutcome) -> Vec<Row> {
    let none = String::new;
    let Ok(result) = &t.result else {
        return vec![row(t, 0, none(), "error", none(), none(), none(), pass_text(false))];
    };
    match result {
        TaskResult::Integral(v) => vec![row(t, 0, digest(&t.id), "integral", render(v), none(), none(), none())],
        TaskResult::Apply(vals) => vals
            .iter()
            .enumerate()
            .map(|(i, (x, v))| {
                let value = match v {
                    ApplyValue::Exact(q) => render(q),
                    ApplyValue::Approx(f) => float_text(*f),
                };
                row(t, i, digest(&format!("{}@{x}", t.id)), "value", value, none(), none(), none())
            })
            .collect(),
        TaskResult::Lq(v) => vec![row(t, 0, digest(&t.id), "lq", float_text(*v), none(), none(), none())],
        TaskResult::Norm(n) => {
            let label = t.detail.unwrap_or("norm");
            vec![row(t, 0, digest(&t.id), label, float_text(n.value), none(), none(), none())]
        }
        TaskResult::Check(o) => {
            use padic_harmonics_core::verify::SeriesOutcome;
            let (label, lhs, rhs) = match o {
                SeriesOutcome::Converges { value, from_next, .. } => {
                    ("converges", real_text(value), from_next.as_ref().map(real_text).unwrap_or_default())
                }
                SeriesOutcome::Diverges { witness } => ("diverges", real_text(&witness.first_term), real_text(&witness.term_ratio)),
                SeriesOutcome::Indeterminate { .. } => ("indeterminate", none(), none()),
            };
            vec![row(t, 0, digest(&t.id), label, lhs, rhs, none(), pass_text(t.passed))]
        }
        TaskResult::Theorem(es) => es
            .iter()
            .flat_map(|e| {
                e.instances.iter().map(move |i| {
                    let value = |n: &Option<padic_harmonics_core::norms::NormReport>| {
                        n.as_ref().map(|n| float_text(n.value)).unwrap_or_default()
                    };
                    let ratio = i.ratio.map(float_text).unwrap_or_default();
                    let pass = i.ratio.is_none_or(f64::is_finite);
                    row(t, i.id, function_digest(&i.function), &e.operator, value(&i.target), value(&i.source), ratio, pass_text(pass))
                })
            })
            .collect(),
        TaskResult::Suite(s) => s
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let ratio = r.lhs.to_f64() / r.rhs.to_f64();
                let input = digest(&format!("{}:{}:{}:{}", r.check, r.seed, r.context.p(), r.context.dim()));
                row(t, i, input, r.check, real_text(&r.lhs), real_text(&r.rhs), float_text(ratio), pass_text(r.pass))
            })
            .collect(),
    }
}

pub fn write(dir: &Path, t: &TaskOutcome) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(dir.join(format!("{}.csv", t.id)))?;
    w.write_record(HEADER)?;
    for r in rows(t) {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}
