use alloc::collections::BTreeMap;

use crate::numeric::{to_f64, CompensatedSum};
use crate::padic::{Ball, Context, PAdicPoint};

use super::StepFunction;

/// Step function with floating-point values, for outputs that are not
/// rational (the Riesz potential). Cells are disjoint; zeros are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct RealStep {
    ctx: Context,
    cells: BTreeMap<Ball, f64>,
}

impl RealStep {
    /// Caller guarantees disjointness.
    pub(crate) fn from_disjoint(ctx: Context, mut cells: BTreeMap<Ball, f64>) -> Self {
        cells.retain(|_, v| *v != 0.0);
        RealStep { ctx, cells }
    }

    pub fn context(&self) -> Context {
        self.ctx
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Ball, &f64)> + '_ {
        self.cells.iter()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn eval(&self, x: &PAdicPoint) -> f64 {
        self.cells
            .iter()
            .find(|(b, _)| b.contains(x))
            .map_or(0.0, |(_, v)| *v)
    }

    pub fn integral(&self) -> f64 {
        let mut s = CompensatedSum::new();
        for (b, v) in &self.cells {
            s.add(v * to_f64(&b.measure()));
        }
        s.value()
    }
}

impl From<&StepFunction> for RealStep {
    fn from(f: &StepFunction) -> Self {
        RealStep::from_disjoint(f.context(), f.cells().map(|(b, v)| (b.clone(), to_f64(v))).collect())
    }
}
