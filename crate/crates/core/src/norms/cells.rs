//! Cell bookkeeping shared by the norm searches.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::funcs::{RealStep, StepFunction};
use crate::numeric::{abs_pow, CompensatedSum, Rational, Real};
use crate::padic::{Ball, Context};

/// Anything that is a finite sum of disjoint ball indicators.
pub trait CellSource {
    fn cell_context(&self) -> Context;
    fn real_cells(&self) -> Vec<(Ball, Real)>;
}

impl CellSource for StepFunction {
    fn cell_context(&self) -> Context {
        self.context()
    }

    fn real_cells(&self) -> Vec<(Ball, Real)> {
        self.cells().map(|(b, v)| (b.clone(), Real::Exact(v.clone()))).collect()
    }
}

impl CellSource for RealStep {
    fn cell_context(&self) -> Context {
        self.context()
    }

    fn real_cells(&self) -> Vec<(Ball, Real)> {
        self.cells().map(|(b, v)| (b.clone(), Real::Approx(*v))).collect()
    }
}

/// Sum that stays exact until the first approximate term.
#[derive(Debug, Clone, Default)]
pub(crate) struct RealSum {
    exact: Rational,
    approx: CompensatedSum,
    inexact: bool,
}

impl RealSum {
    pub(crate) fn add(&mut self, x: Real) {
        match x {
            Real::Exact(r) => self.exact += r,
            Real::Approx(a) => {
                self.inexact = true;
                self.approx.add(a);
            }
        }
    }

    pub(crate) fn value(&self) -> Real {
        if self.inexact {
            let mut s = self.approx;
            s.add(crate::numeric::to_f64(&self.exact));
            Real::Approx(s.value())
        } else {
            Real::Exact(self.exact.clone())
        }
    }
}

pub(crate) fn real_abs_pow(v: &Real, q: &Rational) -> Real {
    match v {
        Real::Exact(r) => abs_pow(r, q),
        Real::Approx(x) => Real::Approx(libm::pow(x.abs(), crate::numeric::to_f64(q))),
    }
}

/// Smallest ball containing every ball in `balls`.
pub(crate) fn hull_of<'a>(balls: impl Iterator<Item = &'a Ball> + Clone) -> Option<Ball> {
    let top = balls.clone().map(Ball::gamma).max()?;
    let first = balls.clone().next()?;
    let mut g = top;
    loop {
        let cand = first.ancestor(g);
        if balls.clone().all(|c| cand.contains_ball(c)) {
            return Some(cand);
        }
        g += 1;
    }
}

/// How a query ball meets the cells.
pub(crate) enum Part<'a> {
    /// The ball lies inside one cell with this value.
    InCell(&'a Real),
    /// The ball strictly contains these cells.
    Cells(&'a [usize]),
    Empty,
}

/// Cells plus an index from every ancestor ball up to a top level to the
/// cells it contains.
pub(crate) struct Indexed {
    pub ctx: Context,
    pub cells: Vec<(Ball, Real)>,
    lookup: BTreeMap<Ball, usize>,
    levels: Vec<i32>,
    inside: BTreeMap<Ball, Vec<usize>>,
    top: i32,
}

impl Indexed {
    pub fn new(f: &impl CellSource) -> Self {
        let ctx = f.cell_context();
        let cells = f.real_cells();
        let lookup = cells.iter().enumerate().map(|(i, (b, _))| (b.clone(), i)).collect();
        let mut levels: Vec<i32> = cells.iter().map(|(b, _)| b.gamma()).collect();
        levels.sort_unstable();
        levels.dedup();
        Indexed {
            ctx,
            cells,
            lookup,
            levels,
            inside: BTreeMap::new(),
            top: i32::MIN,
        }
    }

    pub fn min_gamma(&self) -> Option<i32> {
        self.levels.first().copied()
    }

    pub fn hull(&self) -> Option<Ball> {
        hull_of(self.cells.iter().map(|(b, _)| b))
    }

    /// Smallest `γ` with the support inside `B_γ(0)`.
    pub fn centered_hull_gamma(&self) -> Option<i32> {
        let hull = self.hull()?;
        Some(match hull.center().norm_exponent() {
            None => hull.gamma(),
            Some(e) => hull.gamma().max(e as i32),
        })
    }

    /// Makes `locate` valid for query balls of exponent up to `top`.
    pub fn index_up_to(&mut self, top: i32) {
        if top <= self.top {
            return;
        }
        let from = self.top;
        for (i, (b, _)) in self.cells.iter().enumerate() {
            let start = (b.gamma() + 1).max(from.saturating_add(1));
            for g in start..=top {
                self.inside.entry(b.ancestor(g)).or_default().push(i);
            }
        }
        self.top = top;
    }

    pub fn locate(&self, b: &Ball) -> Part<'_> {
        debug_assert!(b.gamma() <= self.top || self.levels.iter().all(|&g| g >= b.gamma()));
        for &g in self.levels.iter().filter(|&&g| g >= b.gamma()) {
            if let Some(&i) = self.lookup.get(&b.ancestor(g)) {
                return Part::InCell(&self.cells[i].1);
            }
        }
        match self.inside.get(b) {
            Some(ids) => Part::Cells(ids),
            None => Part::Empty,
        }
    }

    /// `∫_B |f|^q`.
    pub fn power_mass(&self, b: &Ball, q: &Rational) -> Real {
        match self.locate(b) {
            Part::InCell(v) => real_abs_pow(v, q) * Real::Exact(b.measure()),
            Part::Cells(ids) => {
                let mut s = RealSum::default();
                for &i in ids {
                    let (c, v) = &self.cells[i];
                    s.add(real_abs_pow(v, q) * Real::Exact(c.measure()));
                }
                s.value()
            }
            Part::Empty => Real::zero(),
        }
    }

    /// `f_B`.
    pub fn mean(&self, b: &Ball) -> Real {
        match self.locate(b) {
            Part::InCell(v) => v.clone(),
            Part::Cells(ids) => {
                let mut s = RealSum::default();
                for &i in ids {
                    let (c, v) = &self.cells[i];
                    s.add(v * &Real::Exact(c.measure()));
                }
                s.value() / Real::Exact(b.measure())
            }
            Part::Empty => Real::zero(),
        }
    }

    /// `∫_B |f - f_B|^q`.
    pub fn oscillation_mass(&self, b: &Ball, q: &Rational) -> Real {
        match self.locate(b) {
            Part::InCell(_) | Part::Empty => Real::zero(),
            Part::Cells(ids) => {
                let m = self.mean(b);
                let mut s = RealSum::default();
                let mut covered = Rational::zero();
                for &i in ids {
                    let (c, v) = &self.cells[i];
                    s.add(real_abs_pow(&(v - &m), q) * Real::Exact(c.measure()));
                    covered += c.measure();
                }
                s.add(real_abs_pow(&m, q) * Real::Exact(b.measure() - covered));
                s.value()
            }
        }
    }

    /// `(∫|f|^q, ∫f, |supp f|)`.
    pub fn totals(&self, q: &Rational) -> (Real, Real, Rational) {
        let mut a = RealSum::default();
        let mut i = RealSum::default();
        let mut m = Rational::zero();
        for (c, v) in &self.cells {
            a.add(real_abs_pow(v, q) * Real::Exact(c.measure()));
            i.add(v * &Real::Exact(c.measure()));
            m += c.measure();
        }
        (a.value(), i.value(), m)
    }
}
