use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::padic::{common_refinement, Ball, BallRelation, Context, PAdicPoint};

/// Pointwise operation for [`StepFunction::combine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointwiseOp {
    Add,
    Sub,
    Mul,
}

impl PointwiseOp {
    fn apply(self, a: &Rational, b: &Rational) -> Rational {
        match self {
            PointwiseOp::Add => a + b,
            PointwiseOp::Sub => a - b,
            PointwiseOp::Mul => a * b,
        }
    }
}

/// A finite rational combination of disjoint ball indicators.
///
/// Cells are pairwise disjoint and carry nonzero values; the function vanishes
/// off their union. Two step functions compare equal when they agree
/// pointwise, whatever cell decomposition they carry.
#[derive(Debug, Clone)]
pub struct StepFunction {
    ctx: Context,
    cells: BTreeMap<Ball, Rational>,
    levels: Vec<i32>,
}

impl StepFunction {
    pub fn zero(ctx: Context) -> Self {
        Self::build(ctx, BTreeMap::new())
    }

    pub fn indicator(ball: &Ball) -> Self {
        Self::constant_on(ball, Rational::from_integer(1.into()))
    }

    pub fn constant_on(ball: &Ball, value: Rational) -> Self {
        let mut cells = BTreeMap::new();
        cells.insert(ball.clone(), value);
        Self::build(ball.context(), cells)
    }

    /// Validates context and disjointness; zero-valued cells are dropped.
    pub fn from_cells(ctx: Context, cells: impl IntoIterator<Item = (Ball, Rational)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (ball, value) in cells {
            ball.check_context(ctx)?;
            if map.insert(ball.clone(), value).is_some() {
                return Err(Error::OverlappingCells(format!("{ball} listed twice")));
            }
        }
        let levels: BTreeSet<i32> = map.keys().map(Ball::gamma).collect();
        for ball in map.keys() {
            for &g in levels.range(ball.gamma() + 1..) {
                let anc = ball.ancestor(g);
                if map.contains_key(&anc) {
                    return Err(Error::OverlappingCells(format!("{ball} lies inside {anc}")));
                }
            }
        }
        Ok(Self::build(ctx, map))
    }

    /// Caller guarantees disjointness.
    pub(crate) fn from_disjoint(ctx: Context, cells: BTreeMap<Ball, Rational>) -> Self {
        Self::build(ctx, cells)
    }

    fn build(ctx: Context, mut cells: BTreeMap<Ball, Rational>) -> Self {
        cells.retain(|_, v| !v.is_zero());
        let levels: BTreeSet<i32> = cells.keys().map(Ball::gamma).collect();
        StepFunction {
            ctx,
            cells,
            levels: levels.into_iter().collect(),
        }
    }

    pub fn context(&self) -> Context {
        self.ctx
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Ball, &Rational)> + '_ {
        self.cells.iter()
    }

    pub fn cell_map(&self) -> &BTreeMap<Ball, Rational> {
        &self.cells
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    /// Distinct cell exponents, ascending.
    pub fn levels(&self) -> &[i32] {
        &self.levels
    }

    pub fn min_gamma(&self) -> Option<i32> {
        self.levels.first().copied()
    }

    pub fn max_gamma(&self) -> Option<i32> {
        self.levels.last().copied()
    }

    /// Smallest ball containing the support.
    pub fn hull(&self) -> Option<Ball> {
        let top = self.max_gamma()?;
        let first = self.cells.keys().next()?;
        let mut g = top;
        loop {
            let cand = first.ancestor(g);
            if self.cells.keys().all(|c| cand.contains_ball(c)) {
                return Some(cand);
            }
            g += 1;
        }
    }

    /// Smallest `γ` with `supp f ⊆ B_γ(0)`.
    pub fn centered_hull_gamma(&self) -> Option<i32> {
        let hull = self.hull()?;
        Some(match hull.center().norm_exponent() {
            None => hull.gamma(),
            Some(e) => hull.gamma().max(e as i32),
        })
    }

    /// The cell containing `x`, if any.
    pub fn cell_at(&self, x: &PAdicPoint) -> Option<(&Ball, &Rational)> {
        self.levels.iter().find_map(|&g| {
            let b = Ball::canonical(g, x);
            self.cells.get_key_value(&b)
        })
    }

    pub fn eval(&self, x: &PAdicPoint) -> Rational {
        self.cell_at(x).map(|(_, v)| v.clone()).unwrap_or_else(Rational::zero)
    }

    /// The cell containing (or equal to) `b`, if any.
    pub fn cell_containing_ball(&self, b: &Ball) -> Option<(&Ball, &Rational)> {
        self.levels
            .iter()
            .filter(|&&g| g >= b.gamma())
            .find_map(|&g| self.cells.get_key_value(&b.ancestor(g)))
    }

    /// Value of `f` on `b` if `f` is constant there.
    pub fn constant_value_on(&self, b: &Ball) -> Option<Rational> {
        if let Some((_, v)) = self.cell_containing_ball(b) {
            return Some(v.clone());
        }
        if self.cells.keys().any(|c| b.contains_ball(c)) {
            None
        } else {
            Some(Rational::zero())
        }
    }

    /// Every cell split down to exponent `level`.
    pub fn refine(&self, level: i32) -> Result<StepFunction> {
        if let Some(g) = self.min_gamma() {
            if level > g {
                return Err(Error::RefineAboveCell {
                    level,
                    cell_gamma: g,
                });
            }
        }
        let mut out = BTreeMap::new();
        for (ball, v) in &self.cells {
            for piece in ball.descendants(level) {
                out.insert(piece, v.clone());
            }
        }
        Ok(Self::build(self.ctx, out))
    }

    /// Coarsest representation: sibling cells with a common value are merged.
    pub fn normalized(&self) -> StepFunction {
        let full = self.ctx.branching();
        let mut cells = self.cells.clone();
        loop {
            let mut groups: BTreeMap<Ball, Vec<&Ball>> = BTreeMap::new();
            for b in cells.keys() {
                groups.entry(b.parent()).or_default().push(b);
            }
            let mut merges = Vec::new();
            for (parent, kids) in &groups {
                if kids.len() as u64 == full {
                    let v = &cells[kids[0]];
                    if kids.iter().all(|k| &cells[*k] == v) {
                        merges.push((parent.clone(), v.clone(), kids.iter().map(|k| (*k).clone()).collect::<Vec<_>>()));
                    }
                }
            }
            if merges.is_empty() {
                break;
            }
            for (parent, v, kids) in merges {
                for k in kids {
                    cells.remove(&k);
                }
                cells.insert(parent, v);
            }
        }
        Self::build(self.ctx, cells)
    }

    /// Exact pointwise `f op g` over the common refinement of both cell sets.
    pub fn combine(&self, other: &StepFunction, op: PointwiseOp) -> Result<StepFunction> {
        self.ctx.check_same(other.ctx)?;
        let balls: Vec<Ball> = self.cells.keys().chain(other.cells.keys()).cloned().collect();
        let zero = Rational::zero();
        let mut out = BTreeMap::new();
        for piece in common_refinement(&balls) {
            let a = self.cell_containing_ball(&piece).map_or(&zero, |(_, v)| v);
            let b = other.cell_containing_ball(&piece).map_or(&zero, |(_, v)| v);
            let v = op.apply(a, b);
            if !v.is_zero() {
                out.insert(piece, v);
            }
        }
        Ok(Self::build(self.ctx, out).normalized())
    }

    pub fn add(&self, other: &StepFunction) -> Result<StepFunction> {
        self.combine(other, PointwiseOp::Add)
    }

    pub fn sub(&self, other: &StepFunction) -> Result<StepFunction> {
        self.combine(other, PointwiseOp::Sub)
    }

    pub fn mul(&self, other: &StepFunction) -> Result<StepFunction> {
        self.combine(other, PointwiseOp::Mul)
    }

    pub fn map_values(&self, f: impl Fn(&Rational) -> Rational) -> StepFunction {
        Self::build(
            self.ctx,
            self.cells.iter().map(|(b, v)| (b.clone(), f(v))).collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> StepFunction {
        self.map_values(|v| v * c)
    }

    pub fn abs(&self) -> StepFunction {
        self.map_values(|v| v.abs())
    }

    /// `x ↦ f(x - x0)`.
    pub fn translate(&self, x0: &PAdicPoint) -> Result<StepFunction> {
        x0.check_context(self.ctx)?;
        Ok(Self::build(
            self.ctx,
            self.cells
                .iter()
                .map(|(b, v)| (Ball::canonical(b.gamma(), &b.center().add(x0)), v.clone()))
                .collect(),
        ))
    }

    /// `x ↦ f(p^j x)`; the cell `B_γ(c)` becomes `B_{γ+j}(p^{-j} c)`.
    pub fn dilate(&self, j: i32) -> StepFunction {
        Self::build(
            self.ctx,
            self.cells
                .iter()
                .map(|(b, v)| {
                    (
                        Ball::canonical(b.gamma() + j, &b.center().scale_pow(-(j as i64))),
                        v.clone(),
                    )
                })
                .collect(),
        )
    }

    /// `f · χ_B`.
    pub fn restrict(&self, ball: &Ball) -> StepFunction {
        if let Some((_, v)) = self.cell_containing_ball(ball) {
            return Self::constant_on(ball, v.clone());
        }
        Self::build(
            self.ctx,
            self.cells
                .iter()
                .filter(|(c, _)| ball.contains_ball(c))
                .map(|(c, v)| (c.clone(), v.clone()))
                .collect(),
        )
    }

    /// `f · χ_{B^c}`.
    pub fn restrict_complement(&self, ball: &Ball) -> StepFunction {
        let mut cells = BTreeMap::new();
        for (c, v) in &self.cells {
            match c.relation(ball) {
                BallRelation::Disjoint => {
                    cells.insert(c.clone(), v.clone());
                }
                BallRelation::AContainsB => {
                    for piece in common_refinement(&[c.clone(), ball.clone()]) {
                        if !ball.contains_ball(&piece) {
                            cells.insert(piece, v.clone());
                        }
                    }
                }
                BallRelation::Equal | BallRelation::BContainsA => {}
            }
        }
        Self::build(self.ctx, cells)
    }

    /// `∫ f dx`.
    pub fn integral(&self) -> Rational {
        self.cells.iter().map(|(b, v)| v * b.measure()).sum()
    }

    /// `∫_B f dx`.
    pub fn integral_over(&self, ball: &Ball) -> Rational {
        let mut acc = Rational::zero();
        for (c, v) in &self.cells {
            match c.relation(ball) {
                BallRelation::Disjoint => {}
                BallRelation::Equal | BallRelation::BContainsA => acc += v * c.measure(),
                BallRelation::AContainsB => acc += v * ball.measure(),
            }
        }
        acc
    }

    /// `f_B = |B|^{-1} ∫_B f`.
    pub fn ball_mean(&self, ball: &Ball) -> Rational {
        self.integral_over(ball) / ball.measure()
    }

    /// Sum of the measures of cells inside `ball` (or `|ball|` if a cell covers it).
    pub fn covered_measure(&self, ball: &Ball) -> Rational {
        if self.cell_containing_ball(ball).is_some() {
            return ball.measure();
        }
        self.cells
            .keys()
            .filter(|c| ball.contains_ball(c))
            .map(Ball::measure)
            .sum()
    }

    pub fn max_abs(&self) -> Rational {
        self.cells.values().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
    }
}

impl PartialEq for StepFunction {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.normalized().cells == other.normalized().cells
    }
}
