use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::point::canonical_coord;
use super::{check_gamma, Context, PAdicPoint, Prime};
use crate::error::{Error, Result};
use crate::numeric::{pow_p, rat, Rational};

/// How two balls sit relative to each other. Partial overlap cannot happen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BallRelation {
    Disjoint,
    Equal,
    AContainsB,
    BContainsA,
}

/// `B_γ(a) = {x : |x - a|_p <= p^γ}` with a canonical center.
///
/// The center keeps only the p-adic digits strictly below position `-γ`, so
/// two balls are equal as sets exactly when they are equal as values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ball {
    gamma: i32,
    center: PAdicPoint,
}

impl Ball {
    pub fn new(gamma: i64, center: PAdicPoint) -> Result<Ball> {
        let gamma = check_gamma(gamma)?;
        Ok(Ball::canonical(gamma, &center))
    }

    /// Canonicalizes without range-checking `gamma`.
    pub(crate) fn canonical(gamma: i32, center: &PAdicPoint) -> Ball {
        let p = center.prime();
        Ball {
            gamma,
            center: center.map(|c| canonical_coord(c, gamma, p)),
        }
    }

    /// `B_γ(0)`.
    pub fn centered(ctx: Context, gamma: i32) -> Ball {
        Ball {
            gamma,
            center: PAdicPoint::zero(ctx),
        }
    }

    /// `B_0(0) = Z_p^n`.
    pub fn unit(ctx: Context) -> Ball {
        Ball::centered(ctx, 0)
    }

    pub fn gamma(&self) -> i32 {
        self.gamma
    }

    pub fn center(&self) -> &PAdicPoint {
        &self.center
    }

    pub fn prime(&self) -> Prime {
        self.center.prime()
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn context(&self) -> Context {
        self.center.context()
    }

    pub fn contains(&self, x: &PAdicPoint) -> bool {
        let p = self.prime();
        x.coords()
            .iter()
            .zip(self.center.coords())
            .all(|(xi, ci)| canonical_coord(xi, self.gamma, p) == *ci)
    }

    pub fn contains_origin(&self) -> bool {
        self.center.is_zero()
    }

    /// `self ⊇ other`.
    pub fn contains_ball(&self, other: &Ball) -> bool {
        other.gamma <= self.gamma && self.contains(&other.center)
    }

    /// The unique ball of exponent `level >= gamma` containing this one.
    pub fn ancestor(&self, level: i32) -> Ball {
        debug_assert!(level >= self.gamma);
        if level == self.gamma {
            return self.clone();
        }
        Ball::canonical(level, &self.center)
    }

    pub fn parent(&self) -> Ball {
        self.ancestor(self.gamma + 1)
    }

    /// `|B_γ(a)|_H = p^{nγ}`.
    pub fn measure(&self) -> Rational {
        pow_p(self.prime().get(), self.dim() as i64 * self.gamma as i64)
    }

    pub fn relation(&self, other: &Ball) -> BallRelation {
        use core::cmp::Ordering::*;
        match self.gamma.cmp(&other.gamma) {
            Equal => {
                if self.center == other.center {
                    BallRelation::Equal
                } else {
                    BallRelation::Disjoint
                }
            }
            Greater => {
                if self.contains(&other.center) {
                    BallRelation::AContainsB
                } else {
                    BallRelation::Disjoint
                }
            }
            Less => {
                if other.contains(&self.center) {
                    BallRelation::BContainsA
                } else {
                    BallRelation::Disjoint
                }
            }
        }
    }

    /// `log_p` of the distance between two disjoint balls (constant over all point pairs).
    pub fn separation(&self, other: &Ball) -> Option<i64> {
        match self.relation(other) {
            BallRelation::Disjoint => self.center.distance_exponent(&other.center),
            _ => None,
        }
    }

    /// The `p^n` balls of exponent `γ - 1` partitioning this ball.
    pub fn children(&self) -> Vec<Ball> {
        let p = self.prime().get();
        let n = self.dim();
        let step = pow_p(p, -(self.gamma as i64));
        let count = (p as u64).pow(n as u32);
        let mut out = Vec::with_capacity(count as usize);
        let mut digits = vec![0u32; n];
        for _ in 0..count {
            let center = PAdicPoint::in_context(
                self.context(),
                self.center
                    .coords()
                    .iter()
                    .zip(&digits)
                    .map(|(c, &d)| c + &step * rat(d as i64))
                    .collect(),
            )
            .expect("same dimension");
            out.push(Ball {
                gamma: self.gamma - 1,
                center,
            });
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < p {
                    break;
                }
                *d = 0;
            }
        }
        out
    }

    /// All sub-balls of exponent `level <= gamma`.
    pub fn descendants(&self, level: i32) -> Vec<Ball> {
        let mut layer = vec![self.clone()];
        for _ in level..self.gamma {
            layer = layer.iter().flat_map(Ball::children).collect();
        }
        layer
    }

    pub(crate) fn check_context(&self, ctx: Context) -> Result<()> {
        self.center.check_context(ctx)
    }

    pub fn render(&self) -> String {
        format!("B_{}{}", self.gamma, self.center.render())
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Relation of `a` to `b`, checking that both live in the same `Q_p^n`.
pub fn ultrametric_compare(a: &Ball, b: &Ball) -> Result<BallRelation> {
    a.context().check_same(b.context())?;
    Ok(a.relation(b))
}

/// `S_γ(a) = B_γ(a) \ B_{γ-1}(a)`; the center is canonical at level `γ - 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sphere {
    gamma: i32,
    center: PAdicPoint,
}

impl Sphere {
    pub fn new(gamma: i64, center: PAdicPoint) -> Result<Sphere> {
        let gamma = check_gamma(gamma)?;
        Ok(Sphere::canonical(gamma, &center))
    }

    pub(crate) fn canonical(gamma: i32, center: &PAdicPoint) -> Sphere {
        Sphere {
            gamma,
            center: Ball::canonical(gamma - 1, center).center,
        }
    }

    pub fn centered(ctx: Context, gamma: i32) -> Sphere {
        Sphere {
            gamma,
            center: PAdicPoint::zero(ctx),
        }
    }

    pub fn gamma(&self) -> i32 {
        self.gamma
    }

    pub fn center(&self) -> &PAdicPoint {
        &self.center
    }

    pub fn outer(&self) -> Ball {
        Ball::canonical(self.gamma, &self.center)
    }

    pub fn inner(&self) -> Ball {
        Ball {
            gamma: self.gamma - 1,
            center: self.center.clone(),
        }
    }

    pub fn contains(&self, x: &PAdicPoint) -> bool {
        self.outer().contains(x) && !self.inner().contains(x)
    }

    /// `|S_γ(a)|_H = p^{nγ}(1 - p^{-n})`.
    pub fn measure(&self) -> Rational {
        let p = self.center.prime().get();
        let n = self.center.dim() as i64;
        pow_p(p, n * self.gamma as i64) * (rat(1) - pow_p(p, -n))
    }

    /// Balls of exponent `level` partitioning the sphere.
    pub fn cells(&self, level: i32) -> Result<Vec<Ball>> {
        if level > self.gamma - 1 {
            return Err(Error::SphereLevel {
                level,
                max: self.gamma - 1,
            });
        }
        let hole = self.inner();
        Ok(self
            .outer()
            .children()
            .into_iter()
            .filter(|c| *c != hole)
            .flat_map(|c| c.descendants(level))
            .collect())
    }
}

/// `{y : p^inner < |y - c|_p <= p^outer}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annulus {
    center: PAdicPoint,
    inner: i32,
    outer: i32,
}

impl Annulus {
    pub fn new(center: PAdicPoint, inner: i32, outer: i32) -> Result<Annulus> {
        if inner >= outer {
            return Err(Error::param(
                "annulus",
                format!("inner exponent {inner} must be below outer {outer}"),
            ));
        }
        check_gamma(inner as i64)?;
        check_gamma(outer as i64)?;
        Ok(Annulus {
            center,
            inner,
            outer,
        })
    }

    pub fn inner(&self) -> i32 {
        self.inner
    }

    pub fn outer(&self) -> i32 {
        self.outer
    }

    pub fn center(&self) -> &PAdicPoint {
        &self.center
    }
}

/// Integration domains. Each is a ball minus an optional concentric sub-ball.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Ball(Ball),
    Sphere(Sphere),
    Annulus(Annulus),
}

impl Region {
    pub fn as_difference(&self) -> (Ball, Option<Ball>) {
        match self {
            Region::Ball(b) => (b.clone(), None),
            Region::Sphere(s) => (s.outer(), Some(s.inner())),
            Region::Annulus(a) => (
                Ball::canonical(a.outer, &a.center),
                Some(Ball::canonical(a.inner, &a.center)),
            ),
        }
    }

    pub fn contains(&self, x: &PAdicPoint) -> bool {
        let (outer, hole) = self.as_difference();
        outer.contains(x) && !hole.is_some_and(|h| h.contains(x))
    }

    pub fn measure(&self) -> Rational {
        let (outer, hole) = self.as_difference();
        outer.measure() - hole.map(|h| h.measure()).unwrap_or_else(|| rat(0))
    }

    pub fn context(&self) -> Context {
        self.as_difference().0.context()
    }
}

/// Coarsest partition of the union of `balls` into balls each of which is
/// either inside or disjoint from every input ball.
pub fn common_refinement(balls: &[Ball]) -> Vec<Ball> {
    let uniq: BTreeSet<Ball> = balls.iter().cloned().collect();
    let levels: BTreeSet<i32> = uniq.iter().map(Ball::gamma).collect();
    let covered = |b: &Ball| {
        levels
            .range(b.gamma + 1..)
            .any(|&g| uniq.contains(&b.ancestor(g)))
    };
    let mut out = Vec::new();
    for root in uniq.iter().filter(|b| !covered(b)) {
        let inner: Vec<&Ball> = uniq
            .iter()
            .filter(|b| *b != root && root.contains_ball(b))
            .collect();
        split(root.clone(), inner, &mut out);
    }
    out
}

fn split(ball: Ball, inner: Vec<&Ball>, out: &mut Vec<Ball>) {
    if inner.is_empty() {
        out.push(ball);
        return;
    }
    for child in ball.children() {
        let sub: Vec<&Ball> = inner
            .iter()
            .copied()
            .filter(|b| **b != child && child.contains_ball(b))
            .collect();
        split(child, sub, out);
    }
}
