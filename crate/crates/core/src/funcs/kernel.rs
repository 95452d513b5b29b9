use alloc::collections::BTreeMap;
use alloc::format;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{pow_p, rat, render, Rational};
use crate::padic::{check_gamma, Ball, Context, PAdicPoint, Sphere};

/// A kernel `Ω` on `Q_p^n \ {0}` with `Ω(p^j x) = Ω(x)` and zero mean on the
/// unit sphere, stored as its values on the level-`ℓ` cells of `S_0(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousKernel {
    ctx: Context,
    level: i32,
    cells: BTreeMap<Ball, Rational>,
    // ∫ Ω over every ball of exponent in (ℓ, -1] inside S_0(0)
    coarse: BTreeMap<Ball, Rational>,
}

impl HomogeneousKernel {
    /// `cells` must list every level-`level` cell of `S_0(0)` exactly once.
    pub fn new(ctx: Context, level: i32, cells: impl IntoIterator<Item = (Ball, Rational)>) -> Result<Self> {
        if level > -1 {
            return Err(Error::InvalidKernel(format!(
                "level {level} must be at most -1 (S_0 is not a union of level-0 balls)"
            )));
        }
        check_gamma(level as i64)?;
        let unit = Sphere::centered(ctx, 0);
        let mut map = BTreeMap::new();
        for (b, v) in cells {
            b.check_context(ctx)?;
            if b.gamma() != level {
                return Err(Error::InvalidKernel(format!(
                    "cell {b} has exponent {}, expected {level}",
                    b.gamma()
                )));
            }
            if !unit.contains(b.center()) {
                return Err(Error::InvalidKernel(format!("cell {b} is not inside the unit sphere")));
            }
            if map.insert(b.clone(), v).is_some() {
                return Err(Error::InvalidKernel(format!("cell {b} listed twice")));
            }
        }
        let expected = (ctx.branching() - 1) * ctx.branching().pow((-1 - level) as u32);
        if map.len() as u64 != expected {
            return Err(Error::InvalidKernel(format!(
                "{} cells given, the unit sphere has {expected} cells at level {level}",
                map.len()
            )));
        }
        let kernel = Self::assemble(ctx, level, map);
        let mean = kernel.unit_sphere_integral();
        if !mean.is_zero() {
            return Err(Error::KernelMeanNonZero(render(&mean)));
        }
        Ok(kernel)
    }

    /// Builds from a value rule on the level-`level` cells; still checks mean zero.
    pub fn from_fn(ctx: Context, level: i32, f: impl Fn(&Ball) -> Rational) -> Result<Self> {
        let cells = Sphere::centered(ctx, 0).cells(level)?;
        Self::new(ctx, level, cells.into_iter().map(|b| {
            let v = f(&b);
            (b, v)
        }))
    }

    pub fn zero(ctx: Context, level: i32) -> Result<Self> {
        Self::from_fn(ctx, level, |_| Rational::zero())
    }

    fn assemble(ctx: Context, level: i32, cells: BTreeMap<Ball, Rational>) -> Self {
        let mut coarse: BTreeMap<Ball, Rational> = BTreeMap::new();
        for (b, v) in &cells {
            let mass = v * b.measure();
            for g in level + 1..=-1 {
                *coarse.entry(b.ancestor(g)).or_insert_with(Rational::zero) += &mass;
            }
        }
        HomogeneousKernel {
            ctx,
            level,
            cells,
            coarse,
        }
    }

    pub fn context(&self) -> Context {
        self.ctx
    }

    pub fn level(&self) -> i32 {
        self.level
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Ball, &Rational)> + '_ {
        self.cells.iter()
    }

    /// `∫_{|x|=1} Ω(x) dx`; zero for every constructed kernel.
    pub fn unit_sphere_integral(&self) -> Rational {
        self.cells.iter().map(|(b, v)| v * b.measure()).sum()
    }

    /// `‖Ω‖_∞`.
    pub fn sup_norm(&self) -> Rational {
        self.cells.values().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn scaled(&self, c: &Rational) -> HomogeneousKernel {
        Self::assemble(
            self.ctx,
            self.level,
            self.cells.iter().map(|(b, v)| (b.clone(), v * c)).collect(),
        )
    }

    fn unit_value(&self, u: &PAdicPoint) -> Rational {
        self.cells
            .get(&Ball::canonical(self.level, u))
            .cloned()
            .expect("point on the unit sphere lies in a kernel cell")
    }

    /// `Ω(y)` via `Ω(y) = Ω(p^j y)` with `|y|_p = p^j`.
    pub fn eval(&self, y: &PAdicPoint) -> Result<Rational> {
        y.check_context(self.ctx)?;
        let j = y.norm_exponent().ok_or(Error::KernelAtOrigin)?;
        Ok(self.unit_value(&y.scale_pow(j)))
    }

    /// `∫_B Ω` for a ball `B ⊆ S_0(0)` of exponent at most -1.
    fn unit_ball_integral(&self, b: &Ball) -> Rational {
        if b.gamma() <= self.level {
            let cell = b.ancestor(self.level);
            &self.cells[&cell] * b.measure()
        } else {
            self.coarse[b].clone()
        }
    }

    /// `∫_B Ω(y) dy` for any ball.
    ///
    /// A ball missing the origin sits in one sphere `S_j(0)` and rescales onto
    /// the unit sphere; a ball around the origin is a union of whole spheres.
    pub fn integral_over(&self, b: &Ball) -> Rational {
        let p = self.ctx.p();
        let n = self.ctx.dim() as i64;
        match b.center().norm_exponent() {
            Some(j) if j > b.gamma() as i64 => {
                let unit = Ball::canonical(b.gamma() - j as i32, &b.center().scale_pow(j));
                pow_p(p, n * j) * self.unit_ball_integral(&unit)
            }
            _ => {
                let shells = pow_p(p, n * b.gamma() as i64) / (rat(1) - pow_p(p, -n));
                self.unit_sphere_integral() * shells
            }
        }
    }

    /// `sup_{|y|=1} Σ_{j≥1} ∫_{|x|=1} |Ω(x + p^j y) - Ω(x)| dx`.
    ///
    /// Terms with `j >= -ℓ` vanish because the shift stays inside the cell of
    /// `x`, and the integrand depends on `y` only through its level-`ℓ` cell.
    pub fn dini_modulus(&self) -> Rational {
        let cell_measure = pow_p(self.ctx.p(), self.ctx.dim() as i64 * self.level as i64);
        let mut best = Rational::zero();
        for y in self.cells.keys() {
            let mut total = Rational::zero();
            for j in 1..-self.level {
                let shift = y.center().scale_pow(j as i64);
                for (x, vx) in &self.cells {
                    let moved = self.unit_value(&x.center().add(&shift));
                    total += (moved - vx).abs();
                }
            }
            let total = total * &cell_measure;
            if total > best {
                best = total;
            }
        }
        best
    }
}
