//! Seeded generators for test corpora.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Result};
use crate::numeric::{ratio, Rational};
use crate::padic::{Ball, BallRelation, Context, PAdicPoint};

use super::{HomogeneousKernel, StepFunction};

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of random step functions: cells are descendants of `B_root(0)`
/// between `min_depth` and `max_depth` levels down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomProfile {
    pub root_gamma: i32,
    pub min_depth: u32,
    pub max_depth: u32,
    pub max_cells: usize,
    pub value_bound: i64,
    pub max_denominator: i64,
}

impl RandomProfile {
    pub fn empty() -> Self {
        RandomProfile {
            root_gamma: 0,
            min_depth: 0,
            max_depth: 0,
            max_cells: 0,
            value_bound: 0,
            max_denominator: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_depth > self.max_depth {
            return Err(param("max_depth", "below min_depth"));
        }
        if self.max_depth > 12 {
            return Err(param("max_depth", "deeper than 12 levels"));
        }
        if self.max_denominator < 1 {
            return Err(param("max_denominator", "must be at least 1"));
        }
        if self.value_bound < 0 {
            return Err(param("value_bound", "must be nonnegative"));
        }
        crate::padic::check_gamma(self.root_gamma as i64)?;
        crate::padic::check_gamma(self.root_gamma as i64 - self.max_depth as i64)?;
        Ok(())
    }
}

impl Default for RandomProfile {
    /// Desk-scale corpus: depth up to 4, at most 32 cells, values in `[-8, 8]`
    /// with denominators up to 16.
    fn default() -> Self {
        RandomProfile {
            root_gamma: 1,
            min_depth: 1,
            max_depth: 4,
            max_cells: 32,
            value_bound: 8,
            max_denominator: 16,
        }
    }
}

/// A uniformly chosen descendant `depth` levels below `ball`.
pub fn random_descendant<R: Rng + ?Sized>(rng: &mut R, ball: &Ball, depth: u32) -> Ball {
    let mut b = ball.clone();
    for _ in 0..depth {
        let kids = b.children();
        b = kids[rng.random_range(0..kids.len())].clone();
    }
    b
}

/// A point of `ball`, random in its top `depth` digits.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, ball: &Ball, depth: u32) -> PAdicPoint {
    random_descendant(rng, ball, depth).center().clone()
}

/// Nonzero rational with `|v| <= bound` and denominator at most `max_den`.
pub fn random_value<R: Rng + ?Sized>(rng: &mut R, bound: i64, max_den: i64) -> Rational {
    let den = rng.random_range(1..=max_den);
    loop {
        let num = rng.random_range(-bound * den..=bound * den);
        if num != 0 {
            return ratio(num, den);
        }
    }
}

pub fn random_step_with<R: Rng + ?Sized>(rng: &mut R, ctx: Context, profile: &RandomProfile) -> Result<StepFunction> {
    profile.validate()?;
    if profile.max_cells == 0 || profile.value_bound == 0 {
        return Ok(StepFunction::zero(ctx));
    }
    let root = Ball::centered(ctx, profile.root_gamma);
    let target = rng.random_range(1..=profile.max_cells);
    let mut chosen: Vec<Ball> = Vec::new();
    // rejection keeps the cells disjoint; a full tree simply yields fewer cells
    for _ in 0..target * 8 {
        if chosen.len() == target {
            break;
        }
        let depth = rng.random_range(profile.min_depth..=profile.max_depth);
        let cand = random_descendant(rng, &root, depth);
        if chosen.iter().all(|c| c.relation(&cand) == BallRelation::Disjoint) {
            chosen.push(cand);
        }
    }
    let cells: BTreeMap<Ball, Rational> = chosen
        .into_iter()
        .map(|b| {
            let v = random_value(rng, profile.value_bound, profile.max_denominator);
            (b, v)
        })
        .collect();
    Ok(StepFunction::from_disjoint(ctx, cells))
}

/// Deterministic in `seed`; the cells are always pairwise disjoint.
pub fn random_step(seed: u64, ctx: Context, profile: &RandomProfile) -> Result<StepFunction> {
    random_step_with(&mut rng(seed), ctx, profile)
}

/// A mean-zero kernel at `level` with values drawn from `[-bound, bound]`
/// and then centered.
pub fn random_kernel_with<R: Rng + ?Sized>(
    rng: &mut R,
    ctx: Context,
    level: i32,
    bound: i64,
) -> Result<HomogeneousKernel> {
    let cells = crate::padic::Sphere::centered(ctx, 0).cells(level)?;
    let raw: Vec<Rational> = cells.iter().map(|_| ratio(rng.random_range(-bound..=bound), 1)).collect();
    let mean = raw.iter().sum::<Rational>() / ratio(raw.len() as i64, 1);
    HomogeneousKernel::new(ctx, level, cells.into_iter().zip(raw).map(|(b, v)| (b, v - &mean)))
}

pub fn random_kernel(seed: u64, ctx: Context, level: i32, bound: i64) -> Result<HomogeneousKernel> {
    random_kernel_with(&mut rng(seed), ctx, level, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn deterministic_and_disjoint() {
        let ctx = Context::new(3, 2).unwrap();
        let prof = RandomProfile::default();
        for seed in 0..50 {
            let f = random_step(seed, ctx, &prof).unwrap();
            let g = random_step(seed, ctx, &prof).unwrap();
            assert_eq!(f.cell_map(), g.cell_map());
            let cells: Vec<&Ball> = f.cells().map(|(b, _)| b).collect();
            for (i, a) in cells.iter().enumerate() {
                for b in &cells[i + 1..] {
                    assert_eq!(a.relation(b), BallRelation::Disjoint);
                }
            }
            assert!(f.cells().all(|(_, v)| v.abs() <= ratio(8, 1)));
        }
    }

    #[test]
    fn empty_profile_gives_zero() {
        let ctx = Context::new(2, 1).unwrap();
        assert!(random_step(7, ctx, &RandomProfile::empty()).unwrap().is_zero());
    }

    #[test]
    fn kernels_have_mean_zero() {
        let ctx = Context::new(5, 1).unwrap();
        for seed in 0..10 {
            let k = random_kernel(seed, ctx, -2, 4).unwrap();
            assert_eq!(k.unit_sphere_integral(), ratio(0, 1));
        }
    }

    #[test]
    fn points_land_in_ball() {
        let ctx = Context::new(2, 2).unwrap();
        let b = Ball::new(-1, PAdicPoint::from_ints(ctx, &[1, 0]).unwrap()).unwrap();
        let mut r = rng(3);
        for _ in 0..20 {
            assert!(b.contains(&random_point(&mut r, &b, 3)));
        }
    }
}
