//! Operator outputs as step functions on a window ball.
//!
//! `T_k f`, `T_k^{b} f` and `I^α f` are locally constant but not compactly
//! supported, so they are tabulated on an explicit window. The window is
//! split recursively until each piece is a ball on which the output is
//! provably constant; that piece then takes the value at its center.

use alloc::collections::BTreeMap;

use crate::error::Result;
use crate::funcs::{CommutatorSymbols, HomogeneousKernel, RealStep, StepFunction};
use crate::numeric::Rational;
use crate::padic::{Ball, BallRelation};

use super::riesz::{gamma_n, riesz_integral, RieszOrder};
use super::singular::{commutator_integrand, eval_truncated, TruncationIndex};

/// A function known only on `window`; nothing is claimed outside it.
#[derive(Debug, Clone, PartialEq)]
pub struct Windowed<T> {
    pub window: Ball,
    pub function: T,
}

fn tabulate<V>(
    w: Ball,
    floor: i32,
    decide: &mut impl FnMut(&Ball, bool) -> Result<Option<V>>,
    out: &mut BTreeMap<Ball, V>,
) -> Result<()> {
    let forced = w.gamma() <= floor;
    match decide(&w, forced)? {
        Some(v) => {
            out.insert(w, v);
        }
        None => {
            for child in w.children() {
                tabulate(child, floor, decide, out)?;
            }
        }
    }
    Ok(())
}

/// True when every cell term of `T_k` is constant on `w`: `w` lies inside
/// the cell, or is disjoint from it at a scale the kernel cannot resolve.
fn tk_constant_on(cells: &StepFunction, kernel_level: i32, w: &Ball) -> bool {
    cells.cells().all(|(c, _)| match w.relation(c) {
        BallRelation::AContainsB => false,
        BallRelation::Equal | BallRelation::BContainsA => true,
        BallRelation::Disjoint => {
            let d = w.separation(c).expect("disjoint balls") as i32;
            w.gamma() <= c.gamma().max(d + kernel_level)
        }
    })
}

fn singular_as_step(
    kernel: &HomogeneousKernel,
    k: Option<i32>,
    f: &StepFunction,
    window: &Ball,
) -> Result<Windowed<StepFunction>> {
    let ctx = kernel.context();
    ctx.check_same(f.context())?;
    ctx.check_same(window.context())?;
    let mut cells = BTreeMap::new();
    if let Some(floor) = f.min_gamma() {
        let level = kernel.level();
        tabulate(
            window.clone(),
            floor,
            &mut |w: &Ball, forced| {
                Ok((forced || tk_constant_on(f, level, w)).then(|| eval_truncated(kernel, k, f, w.center())))
            },
            &mut cells,
        )?;
    }
    Ok(Windowed {
        window: window.clone(),
        function: StepFunction::from_disjoint(ctx, cells).normalized(),
    })
}

/// `T_k f` on `window`, exact.
pub fn apply_tk_as_step(
    kernel: &HomogeneousKernel,
    k: TruncationIndex,
    f: &StepFunction,
    window: &Ball,
) -> Result<Windowed<StepFunction>> {
    singular_as_step(kernel, Some(k.get()), f, window)
}

/// `T f` on `window`, exact.
pub fn apply_t_as_step(kernel: &HomogeneousKernel, f: &StepFunction, window: &Ball) -> Result<Windowed<StepFunction>> {
    singular_as_step(kernel, None, f, window)
}

/// `T_k^{b} f` on `window`, exact. A piece is settled once every `b_i` is
/// constant on it and the integrand built from those constants passes the
/// `T_k` test.
pub fn apply_commutator_as_step(
    kernel: &HomogeneousKernel,
    k: TruncationIndex,
    symbols: &CommutatorSymbols,
    f: &StepFunction,
    window: &Ball,
) -> Result<Windowed<StepFunction>> {
    let ctx = kernel.context();
    ctx.check_same(f.context())?;
    ctx.check_same(symbols.context())?;
    ctx.check_same(window.context())?;
    let mut cells: BTreeMap<Ball, Rational> = BTreeMap::new();
    let floor = symbols
        .symbols()
        .iter()
        .filter_map(StepFunction::min_gamma)
        .chain(f.min_gamma())
        .min();
    if let (Some(floor), false) = (floor, f.is_zero()) {
        let level = kernel.level();
        tabulate(
            window.clone(),
            floor,
            &mut |w: &Ball, forced| {
                let constant = symbols.symbols().iter().all(|b| b.constant_value_on(w).is_some());
                if !constant && !forced {
                    return Ok(None);
                }
                let h = commutator_integrand(symbols, f, w.center())?;
                if forced || tk_constant_on(&h, level, w) {
                    Ok(Some(eval_truncated(kernel, Some(k.get()), &h, w.center())))
                } else {
                    Ok(None)
                }
            },
            &mut cells,
        )?;
    }
    Ok(Windowed {
        window: window.clone(),
        function: StepFunction::from_disjoint(ctx, cells).normalized(),
    })
}

/// `I^α f` on `window`; a piece is settled once it holds no cell of `f` strictly inside.
pub fn riesz_as_step(order: &RieszOrder, f: &StepFunction, window: &Ball) -> Result<Windowed<RealStep>> {
    let ctx = order.context();
    ctx.check_same(f.context())?;
    ctx.check_same(window.context())?;
    let mut cells = BTreeMap::new();
    if let Some(floor) = f.min_gamma() {
        let g = gamma_n(ctx, order.alpha());
        tabulate(
            window.clone(),
            floor,
            &mut |w: &Ball, forced| {
                let settled = forced || f.cells().all(|(c, _)| w.relation(c) != BallRelation::AContainsB);
                Ok(settled.then(|| riesz_integral(order, f, w.center()) / g))
            },
            &mut cells,
        )?;
    }
    Ok(Windowed {
        window: window.clone(),
        function: RealStep::from_disjoint(ctx, cells),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::random::{random_kernel, random_point, random_step, rng, RandomProfile};
    use crate::operators::{apply_commutator, apply_t, apply_tk, riesz};
    use crate::numeric::ratio;
    use crate::padic::Context;
    use alloc::vec;

    fn small() -> RandomProfile {
        RandomProfile {
            root_gamma: 0,
            min_depth: 1,
            max_depth: 3,
            max_cells: 6,
            value_bound: 4,
            max_denominator: 3,
        }
    }

    #[test]
    fn steps_agree_with_pointwise() {
        for (p, n) in [(2u64, 1usize), (3, 1), (2, 2)] {
            let ctx = Context::new(p, n).unwrap();
            for seed in 0..6u64 {
                let f = random_step(seed, ctx, &small()).unwrap();
                let kernel = random_kernel(seed + 100, ctx, -2, 3).unwrap();
                let b = random_step(seed + 200, ctx, &small()).unwrap();
                let syms = CommutatorSymbols::new(ctx, vec![b]).unwrap();
                let window = Ball::centered(ctx, 1);
                let k = TruncationIndex::new(-2).unwrap();
                let tk = apply_tk_as_step(&kernel, k, &f, &window).unwrap();
                let t = apply_t_as_step(&kernel, &f, &window).unwrap();
                let cm = apply_commutator_as_step(&kernel, k, &syms, &f, &window).unwrap();
                let order = RieszOrder::new(ctx, ratio(1, 2)).unwrap();
                let ri = riesz_as_step(&order, &f, &window).unwrap();
                let mut r = rng(seed);
                for _ in 0..25 {
                    let x = random_point(&mut r, &window, 6);
                    assert_eq!(tk.function.eval(&x), apply_tk(&kernel, k, &f, &x).unwrap());
                    assert_eq!(t.function.eval(&x), apply_t(&kernel, &f, &x).unwrap());
                    assert_eq!(cm.function.eval(&x), apply_commutator(&kernel, k, &syms, &f, &x).unwrap());
                    let want = riesz(&order, &f, &x).unwrap();
                    assert!((ri.function.eval(&x) - want).abs() <= 1e-12 * want.abs().max(1e-300));
                }
            }
        }
    }

    #[test]
    fn zero_input_gives_zero() {
        let ctx = Context::new(3, 1).unwrap();
        let kernel = random_kernel(1, ctx, -1, 2).unwrap();
        let out = apply_tk_as_step(&kernel, TruncationIndex::new(0).unwrap(), &StepFunction::zero(ctx), &Ball::unit(ctx))
            .unwrap();
        assert!(out.function.is_zero());
    }
}
