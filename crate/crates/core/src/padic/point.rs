use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Context, Prime};
use crate::error::{Error, Result};
use crate::numeric::{pow_p, render, Rational};

/// Exponent of `p` in a rational; zero has infinite valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// `γ(x)` with `x = p^γ · m/n`, `p ∤ m`, `p ∤ n`.
pub fn valuation(x: &Rational, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let pb = BigInt::from(p.get());
    Valuation::Finite(int_valuation(x.numer(), &pb) - int_valuation(x.denom(), &pb))
}

/// `|x|_p` as an exact rational.
pub fn abs_p(x: &Rational, p: Prime) -> Rational {
    match valuation(x, p) {
        Valuation::Infinite => Rational::zero(),
        Valuation::Finite(v) => pow_p(p.get(), -v),
    }
}

/// The p-adic fractional part: the unique `t ∈ Z[1/p] ∩ [0, 1)` with `s - t ∈ Z_p`.
pub(crate) fn fractional_part(s: &Rational, p: Prime) -> Rational {
    let pb = BigInt::from(p.get());
    let mut w = s.denom().clone();
    let mut pe = BigInt::one();
    loop {
        let (q, r) = w.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        w = q;
        pe *= &pb;
    }
    if pe.is_one() {
        return Rational::zero();
    }
    // s = u / (p^e w); t = (u w^{-1} mod p^e) / p^e
    let ext = w.extended_gcd(&pe);
    let inv = ext.x.mod_floor(&pe);
    let a = (s.numer() * inv).mod_floor(&pe);
    Rational::new(a, pe)
}

/// Representative of `c` modulo `p^{-gamma} Z_p` with digits only below `p^{-gamma}`.
pub(crate) fn canonical_coord(c: &Rational, gamma: i32, p: Prime) -> Rational {
    let scaled = c * pow_p(p.get(), gamma as i64);
    fractional_part(&scaled, p) * pow_p(p.get(), -(gamma as i64))
}

/// A point of `Q_p^n` with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PAdicPoint {
    prime: Prime,
    coords: Vec<Rational>,
}

impl PAdicPoint {
    pub fn new(prime: Prime, coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() || coords.len() > super::MAX_DIM {
            return Err(Error::DimensionOutOfRange(coords.len()));
        }
        Ok(PAdicPoint { prime, coords })
    }

    pub fn in_context(ctx: Context, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != ctx.dim() {
            return Err(Error::DimensionMismatch {
                expected: ctx.dim(),
                found: coords.len(),
            });
        }
        Ok(PAdicPoint {
            prime: ctx.prime(),
            coords,
        })
    }

    pub fn zero(ctx: Context) -> Self {
        PAdicPoint {
            prime: ctx.prime(),
            coords: (0..ctx.dim()).map(|_| Rational::zero()).collect(),
        }
    }

    /// Point with every coordinate equal to an integer; handy in tests.
    pub fn from_ints(ctx: Context, xs: &[i64]) -> Result<Self> {
        Self::in_context(ctx, xs.iter().map(|&x| crate::numeric::rat(x)).collect())
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn context(&self) -> Context {
        Context::from_parts(self.prime, self.coords.len())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Largest exponent `e` with `|x|_p = p^e`, or `None` for the origin.
    pub fn norm_exponent(&self) -> Option<i64> {
        self.coords
            .iter()
            .filter_map(|c| valuation(c, self.prime).finite())
            .min()
            .map(|v| -v)
    }

    /// `|x|_p = max_i |x_i|_p`.
    pub fn norm(&self) -> Rational {
        match self.norm_exponent() {
            None => Rational::zero(),
            Some(e) => pow_p(self.prime.get(), e),
        }
    }

    pub fn add(&self, other: &PAdicPoint) -> PAdicPoint {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PAdicPoint) -> PAdicPoint {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> PAdicPoint {
        self.map(|a| -a)
    }

    /// Multiplies every coordinate by `p^j`.
    pub fn scale_pow(&self, j: i64) -> PAdicPoint {
        let s = pow_p(self.prime.get(), j);
        self.map(|a| a * &s)
    }

    pub fn scale(&self, s: &Rational) -> PAdicPoint {
        self.map(|a| a * s)
    }

    pub(crate) fn map(&self, f: impl Fn(&Rational) -> Rational) -> PAdicPoint {
        PAdicPoint {
            prime: self.prime,
            coords: self.coords.iter().map(f).collect(),
        }
    }

    fn zip_with(&self, other: &PAdicPoint, f: impl Fn(&Rational, &Rational) -> Rational) -> PAdicPoint {
        debug_assert_eq!(self.coords.len(), other.coords.len());
        PAdicPoint {
            prime: self.prime,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// `log_p |x - y|_p`, or `None` when the points coincide.
    pub fn distance_exponent(&self, other: &PAdicPoint) -> Option<i64> {
        self.sub(other).norm_exponent()
    }

    pub(crate) fn check_context(&self, ctx: Context) -> Result<()> {
        ctx.check(self.prime, self.coords.len())
    }

    pub fn render(&self) -> String {
        let mut s = String::from("(");
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            s.push_str(&render(c));
        }
        s.push(')');
        s
    }
}

impl fmt::Display for PAdicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, ratio};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&rat(0), p(5)), Valuation::Infinite);
        assert_eq!(valuation(&rat(6), p(2)), Valuation::Finite(1));
        assert_eq!(valuation(&ratio(9, 10), p(3)), Valuation::Finite(2));
        assert_eq!(valuation(&ratio(5, 12), p(2)), Valuation::Finite(-2));
        assert!(Valuation::Finite(i64::MAX) < Valuation::Infinite);
    }

    #[test]
    fn norm_examples() {
        let c3 = Context::new(3, 2).unwrap();
        let x = PAdicPoint::in_context(c3, alloc::vec![ratio(1, 3), rat(9)]).unwrap();
        assert_eq!(x.norm(), rat(3));
        let c2 = Context::new(2, 1).unwrap();
        assert_eq!(PAdicPoint::zero(c2).norm(), rat(0));
        let c22 = Context::new(2, 2).unwrap();
        assert_eq!(PAdicPoint::from_ints(c22, &[6, 5]).unwrap().norm(), rat(1));
    }

    #[test]
    fn fractional_part_examples() {
        assert_eq!(fractional_part(&ratio(1, 2), p(2)), ratio(1, 2));
        assert_eq!(fractional_part(&ratio(-1, 2), p(2)), ratio(1, 2));
        assert_eq!(fractional_part(&ratio(1, 3), p(2)), rat(0));
        // 1/6 = (1/2)(1/3); 1/3 ≡ 1 mod 2
        assert_eq!(fractional_part(&ratio(1, 6), p(2)), ratio(1, 2));
        // -1/9 in Q_3: -1 ≡ 8 mod 9
        assert_eq!(fractional_part(&ratio(-1, 9), p(3)), ratio(8, 9));
    }

    #[test]
    fn canonical_coordinates() {
        // B_{-2}(7) in Q_2: 7 mod 4 = 3
        assert_eq!(canonical_coord(&rat(7), -2, p(2)), rat(3));
        // level 0: everything in Z_2 collapses to 0
        assert_eq!(canonical_coord(&rat(7), 0, p(2)), rat(0));
        // level 1 keeps digits below 2^{-1}: 3/4 mod 1/2 = 1/4
        assert_eq!(canonical_coord(&ratio(3, 4), 1, p(2)), ratio(1, 4));
        assert_eq!(canonical_coord(&rat(-1), -3, p(3)), rat(26));
    }
}
