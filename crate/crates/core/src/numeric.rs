//! Exact rationals, mixed exact/float reals and compensated summation.

use alloc::format;
use alloc::string::String;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision reduced fraction with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `p^e` as an exact rational; `e` may be negative.
pub fn pow_p(p: u32, e: i64) -> Rational {
    let base = BigInt::from(p);
    let mag = num_traits::pow(base, e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Renders as `num/den`, always with the denominator.
pub fn render(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"n"`, `"-n"`, or `"n/d"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::param("rational", format!("cannot parse {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::param("rational", format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Returns `Some(k)` if `x` is an integer fitting in `i64`.
pub fn as_integer(x: &Rational) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

/// `|v|^q` for rational `v` and rational `q >= 0`, exact when `q` is an integer.
pub fn abs_pow(v: &Rational, q: &Rational) -> Real {
    let a = v.abs();
    match as_integer(q) {
        Some(k) if (0..=64).contains(&k) => Real::Exact(num_traits::pow(a, k as usize)),
        _ => Real::Approx(libm::pow(to_f64(&a), to_f64(q))),
    }
}

/// `p^e` for rational `e`: exact when `e` is an integer.
pub fn pow_p_real(p: u32, e: &Rational) -> Real {
    match as_integer(e) {
        Some(k) if k.abs() <= 4096 => Real::Exact(pow_p(p, k)),
        _ => Real::Approx(libm::pow(p as f64, to_f64(e))),
    }
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// A value that stays exact as long as every input is exact.
#[derive(Debug, Clone, PartialEq)]
pub enum Real {
    Exact(Rational),
    Approx(f64),
}

impl Real {
    pub fn zero() -> Self {
        Real::Exact(Rational::zero())
    }

    pub fn one() -> Self {
        Real::Exact(Rational::one())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => to_f64(r),
            Real::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Real::Exact(r) => Some(r),
            Real::Approx(_) => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_positive(),
            Real::Approx(x) => *x > 0.0,
        }
    }

    pub fn abs(&self) -> Real {
        match self {
            Real::Exact(r) => Real::Exact(r.abs()),
            Real::Approx(x) => Real::Approx(x.abs()),
        }
    }

    pub fn powi(&self, k: u32) -> Real {
        match self {
            Real::Exact(r) => Real::Exact(num_traits::pow(r.clone(), k as usize)),
            Real::Approx(x) => Real::Approx(libm::pow(*x, k as f64)),
        }
    }

    /// Real `q`-th root of a nonnegative value.
    pub fn root(&self, q: &Rational) -> f64 {
        let x = self.to_f64();
        if q.is_one() {
            x
        } else {
            libm::pow(x, 1.0 / to_f64(q))
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) => write!(f, "{}", render(r)),
            Real::Approx(x) => write!(f, "{x:.16e}"),
        }
    }
}

impl From<Rational> for Real {
    fn from(r: Rational) -> Self {
        Real::Exact(r)
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                match (self, rhs) {
                    (Real::Exact(a), Real::Exact(b)) => Real::Exact(a $op b),
                    (a, b) => Real::Approx(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl<'a> $tr<&'a Real> for &'a Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                match (self, rhs) {
                    (Real::Exact(a), Real::Exact(b)) => Real::Exact(a $op b),
                    (a, b) => Real::Approx(a.to_f64() $op b.to_f64()),
                }
            }
        }
    };
}

real_binop!(Add, add, +);
real_binop!(Sub, sub, -);
real_binop!(Mul, mul, *);
real_binop!(Div, div, /);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        match self {
            Real::Exact(r) => Real::Exact(-r),
            Real::Approx(x) => Real::Approx(-x),
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Unevaluated sum `hi + lo` carrying about 106 bits of significand.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = libm::fma(a, b, -p);
    (p, err)
}

impl DoubleDouble {
    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    /// Correctly splits an exact rational into hi + lo.
    pub fn from_rational(x: &Rational) -> Self {
        let hi = to_f64(x);
        if !hi.is_finite() || hi == 0.0 {
            return DoubleDouble::from_f64(hi);
        }
        let rem = x - float_to_rational(hi);
        DoubleDouble { hi, lo: to_f64(&rem) }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl core::ops::Add for DoubleDouble {
    type Output = DoubleDouble;

    fn add(self, o: DoubleDouble) -> DoubleDouble {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        DoubleDouble { hi, lo }
    }
}

impl core::ops::Mul for DoubleDouble {
    type Output = DoubleDouble;

    fn mul(self, o: DoubleDouble) -> DoubleDouble {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

/// Exact rational value of a finite float.
pub fn float_to_rational(x: f64) -> Rational {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let m = Rational::from_integer(BigInt::from(mant) * BigInt::from(sign));
    m * pow_p(2, e)
}

/// `p^x` for real `x` as a double-double, using `p^x = p^k * p^f` with integer `k`
/// exact and a short fractional power.
pub fn pow_p_dd(p: u32, x: f64) -> DoubleDouble {
    let k = libm::floor(x);
    let f = x - k;
    let ipart = DoubleDouble::from_rational(&pow_p(p, k as i64));
    ipart * DoubleDouble::from_f64(libm::pow(p as f64, f))
}

/// True when `a <= b * (1 + rel) + abs`.
pub fn le_with_slack(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    a <= b * (1.0 + rel) + abs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_are_exact() {
        assert_eq!(pow_p(5, -2), ratio(1, 25));
        assert_eq!(pow_p(3, 2), rat(9));
        assert_eq!(pow_p(7, 0), rat(1));
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), rat(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(render(&rat(3)), "3/1");
        assert_eq!(render(&ratio(-1, 4)), "-1/4");
    }

    #[test]
    fn real_stays_exact() {
        let a = Real::Exact(ratio(1, 3));
        let b = Real::Exact(ratio(1, 6));
        assert_eq!(a.clone() + b, Real::Exact(ratio(1, 2)));
        assert!(matches!(a + Real::Approx(0.5), Real::Approx(_)));
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let mut s = CompensatedSum::new();
        for x in [1e16, 1.0, -1e16, 1.0] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn float_roundtrip() {
        for x in [0.1, -3.5, 1e-300, 12345.678] {
            assert_eq!(to_f64(&float_to_rational(x)), x);
        }
    }

    #[test]
    fn double_double_rational_split() {
        let third = DoubleDouble::from_rational(&ratio(1, 3));
        let three = DoubleDouble::from_f64(3.0);
        let one = third * three;
        assert!((one.hi - 1.0).abs() < 1e-15 && (one.to_f64() - 1.0).abs() < 1e-30);
    }
}
