//! Coefficient fields: exact rationals and `f64`.

use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// How coefficients are stored and compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientMode {
    /// Exact rationals; every sign decision is exact.
    Rational,
    /// IEEE doubles; sign decisions use scaled tolerances.
    Float,
}

/// A field of coefficients the crate can compute over.
///
/// Implemented for [`Rational`] (exact) and `f64` (floating point). Algorithms
/// branch on [`Scalar::EXACT`] where an exact comparison and a tolerance-based
/// comparison differ.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    const EXACT: bool;

    fn mode() -> CoefficientMode;

    fn from_i64(v: i64) -> Self;

    /// Exact conversion of a finite double (every double is a dyadic rational).
    fn from_f64(v: f64) -> Option<Self>;

    /// Conversion of a random sample. Exact fields round to a 2^-20 grid so
    /// that big-integer sizes stay small; floats pass through.
    fn from_sample(v: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    /// Exact rational value (`None` for non-finite floats).
    fn to_rational(&self) -> Option<Rational>;

    /// Nearest representable value of a rational.
    fn from_rational(value: &Rational) -> Self;

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }

    fn factorial(k: usize) -> Self {
        (1..=k).fold(Self::one(), |acc, i| acc * Self::from_usize(i))
    }
}

const SAMPLE_GRID: f64 = (1u64 << 20) as f64;

impl Scalar for Rational {
    const EXACT: bool = true;

    fn mode() -> CoefficientMode {
        CoefficientMode::Rational
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }

    fn from_sample(v: f64) -> Self {
        let scaled = libm::round(v * SAMPLE_GRID);
        BigRational::new(BigInt::from(scaled as i64), BigInt::from(1i64 << 20))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn from_rational(value: &Rational) -> Self {
        value.clone()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn mode() -> CoefficientMode {
        CoefficientMode::Float
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn from_sample(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        libm::fabs(*self)
    }

    fn to_rational(&self) -> Option<Rational> {
        BigRational::from_float(*self)
    }

    fn from_rational(value: &Rational) -> Self {
        ToPrimitive::to_f64(value).unwrap_or(f64::NAN)
    }
}

/// Parses `"p/q"`, an integer, or a decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Ok(int) = text.parse::<BigInt>() {
        return Some(BigRational::from_integer(int));
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Option<Rational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let mut digits = alloc::string::String::with_capacity(int_part.len() + frac_part.len());
    digits.push_str(int_part);
    digits.push_str(frac_part);
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let power = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value = value * power;
    } else {
        value = value / power;
    }
    Some(if negative { -value } else { value })
}

/// Formats a rational as `"p/q"` (denominator always present).
pub fn format_rational(value: &Rational) -> alloc::string::String {
    alloc::format!("{}/{}", value.numer(), value.denom())
}

/// Simplest rational (smallest denominator) in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    // Continued-fraction descent for 0 < lo <= hi.
    let floor = lo.floor();
    if floor < *lo {
        if floor.clone() + Rational::one() <= *hi {
            return floor + Rational::one();
        }
    } else {
        return floor;
    }
    let frac_lo = lo.clone() - floor.clone();
    let frac_hi = hi.clone() - floor.clone();
    let inner = simplest_between(&frac_hi.recip(), &frac_lo.recip());
    floor + inner.recip()
}
