//! Scalar abstraction for weights, capacities and profits.
//!
//! Solvers are generic over [`Scalar`]. Exact rationals are the default
//! everywhere capacity comparisons feed an oracle check; `f64`/`f32` work
//! for callers that accept rounding.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, ToPrimitive};

use crate::error::{Error, Result};

/// Numeric type usable as an item weight, capacity or profit.
pub trait Scalar:
    Num + Copy + PartialOrd + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `⌈self⌉` as a count; negative values clamp to zero.
    fn ceil_to_usize(self) -> usize;

    /// Parses a decimal (`0.55`), integer or `p/q` literal.
    fn parse_literal(text: &str) -> Result<Self>;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

/// Sums an iterator of scalars, returning zero for an empty iterator.
pub fn sum<S: Scalar, I: IntoIterator<Item = S>>(values: I) -> S {
    values.into_iter().fold(S::zero(), |acc, v| acc + v)
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn ceil_to_usize(self) -> usize {
                if self <= 0.0 {
                    0
                } else {
                    self.ceil() as usize
                }
            }

            fn parse_literal(text: &str) -> Result<Self> {
                let text = text.trim();
                if let Some((p, q)) = text.split_once('/') {
                    let p: $t = p.trim().parse().map_err(|_| bad_literal(text))?;
                    let q: $t = q.trim().parse().map_err(|_| bad_literal(text))?;
                    if q == 0.0 {
                        return Err(bad_literal(text));
                    }
                    return Ok(p / q);
                }
                text.parse().map_err(|_| bad_literal(text))
            }
        }
    };
}

impl_float_scalar!(f64);
impl_float_scalar!(f32);

macro_rules! impl_ratio_scalar {
    ($t:ty) => {
        impl Scalar for Ratio<$t> {
            fn ceil_to_usize(self) -> usize {
                let c = self.ceil().to_integer();
                if c <= 0 {
                    0
                } else {
                    c as usize
                }
            }

            fn parse_literal(text: &str) -> Result<Self> {
                let text = text.trim();
                if let Some((p, q)) = text.split_once('/') {
                    let p = parse_decimal::<$t>(p.trim()).ok_or_else(|| bad_literal(text))?;
                    let q = parse_decimal::<$t>(q.trim()).ok_or_else(|| bad_literal(text))?;
                    if q == Ratio::from_integer(0) {
                        return Err(bad_literal(text));
                    }
                    return Ok(p / q);
                }
                parse_decimal::<$t>(text).ok_or_else(|| bad_literal(text))
            }
        }
    };
}

impl_ratio_scalar!(i64);
impl_ratio_scalar!(i128);

fn bad_literal(text: &str) -> Error {
    Error::Parse(format!("not a numeric literal: {text:?}"))
}

/// Exact decimal parse: `-12.375`, `3`, `1e-2`, `2.5E3`.
fn parse_decimal<T>(text: &str) -> Option<Ratio<T>>
where
    T: num_integer::Integer + Clone + FromPrimitive + num_traits::CheckedMul + num_traits::CheckedAdd,
{
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let ten = T::from_u32(10)?;
    let mut numer = T::zero();
    for ch in int_part.chars().chain(frac_part.chars()) {
        let d = T::from_u32(ch.to_digit(10)?)?;
        numer = numer.checked_mul(&ten)?.checked_add(&d)?;
    }
    let scale = exponent - frac_part.len() as i32;
    let mut denom = T::one();
    if scale >= 0 {
        for _ in 0..scale {
            numer = numer.checked_mul(&ten)?;
        }
    } else {
        for _ in 0..(-scale) {
            denom = denom.checked_mul(&ten)?;
        }
    }
    if negative {
        numer = T::zero() - numer;
    }
    Some(Ratio::new(numer, denom))
}

/// Formats a rational as an exact decimal when its denominator has only the
/// prime factors 2 and 5, otherwise as `p/q`.
pub fn format_rational(value: &Ratio<i64>) -> String {
    let (numer, denom) = (*value.numer(), *value.denom());
    if denom == 1 {
        return numer.to_string();
    }
    let mut d = denom;
    let (mut twos, mut fives) = (0u32, 0u32);
    while d % 2 == 0 {
        d /= 2;
        twos += 1;
    }
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    if d != 1 {
        return format!("{numer}/{denom}");
    }
    let places = twos.max(fives);
    // numer/denom = numer * (10^places / denom) / 10^places
    let factor = 10i128.pow(places) / denom as i128;
    let scaled = numer as i128 * factor;
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.unsigned_abs();
    let pow = 10u128.pow(places);
    let frac = format!("{:0width$}", abs % pow, width = places as usize);
    format!("{sign}{}.{}", abs / pow, frac.trim_end_matches('0'))
}
