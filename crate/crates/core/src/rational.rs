//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q` in lowest terms. Panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn from_bigint(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Parses `"p"` or `"p/q"`; the result is normalized.
pub fn parse(text: &str) -> Option<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    let r = Rational::from_str(t).ok()?;
    Some(r)
}

/// `p/q` rendering, `p` for integers.
pub fn render(q: &Rational) -> String {
    q.to_string()
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Decimal rendering rounded half away from zero to `digits` places, with
/// trailing zeros trimmed. Display only.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    let neg = q.is_negative();
    let num = q.numer().abs();
    let den = q.denom().clone();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = num * &scale;
    let (mut quot, rem) = scaled.div_rem(&den);
    if rem * 2 >= den {
        quot += 1;
    }
    let (int_part, frac_part) = quot.div_rem(&scale);
    let mut frac = format!("{:0>width$}", frac_part.to_string(), width = digits);
    while frac.ends_with('0') {
        frac.pop();
    }
    let sign = if neg && !(int_part.is_zero() && frac.is_empty()) { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn min_of<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> Option<Rational> {
    it.into_iter().min().cloned()
}
