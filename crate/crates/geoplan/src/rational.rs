//! Exact rational millisecond values.
//!
//! RTTs and latencies are kept as exact rationals end to end so that
//! bound-meeting checks are equality tests, not tolerance comparisons.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde_json::Value;

use crate::Error;

/// Exact rational number of milliseconds.
pub type Rat = Ratio<i128>;

pub fn rat(n: i128) -> Rat {
    Rat::from_integer(n)
}

/// Parses a rational from its JSON representation: an integer, a float,
/// a decimal string like `"12.5"`, or a fraction string like `"1833/24"`.
pub fn rat_from_json(v: &Value) -> Result<Rat, Error> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(rat(i as i128))
            } else if let Some(f) = n.as_f64() {
                rat_from_decimal(&format!("{f}"))
            } else {
                Err(Error::Parse(format!("unrepresentable number {n}")))
            }
        }
        Value::String(s) => parse_rat(s),
        other => Err(Error::Parse(format!("expected number or string, got {other}"))),
    }
}

/// Parses `"p/q"`, `"12.5"`, or `"42"`.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: i128 = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let den: i128 = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rat::new(num, den))
    } else {
        rat_from_decimal(s)
    }
}

fn rat_from_decimal(s: &str) -> Result<Rat, Error> {
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i128, rest),
        None => (1i128, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("empty number {s:?}")));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || frac_part.len() > 30
        || int_part.len() > 30
    {
        return Err(Error::Parse(format!("bad decimal {s:?}")));
    }
    let mut num: i128 = 0;
    for c in int_part.chars().chain(frac_part.chars()) {
        num = num
            .checked_mul(10)
            .and_then(|n| n.checked_add((c as u8 - b'0') as i128))
            .ok_or_else(|| Error::Parse(format!("decimal overflow in {s:?}")))?;
    }
    let den = 10i128
        .checked_pow(frac_part.len() as u32)
        .ok_or_else(|| Error::Parse(format!("decimal overflow in {s:?}")))?;
    Ok(Rat::new(sign * num, den))
}

/// Renders a rational as JSON: an integer when exact, else a `"p/q"` string.
pub fn rat_to_json(r: &Rat) -> Value {
    if r.is_integer() {
        if let Ok(i) = i64::try_from(*r.numer()) {
            return Value::from(i);
        }
    }
    Value::from(format!("{}/{}", r.numer(), r.denom()))
}

/// Dual rendering: exact fraction plus a 2-decimal approximation.
pub fn rat_display(r: &Rat) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{} (~{:.2})", r.numer(), r.denom(), rat_to_f64(r))
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn is_nonnegative(r: &Rat) -> bool {
    !r.is_negative() || r.is_zero()
}
