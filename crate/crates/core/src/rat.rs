//! Exact rational scalars shared by every module.

use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::str::FromStr;

pub use num::bigint::BigInt;

/// Exact rational number, always stored in lowest terms with positive
/// denominator.
pub type Rat = BigRational;

/// Parses `["-"] digits ["/" digits]` into a rational in lowest terms.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let (num_s, den_s) = match rest.split_once('/') {
        Some((n, d)) => (n, d),
        None => (rest, "1"),
    };
    if num_s.is_empty() || den_s.is_empty() || !num_s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("invalid rational `{s}`"));
    }
    let num = BigInt::from_str(num_s).map_err(|e| e.to_string())?;
    let den = BigInt::from_str(den_s).map_err(|e| e.to_string())?;
    if den.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    let r = Rat::new(num, den);
    Ok(if neg { -r } else { r })
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Midpoint of two rationals.
pub fn midpoint(a: &Rat, b: &Rat) -> Rat {
    (a + b) / rat_int(2)
}

/// `n choose k` as a big integer; zero for `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num::integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Formats a rational as `p`, `p/q` or `-p/q`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else if r.is_negative() {
        format!("-{}/{}", r.numer().abs(), r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
