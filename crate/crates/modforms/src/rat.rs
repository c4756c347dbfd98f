//! Small helpers for building and (de)serializing exact rationals.
//!
//! Rationals cross the crate boundary as `"num/den"` strings in lowest terms,
//! with a bare `"7"` allowed for integers.

use num_bigint::BigInt;
use num_traits::One;
use std::str::FromStr;

use crate::{Error, Rational, Result};

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn rat_i(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Binomial coefficient `C(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Formats a rational as `"num/den"` in lowest terms, or just `"num"` when
/// the denominator is 1.
pub fn rat_to_str(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"num/den"` (or a bare integer) into a rational.
pub fn rat_from_str(s: &str) -> Result<Rational> {
    let bad = |msg: &str| Error::BadInput(format!("cannot parse rational `{s}`: {msg}"));
    match s.split_once('/') {
        None => {
            let n = BigInt::from_str(s.trim()).map_err(|_| bad("invalid integer"))?;
            Ok(Rational::from(n))
        }
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad("invalid numerator"))?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad("invalid denominator"))?;
            if d == BigInt::from(0) {
                return Err(bad("zero denominator"));
            }
            Ok(Rational::new(n, d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["7", "-24", "1/3", "-691/2730"] {
            assert_eq!(rat_to_str(&rat_from_str(s).unwrap()), s);
        }
        // non-lowest-terms input normalizes
        assert_eq!(rat_to_str(&rat_from_str("4/6").unwrap()), "2/3");
        assert_eq!(rat_to_str(&rat_from_str("8/2").unwrap()), "4");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(10, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(binomial(52, 26).to_string(), "495918532948104");
    }
}
