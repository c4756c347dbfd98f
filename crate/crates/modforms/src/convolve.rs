//! Exact truncated convolution of coefficient vectors.
//!
//! Small products go through schoolbook multiplication; larger ones pack each
//! vector into a single big integer (Kronecker substitution), do one big
//! multiply, and unpack. Both paths produce bit-identical results.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Rational;

/// `out[k] = Σ_{i+j=k} a[i]·b[j]` for `k < out_len`, zero-padded.
pub fn convolve(a: &[BigInt], b: &[BigInt], out_len: usize) -> Vec<BigInt> {
    // Indices ≥ out_len can only feed output indices ≥ out_len.
    let a = &a[..a.len().min(out_len)];
    let b = &b[..b.len().min(out_len)];
    if a.is_empty() || b.is_empty() {
        return vec![BigInt::zero(); out_len];
    }
    if a.len().min(b.len()) <= 32 || out_len <= 256 {
        schoolbook(a, b, out_len)
    } else {
        kronecker_mul(a, b, out_len)
    }
}

fn schoolbook(a: &[BigInt], b: &[BigInt], out_len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); out_len];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(out_len.saturating_sub(i)) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Kronecker substitution: evaluate both polynomials at `x = 2^B` with `B`
/// wide enough that output coefficients occupy disjoint bit slots (in
/// balanced form, since coefficients may be negative), multiply once, and
/// read the slots back.
fn kronecker_mul(a: &[BigInt], b: &[BigInt], out_len: usize) -> Vec<BigInt> {
    let max_bits = |v: &[BigInt]| v.iter().map(|x| x.bits()).max().unwrap_or(0);
    let (abits, bbits) = (max_bits(a), max_bits(b));
    if abits == 0 || bbits == 0 {
        return vec![BigInt::zero(); out_len];
    }
    // |slot| ≤ nterms · maxA · maxB < 2^(abits + bbits + nbits); one more bit
    // for the balanced sign, one for slack, rounded to a limb multiple.
    let nbits = 64 - (a.len().min(b.len()) as u64).leading_zeros() as u64;
    let slot = (abits + bbits + nbits + 2).next_multiple_of(64);
    let pack = |v: &[BigInt]| {
        let mut acc = BigInt::zero();
        for x in v.iter().rev() {
            acc = (acc << slot) + x;
        }
        acc
    };
    let prod = pack(a) * pack(b);
    // Read the slots back in one pass over the limbs; repeatedly dividing
    // `prod` by 2^slot would be quadratic in the output length and dominate
    // the entire multiplication for long series. Masking first makes the low
    // slots two's-complement exact even when `prod` is negative; the
    // balanced lift then walks a single carry up the chain (a slot lifted
    // negative hands +1 to the one above it).
    let mask = (BigInt::one() << (slot * out_len as u64)) - BigInt::one();
    let digits = (prod & mask).to_u64_digits().1;
    let w = (slot / 64) as usize;
    let half = BigUint::one() << (slot - 1);
    let modulus = BigUint::one() << slot;
    let mut out = Vec::with_capacity(out_len);
    let mut carry = false;
    for k in 0..out_len {
        let lo = (k * w).min(digits.len());
        let hi = (k * w + w).min(digits.len());
        let bytes: Vec<u8> = digits[lo..hi].iter().flat_map(|d| d.to_le_bytes()).collect();
        let mut v = BigUint::from_bytes_le(&bytes);
        if carry {
            v += 1u32;
        }
        if v >= half {
            out.push(BigInt::from(v) - BigInt::from(modulus.clone()));
            carry = true;
        } else {
            out.push(BigInt::from(v));
            carry = false;
        }
    }
    out
}

/// Truncated convolution over exact rationals: clears each side's
/// denominators, convolves the integer vectors, and divides back out.
pub fn convolve_rat(a: &[Rational], b: &[Rational], out_len: usize) -> Vec<Rational> {
    let a = &a[..a.len().min(out_len)];
    let b = &b[..b.len().min(out_len)];
    let common_den = |v: &[Rational]| {
        v.iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    };
    let scale = |v: &[Rational], den: &BigInt| -> Vec<BigInt> {
        v.iter().map(|x| x.numer() * (den / x.denom())).collect()
    };
    let (da, db) = (common_den(a), common_den(b));
    let ints = convolve(&scale(a, &da), &scale(b, &db), out_len);
    let den = da * db;
    ints.into_iter()
        .map(|n| Rational::new(n, den.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rat_i};

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn schoolbook_basics() {
        let out = convolve(&big(&[1, 2]), &big(&[3, 4]), 4);
        assert_eq!(out, big(&[3, 10, 8, 0]));
        let out = convolve(&big(&[1, -1]), &big(&[1, 1, 1, 1]), 4);
        assert_eq!(out, big(&[1, 0, 0, 0]));
    }

    #[test]
    fn truncation_ignores_high_terms() {
        let out = convolve(&big(&[0, 0, 0, 7]), &big(&[0, 0, 0, 7]), 3);
        assert_eq!(out, big(&[0, 0, 0]));
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        // Signed, irregular inputs long enough to take the packed path.
        let a: Vec<BigInt> = (0..300)
            .map(|i: i64| BigInt::from((i * i * 7919 % 2003) - 1001))
            .collect();
        let b: Vec<BigInt> = (0..300)
            .map(|i: i64| BigInt::from((i * 104729 % 4001) - 2000) * BigInt::from(i % 17))
            .collect();
        assert_eq!(kronecker_mul(&a, &b, 599), schoolbook(&a, &b, 599));
        assert_eq!(kronecker_mul(&a, &b, 40), schoolbook(&a, &b, 40));
    }

    #[test]
    fn rational_convolution() {
        let a = [rat(1, 2), rat(1, 3)];
        let b = [rat(1, 5), rat_i(2)];
        let out = convolve_rat(&a, &b, 3);
        assert_eq!(out, vec![rat(1, 10), rat(16, 15), rat(2, 3)]);
    }
}
