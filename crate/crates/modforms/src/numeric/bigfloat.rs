//! Fixed-point arbitrary-precision reals and complexes.
//!
//! A [`BigFloat`] stores `mant / 2^bits`. Every value participating in a
//! computation carries the same `bits`, derived once from an
//! [`EvalContext`]; mixing scales is a programming error and asserts.
//! The scale includes a generous guard beyond the requested decimal
//! precision, so plain truncating arithmetic is accurate enough for every
//! tolerance the crate checks (each check states its tolerance explicitly).

use crate::{Error, Rational, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

const GUARD_BITS: u32 = 96;
const LOG2_10: f64 = 3.321928094887362;
const LOG10_2: f64 = 0.301029995663981;

/// Precision settings shared by all evaluation routines.
///
/// `precision_digits` is the number of decimal digits the caller wants to
/// trust; the working binary scale adds guard bits on top. Contexts are
/// immutable: doubling the precision means building a new context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalContext {
    pub precision_digits: u32,
    bits: u32,
}

impl EvalContext {
    /// A context carrying `precision_digits` trusted decimal digits
    /// (at least 15).
    pub fn new(precision_digits: u32) -> Result<Self> {
        if precision_digits < 15 {
            return Err(Error::BadInput(format!(
                "precision_digits must be at least 15, got {precision_digits}"
            )));
        }
        let bits = (precision_digits as f64 * LOG2_10).ceil() as u32 + GUARD_BITS;
        Ok(EvalContext { precision_digits, bits })
    }

    pub(crate) fn bits(self) -> u32 {
        self.bits
    }
}

impl Default for EvalContext {
    /// 38 decimal digits.
    fn default() -> Self {
        EvalContext::new(38).expect("38 >= 15")
    }
}

/// Fixed-point real number `mant / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFloat {
    mant: BigInt,
    bits: u32,
}

fn pow10(e: u32) -> BigUint {
    BigUint::from(10u32).pow(e)
}

impl BigFloat {
    pub(crate) fn zero_b(bits: u32) -> Self {
        BigFloat { mant: BigInt::zero(), bits }
    }

    pub(crate) fn int_b(v: i64, bits: u32) -> Self {
        BigFloat { mant: BigInt::from(v) << bits as usize, bits }
    }

    pub(crate) fn from_rat_b(r: &Rational, bits: u32) -> Self {
        BigFloat { mant: (r.numer() << bits as usize) / r.denom(), bits }
    }

    pub fn zero(ctx: &EvalContext) -> Self {
        Self::zero_b(ctx.bits())
    }

    pub fn one(ctx: &EvalContext) -> Self {
        Self::int_b(1, ctx.bits())
    }

    pub fn from_i64(v: i64, ctx: &EvalContext) -> Self {
        Self::int_b(v, ctx.bits())
    }

    pub fn from_bigint(v: &BigInt, ctx: &EvalContext) -> Self {
        BigFloat { mant: v << ctx.bits() as usize, bits: ctx.bits() }
    }

    pub fn from_rat(r: &Rational, ctx: &EvalContext) -> Self {
        Self::from_rat_b(r, ctx.bits())
    }

    /// Exact dyadic conversion; rejects NaN and infinities.
    pub fn from_f64(v: f64, ctx: &EvalContext) -> Result<Self> {
        let r = Rational::from_float(v)
            .ok_or_else(|| Error::BadInput(format!("{v} is not a finite number")))?;
        Ok(Self::from_rat(&r, ctx))
    }

    pub(crate) fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), bits: self.bits }
    }

    pub fn half(&self) -> Self {
        BigFloat { mant: &self.mant >> 1usize, bits: self.bits }
    }

    pub fn mul_i64(&self, v: i64) -> Self {
        BigFloat { mant: &self.mant * v, bits: self.bits }
    }

    pub fn div_i64(&self, v: i64) -> Self {
        assert!(v != 0, "division by zero");
        BigFloat { mant: &self.mant / v, bits: self.bits }
    }

    pub fn mul_int(&self, v: &BigInt) -> Self {
        BigFloat { mant: &self.mant * v, bits: self.bits }
    }

    pub fn mul_rat(&self, r: &Rational) -> Self {
        BigFloat { mant: &self.mant * r.numer() / r.denom(), bits: self.bits }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.mant.is_zero(), "division by zero");
        BigFloat { mant: (BigInt::one() << 2 * self.bits as usize) / &self.mant, bits: self.bits }
    }

    /// Floor square root; the argument must be nonnegative.
    pub fn sqrt(&self) -> Self {
        assert!(!self.mant.is_negative(), "sqrt of a negative value");
        BigFloat { mant: (&self.mant << self.bits as usize).sqrt(), bits: self.bits }
    }

    /// Real cube root (sign-preserving).
    pub fn cbrt(&self) -> Self {
        BigFloat { mant: (&self.mant << 2 * self.bits as usize).cbrt(), bits: self.bits }
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Self::int_b(1, self.bits);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Best-effort `f64` approximation (diagnostics only); underflows to 0
    /// and overflows to infinity.
    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let mag = self.mant.magnitude();
        let bl = mag.bits();
        let take = bl.min(53);
        let top = (mag >> (bl - take) as usize).to_u64().expect("<= 53 bits") as f64;
        let e = (bl - take) as i64 - self.bits as i64;
        let v = top * 2f64.powi(e.clamp(-1100, 1100) as i32);
        if self.mant.is_negative() {
            -v
        } else {
            v
        }
    }

    /// `|self| < 10^e`.
    pub fn abs_lt_pow10(&self, e: i64) -> bool {
        let a = self.mant.magnitude().clone();
        if e >= 0 {
            a < pow10(e as u32) << self.bits as usize
        } else {
            a * pow10((-e) as u32) < BigUint::one() << self.bits as usize
        }
    }

    /// `|self| > 10^e`.
    pub fn abs_gt_pow10(&self, e: i64) -> bool {
        let a = self.mant.magnitude().clone();
        if e >= 0 {
            a > pow10(e as u32) << self.bits as usize
        } else {
            a * pow10((-e) as u32) > BigUint::one() << self.bits as usize
        }
    }

    /// Fixed-point decimal string with exactly `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let a = self.mant.magnitude();
        let half = BigUint::one() << (self.bits - 1) as usize;
        let scaled = (a * pow10(digits) + half) >> self.bits as usize;
        let (ip, fp) = scaled.div_rem(&pow10(digits));
        let sign = if self.mant.is_negative() && !scaled.is_zero() { "-" } else { "" };
        let frac = fp.to_string();
        format!("{sign}{ip}.{}{frac}", "0".repeat(digits as usize - frac.len()))
    }

    /// Scientific-notation string with `sig` significant digits.
    pub fn to_sci(&self, sig: u32) -> String {
        assert!(sig >= 1);
        if self.mant.is_zero() {
            return "0".into();
        }
        let a = self.mant.magnitude();
        let bl = a.bits() as i64;
        let mut e10 = ((bl - 1 - self.bits as i64) as f64 * LOG10_2).floor() as i64;
        for _ in 0..4 {
            let p = sig as i64 - 1 - e10;
            let t = if p >= 0 {
                let half = BigUint::one() << (self.bits - 1) as usize;
                (a * pow10(p as u32) + half) >> self.bits as usize
            } else {
                let den = pow10((-p) as u32) << self.bits as usize;
                (a + (&den >> 1usize)) / den
            };
            let s = t.to_string();
            match (s.len() as i64) - sig as i64 {
                0 => {
                    let sign = if self.mant.is_negative() { "-" } else { "" };
                    let (head, tail) = s.split_at(1);
                    let mantissa =
                        if tail.is_empty() { head.to_string() } else { format!("{head}.{tail}") };
                    return format!("{sign}{mantissa}e{e10}");
                }
                d => e10 += d,
            }
        }
        unreachable!("scientific formatting did not settle");
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        assert_eq!(self.bits, other.bits, "mixed BigFloat scales");
        self.mant.partial_cmp(&other.mant)
    }
}

macro_rules! bf_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $trait<&BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                assert_eq!(self.bits, rhs.bits, "mixed BigFloat scales");
                let ($a, $b) = (self, rhs);
                BigFloat { mant: $body, bits: self.bits }
            }
        }
    };
}

bf_binop!(Add, add, |a, b| &a.mant + &b.mant);
bf_binop!(Sub, sub, |a, b| &a.mant - &b.mant);
bf_binop!(Mul, mul, |a, b| (&a.mant * &b.mant) >> a.bits as usize);
bf_binop!(Div, div, |a, b| {
    assert!(!b.mant.is_zero(), "division by zero");
    (&a.mant << a.bits as usize) / &b.mant
});

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat { mant: -&self.mant, bits: self.bits }
    }
}

/// π at the context scale, by Machin's formula
/// `π = 16·atan(1/5) − 4·atan(1/239)`.
pub fn pi(ctx: &EvalContext) -> BigFloat {
    pi_b(ctx.bits())
}

fn atan_inv(x: u64, bits: u32) -> BigInt {
    let x2 = BigInt::from(x) * x;
    let mut power = (BigInt::one() << bits as usize) / x;
    let mut acc = BigInt::zero();
    let mut j = 0u64;
    while !power.is_zero() {
        let term = &power / (2 * j + 1);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        power /= &x2;
        j += 1;
    }
    acc
}

pub(crate) fn pi_b(bits: u32) -> BigFloat {
    let wb = bits + 32;
    let m = atan_inv(5, wb) * 16 - atan_inv(239, wb) * 4;
    BigFloat { mant: m >> 32usize, bits }
}

/// `e^x` by argument halving and the Taylor series.
pub fn exp_real(x: &BigFloat) -> BigFloat {
    let bits = x.bits;
    if x.mant.is_zero() {
        return BigFloat::int_b(1, bits);
    }
    let mut m = x.mant.clone();
    let mut halvings = 0u32;
    while m.bits() + 4 > bits as u64 {
        m >>= 1usize;
        halvings += 1;
    }
    let mut acc = (BigInt::one() << bits as usize) + &m;
    let mut term = m.clone();
    let mut j = 2u64;
    loop {
        term = ((&term * &m) >> bits as usize) / j;
        if term.is_zero() {
            break;
        }
        acc += &term;
        j += 1;
    }
    for _ in 0..halvings {
        acc = (&acc * &acc) >> bits as usize;
    }
    BigFloat { mant: acc, bits }
}

/// Fixed-point complex number; both components share one scale.
#[derive(Clone, Debug, PartialEq)]
pub struct BigFloatC {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigFloatC {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        assert_eq!(re.bits, im.bits, "mixed BigFloat scales");
        BigFloatC { re, im }
    }

    pub fn zero(ctx: &EvalContext) -> Self {
        Self::new(BigFloat::zero(ctx), BigFloat::zero(ctx))
    }

    pub fn from_re(re: BigFloat) -> Self {
        let im = BigFloat::zero_b(re.bits);
        BigFloatC { re, im }
    }

    pub fn from_f64_pair(re: f64, im: f64, ctx: &EvalContext) -> Result<Self> {
        Ok(Self::new(BigFloat::from_f64(re, ctx)?, BigFloat::from_f64(im, ctx)?))
    }

    pub fn from_rat_pair(re: &Rational, im: &Rational, ctx: &EvalContext) -> Self {
        Self::new(BigFloat::from_rat(re, ctx), BigFloat::from_rat(im, ctx))
    }

    pub(crate) fn bits(&self) -> u32 {
        self.re.bits
    }

    /// Decimal digits this value's scale was derived from.
    pub fn precision_digits(&self) -> u32 {
        ((self.re.bits.saturating_sub(GUARD_BITS)) as f64 * LOG10_2).floor() as u32
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BigFloatC { re: self.re.clone(), im: -&self.im }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        BigFloatC { re: -&self.im, im: self.re.clone() }
    }

    pub fn mul_bf(&self, s: &BigFloat) -> Self {
        BigFloatC { re: &self.re * s, im: &self.im * s }
    }

    pub fn mul_i64(&self, v: i64) -> Self {
        BigFloatC { re: self.re.mul_i64(v), im: self.im.mul_i64(v) }
    }

    pub fn mul_rat(&self, r: &Rational) -> Self {
        BigFloatC { re: self.re.mul_rat(r), im: self.im.mul_rat(r) }
    }

    /// `|self|²` as a real.
    pub fn abs2(&self) -> BigFloat {
        let bits = self.bits();
        let m = (&self.re.mant * &self.re.mant + &self.im.mant * &self.im.mant) >> bits as usize;
        BigFloat { mant: m, bits }
    }

    pub fn abs(&self) -> BigFloat {
        self.abs2().sqrt()
    }

    pub fn recip(&self) -> Self {
        let den = self.abs2();
        assert!(!den.is_zero(), "division by zero");
        Self::new(&self.re / &den, &(-&self.im) / &den)
    }

    pub fn powi(&self, e: i64) -> Self {
        let bits = self.bits();
        let mut acc = Self::from_re(BigFloat::int_b(1, bits));
        let mut base = if e < 0 { self.recip() } else { self.clone() };
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `e^z` by argument halving and the Taylor series.
    pub fn exp(&self) -> Self {
        let bits = self.bits();
        if self.im.is_zero() {
            return Self::from_re(exp_real(&self.re));
        }
        let mut a = self.re.mant.clone();
        let mut b = self.im.mant.clone();
        let mut halvings = 0u32;
        while a.bits().max(b.bits()) + 4 > bits as u64 {
            a >>= 1usize;
            b >>= 1usize;
            halvings += 1;
        }
        let mut acc_re = (BigInt::one() << bits as usize) + &a;
        let mut acc_im = b.clone();
        let mut t_re = a.clone();
        let mut t_im = b.clone();
        let mut j = 2u64;
        loop {
            let n_re = ((&t_re * &a - &t_im * &b) >> bits as usize) / j;
            let n_im = ((&t_re * &b + &t_im * &a) >> bits as usize) / j;
            t_re = n_re;
            t_im = n_im;
            if t_re.is_zero() && t_im.is_zero() {
                break;
            }
            acc_re += &t_re;
            acc_im += &t_im;
            j += 1;
        }
        for _ in 0..halvings {
            let s_re = (&acc_re * &acc_re - &acc_im * &acc_im) >> bits as usize;
            let s_im = (&acc_re * &acc_im) >> (bits as usize - 1);
            acc_re = s_re;
            acc_im = s_im;
        }
        Self::new(BigFloat { mant: acc_re, bits }, BigFloat { mant: acc_im, bits })
    }

    /// Principal square root (`Re ≥ 0`; positive imaginary axis for
    /// negative reals).
    pub fn sqrt(&self) -> Self {
        let bits = self.bits();
        if self.im.is_zero() {
            return if self.re.is_negative() {
                Self::new(BigFloat::zero_b(bits), (-&self.re).sqrt())
            } else {
                Self::from_re(self.re.sqrt())
            };
        }
        let r = self.abs();
        if self.re.is_negative() {
            let v0 = (&r - &self.re).half().sqrt();
            let v = if self.im.is_negative() { -&v0 } else { v0 };
            let u = &self.im / &v.mul_i64(2);
            Self::new(u, v)
        } else {
            let u = (&r + &self.re).half().sqrt();
            let v = &self.im / &u.mul_i64(2);
            Self::new(u, v)
        }
    }

    /// `re ± im·i` with `digits` fractional digits per component.
    pub fn to_decimal(&self, digits: u32) -> String {
        let im_abs = self.im.abs().to_decimal(digits);
        let sign = if self.im.is_negative() { '-' } else { '+' };
        format!("{} {} {}i", self.re.to_decimal(digits), sign, im_abs)
    }
}

macro_rules! bfc_addsub {
    ($trait:ident, $method:ident) => {
        impl $trait<&BigFloatC> for &BigFloatC {
            type Output = BigFloatC;
            fn $method(self, rhs: &BigFloatC) -> BigFloatC {
                BigFloatC::new($trait::$method(&self.re, &rhs.re), $trait::$method(&self.im, &rhs.im))
            }
        }
    };
}

bfc_addsub!(Add, add);
bfc_addsub!(Sub, sub);

impl Mul<&BigFloatC> for &BigFloatC {
    type Output = BigFloatC;
    fn mul(self, rhs: &BigFloatC) -> BigFloatC {
        let bits = self.bits();
        assert_eq!(bits, rhs.bits(), "mixed BigFloat scales");
        let re = (&self.re.mant * &rhs.re.mant - &self.im.mant * &rhs.im.mant) >> bits as usize;
        let im = (&self.re.mant * &rhs.im.mant + &self.im.mant * &rhs.re.mant) >> bits as usize;
        BigFloatC::new(BigFloat { mant: re, bits }, BigFloat { mant: im, bits })
    }
}

impl Div<&BigFloatC> for &BigFloatC {
    type Output = BigFloatC;
    fn div(self, rhs: &BigFloatC) -> BigFloatC {
        let den = rhs.abs2();
        assert!(!den.is_zero(), "division by zero");
        let num = self * &rhs.conj();
        BigFloatC::new(&num.re / &den, &num.im / &den)
    }
}

impl Neg for &BigFloatC {
    type Output = BigFloatC;
    fn neg(self) -> BigFloatC {
        BigFloatC { re: -&self.re, im: -&self.im }
    }
}
