//! Ramanujan's τ by four independent algorithms, with congruence, bound,
//! and vanishing checks.
//!
//! The four table methods share no code path: `series` multiplies out
//! `q ∏(1−qⁿ)^{24}` as `q·((η-cube)²)²)²` from the sparse cube expansion,
//! `recursion` runs the E₂-convolution `(n−1)τ(n) = −24 Σ σ₁(m) τ(n−m)`,
//! `pentagonal` solves the recursion supported on generalized pentagonal
//! numbers, and `sigma` evaluates the σ₃/σ₅ divisor-sum identity through
//! two big-integer convolutions. `hybrid` reassembles the table
//! multiplicatively from prime values (series) via the Hecke prime-power
//! recursion, exercising multiplicativity at table scale.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{h3, is_prime, sigma_big};
use crate::convolve::convolve;
use crate::{Error, Rational, Result};

pub use crate::forms::tau_sigma_formula_components;

/// Table construction strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauMethod {
    Series,
    Recursion,
    Pentagonal,
    Sigma,
    Hybrid,
}

impl fmt::Display for TauMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TauMethod::Series => "series",
            TauMethod::Recursion => "recursion",
            TauMethod::Pentagonal => "pentagonal",
            TauMethod::Sigma => "sigma",
            TauMethod::Hybrid => "hybrid",
        };
        f.write_str(s)
    }
}

impl FromStr for TauMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series" => Ok(TauMethod::Series),
            "recursion" => Ok(TauMethod::Recursion),
            "pentagonal" => Ok(TauMethod::Pentagonal),
            "sigma" => Ok(TauMethod::Sigma),
            "hybrid" => Ok(TauMethod::Hybrid),
            _ => Err(Error::BadInput(format!("unknown tau method `{s}`"))),
        }
    }
}

/// Exact τ values for `1 ≤ n ≤ upto`.
#[derive(Debug, Clone, PartialEq)]
pub struct TauTable {
    pub upto: u64,
    /// `values[n] = τ(n)`; index 0 is unused and holds 0.
    pub values: Vec<BigInt>,
    pub method: TauMethod,
}

impl TauTable {
    pub fn tau(&self, n: u64) -> &BigInt {
        assert!(n >= 1 && n <= self.upto, "n out of table range");
        &self.values[n as usize]
    }
}

/// Coefficients of `∏(1−qⁿ)³ = Σ_{k≥0} (−1)^k (2k+1) q^{k(k+1)/2}`.
fn eta_cube_coeffs(len: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); len];
    let mut k = 0u64;
    loop {
        let e = k * (k + 1) / 2;
        if e >= len as u64 {
            return v;
        }
        let t = (2 * k + 1) as i64;
        v[e as usize] = BigInt::from(if k % 2 == 0 { t } else { -t });
        k += 1;
    }
}

fn series_values(upto: usize) -> Vec<BigInt> {
    // τ(n) is the coefficient of q^{n−1} in (∏(1−qⁿ)³)⁸; three squarings.
    let cube = eta_cube_coeffs(upto);
    let sixth = convolve(&cube, &cube, upto);
    let twelfth = convolve(&sixth, &sixth, upto);
    let full = convolve(&twelfth, &twelfth, upto);
    let mut values = vec![BigInt::zero(); upto + 1];
    for n in 1..=upto {
        values[n] = full[n - 1].clone();
    }
    values
}

fn recursion_values(upto: usize) -> Vec<BigInt> {
    let sig: Vec<u64> = (0..upto)
        .map(|m| if m == 0 { 0 } else { sigma_big(1, m as u64).to_u64().expect("σ₁ fits") })
        .collect();
    let mut values = vec![BigInt::zero(); upto + 1];
    values[1] = BigInt::one();
    for n in 2..=upto {
        let mut acc = BigInt::zero();
        for m in 1..n {
            acc += &values[n - m] * sig[m];
        }
        acc *= BigInt::from(-24);
        let nm1 = BigInt::from(n as u64 - 1);
        debug_assert!((&acc % &nm1).is_zero());
        values[n] = acc / nm1;
    }
    values
}

fn pentagonal_values(upto: usize) -> Vec<BigInt> {
    let mut values = vec![BigInt::zero(); upto + 1];
    if upto >= 1 {
        values[1] = BigInt::one();
    }
    for n in 2..=upto {
        let n_i = n as i64;
        let mut acc = BigInt::zero();
        // Signed index j = ±k contributes at the generalized pentagonal
        // number g(j) = j(3j+1)/2 with weight (−1)^j (75j² + 25j + 2 − 2n).
        for k in 1i64.. {
            let g_minus = (k * (3 * k - 1) / 2) as usize; // j = −k
            if g_minus > n - 1 {
                break;
            }
            let sign = if k % 2 == 1 { -1 } else { 1 };
            let c_minus = 75 * k * k - 25 * k + 2 - 2 * n_i;
            acc += &values[n - g_minus] * (sign * c_minus);
            let g_plus = (k * (3 * k + 1) / 2) as usize; // j = +k
            if g_plus <= n - 1 {
                let c_plus = 75 * k * k + 25 * k + 2 - 2 * n_i;
                acc += &values[n - g_plus] * (sign * c_plus);
            }
        }
        let den = BigInt::from(2 * n as u64 - 2);
        debug_assert!((&acc % &den).is_zero());
        values[n] = acc / den;
    }
    values
}

fn sigma_values(upto: usize) -> Vec<BigInt> {
    let s3: Vec<BigInt> =
        (0..=upto).map(|m| if m == 0 { BigInt::zero() } else { sigma_big(3, m as u64) }).collect();
    let s5: Vec<BigInt> =
        (0..=upto).map(|m| if m == 0 { BigInt::zero() } else { sigma_big(5, m as u64) }).collect();
    let ms3: Vec<BigInt> = s3.iter().enumerate().map(|(m, s)| s * BigInt::from(m)).collect();
    let c1 = convolve(&s3, &s5, upto + 1);
    let c2 = convolve(&ms3, &s5, upto + 1);
    let mut values = vec![BigInt::zero(); upto + 1];
    for n in 1..=upto {
        let nb = BigInt::from(n);
        // 12·τ(n) = n(5σ₃ + 7σ₅)(n) + 12(140n·(σ₃⋆σ₅) − 350(mσ₃⋆σ₅))(n)
        let total: BigInt =
            &nb * (&s3[n] * 5 + &s5[n] * 7) + (&nb * &c1[n] * 140 - &c2[n] * 350) * 12;
        let twelve = BigInt::from(12);
        debug_assert!((&total % &twelve).is_zero());
        values[n] = total / twelve;
    }
    values
}

/// `τ(p^e)` column via `τ(p^{e+1}) = τ(p) τ(p^e) − p^{11} τ(p^{e−1})`.
fn prime_power_tau(tau_p: &BigInt, p: u64, e_max: u32) -> Vec<BigInt> {
    let p11 = BigInt::from(p).pow(11);
    let mut out = Vec::with_capacity(e_max as usize + 1);
    out.push(BigInt::one());
    out.push(tau_p.clone());
    for e in 1..e_max as usize {
        let next = tau_p * &out[e] - &p11 * &out[e - 1];
        out.push(next);
    }
    out
}

fn hybrid_values(upto: usize) -> Vec<BigInt> {
    // Smallest-prime-factor sieve for multiplicative assembly.
    let mut spf: Vec<usize> = (0..=upto).collect();
    let mut p = 2usize;
    while p * p <= upto {
        if spf[p] == p {
            let mut m = p * p;
            while m <= upto {
                if spf[m] == m {
                    spf[m] = p;
                }
                m += p;
            }
        }
        p += 1;
    }
    let prime_tau = series_values(upto);
    let mut values = vec![BigInt::zero(); upto + 1];
    if upto >= 1 {
        values[1] = BigInt::one();
    }
    for n in 2..=upto {
        let p = spf[n];
        let mut e = 0u32;
        let mut m = n;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        let local = prime_power_tau(&prime_tau[p], p as u64, e);
        values[n] = &local[e as usize] * &values[m];
    }
    values
}

/// Builds the exact τ table for `1 ≤ n ≤ upto` by the chosen method.
pub fn tau_table(upto: u64, method: TauMethod) -> TauTable {
    assert!(upto >= 1, "table needs at least τ(1)");
    let u = upto as usize;
    let values = match method {
        TauMethod::Series => series_values(u),
        TauMethod::Recursion => recursion_values(u),
        TauMethod::Pentagonal => pentagonal_values(u),
        TauMethod::Sigma => sigma_values(u),
        TauMethod::Hybrid => hybrid_values(u),
    };
    TauTable { upto, values, method }
}

/// Checks the companion recursion supported on triangular numbers,
/// `Σ_{k≥0} (−1)^k (2k+1)(9k² + 9k + 2 − 2n) τ(n − k(k+1)/2) = 0`,
/// against a finished table.
pub fn triangular_recursion_check(table: &TauTable) -> bool {
    for n in 1..=table.upto as usize {
        let n_i = n as i64;
        let mut acc = BigInt::zero();
        for k in 0i64.. {
            let g = (k * (k + 1) / 2) as usize;
            if g >= n {
                break;
            }
            let sign = if k % 2 == 1 { -1 } else { 1 };
            let c = (2 * k + 1) * (9 * k * k + 9 * k + 2 - 2 * n_i);
            acc += &table.values[n - g] * (sign * c);
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}

/// `τ(p)` for an odd prime by the Hurwitz class-number trace formula
/// `τ(p) = 28p⁶ − 28p⁵ − 90p⁴ − 35p³ − 1 − 128 Σ_{1≤t<√p} t⁶(4t⁴ − 9pt² + 7p²) H₃(p−t²)`.
///
/// `p = 2` is rejected: the printed formula evaluates to −1721 ≠ −24 there
/// under any of the standard class-number conventions, so the even prime is
/// served by the series method instead.
pub fn tau_trace_formula(p: u64) -> Result<BigInt> {
    if p == 2 || !is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    let pb = BigInt::from(p);
    let main =
        pb.pow(6) * 28 - pb.pow(5) * 28 - pb.pow(4) * 90 - pb.pow(3) * 35 - BigInt::one();
    let mut sum = Rational::zero();
    let mut t = 1u64;
    while t * t < p {
        let tb = BigInt::from(t);
        let weight = tb.pow(6) * (tb.pow(4) * 4 - &pb * tb.pow(2) * 9 + pb.pow(2) * 7);
        sum += Rational::from(weight) * h3(p - t * t);
        t += 1;
    }
    let total = Rational::from(main) - Rational::from(BigInt::from(128)) * sum;
    assert!(total.is_integer(), "trace formula must produce an integer");
    Ok(total.to_integer())
}

/// `τ(n)` for a single `n ≥ 1`: factor, take prime values from the trace
/// formula (odd `p`) or the stored `τ(2) = −24`, extend to prime powers by
/// the Hecke recursion, and multiply.
pub fn tau(n: u64) -> BigInt {
    assert!(n >= 1);
    let mut acc = BigInt::one();
    for (p, e) in crate::arith::factorize(n) {
        let tau_p = if p == 2 { BigInt::from(-24) } else { tau_trace_formula(p).expect("odd prime") };
        acc *= &prime_power_tau(&tau_p, p, e)[e as usize];
    }
    acc
}

/// Verifies `τ(n) ≡ n σ₅(n) ≡ n σ₁(n) (mod 5)` and `τ(n) ≡ n σ₃(n) (mod 7)`
/// for all `n ≤ upto`.
pub fn tau_congruence_check(upto: u64) -> bool {
    let table = tau_table(upto, TauMethod::Series);
    let five = BigInt::from(5);
    let seven = BigInt::from(7);
    let divides = |m: &BigInt, x: BigInt| num_integer::Integer::mod_floor(&x, m).is_zero();
    for n in 1..=upto {
        let t = &table.values[n as usize];
        let nb = BigInt::from(n);
        if !divides(&five, t - &nb * sigma_big(5, n))
            || !divides(&five, t - &nb * sigma_big(1, n))
            || !divides(&seven, t - &nb * sigma_big(3, n))
        {
            return false;
        }
    }
    true
}

/// Outcome of checking `|τ(p)| < 2p^{11/2}` over all primes `p ≤ pmax`.
#[derive(Debug, Clone, Serialize)]
pub struct DeligneReport {
    pub pmax: u64,
    /// True when every prime satisfies the two-sided bound.
    pub holds: bool,
    /// Largest observed `|τ(p)| / (2p^{11/2})`.
    pub max_ratio: f64,
    /// Prime attaining `max_ratio`.
    pub argmax_prime: u64,
    /// Primes violating the stricter printed bound `|τ(p)| < p^{11/2}`
    /// (reported empirically; the provable bound has the factor 2).
    pub strict_failures: Vec<u64>,
}

/// Checks the Deligne bound `τ(p)² < 4p¹¹` exactly for all primes
/// `p ≤ pmax` and reports the extremal ratio.
pub fn deligne_bound_check(pmax: u64) -> DeligneReport {
    let table = tau_table(pmax.max(2), TauMethod::Series);
    let mut holds = true;
    let mut max_ratio = 0.0f64;
    let mut argmax_prime = 2;
    let mut strict_failures = Vec::new();
    for p in 2..=pmax {
        if !is_prime(p) {
            continue;
        }
        let t = &table.values[p as usize];
        let t2 = t * t;
        let p11 = BigInt::from(p).pow(11);
        if t2 >= &p11 * 4 {
            holds = false;
        }
        if t2 > p11 {
            strict_failures.push(p);
        }
        let ratio = (t2.to_f64().unwrap_or(f64::MAX) / (4.0 * p11.to_f64().unwrap_or(f64::MAX)))
            .sqrt();
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax_prime = p;
        }
    }
    DeligneReport { pmax, holds, max_ratio, argmax_prime, strict_failures }
}

/// First `n` in the table with `τ(n) = 0`, if any.
pub fn lehmer_scan_table(table: &TauTable) -> Option<u64> {
    (1..=table.upto).find(|&n| table.values[n as usize].is_zero())
}

/// Scans `τ(n) = 0` for `n ≤ upto` (Lehmer's question); `None` expected.
pub fn lehmer_scan(upto: u64) -> Option<u64> {
    lehmer_scan_table(&tau_table(upto, TauMethod::Series))
}
