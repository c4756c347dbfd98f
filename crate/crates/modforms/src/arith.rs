//! Exact scalar number theory.
//!
//! Divisor sums (plain and character-twisted), the full Kronecker symbol,
//! Bernoulli numbers, Hurwitz class numbers `H(N)`, and special values
//! `ζ_K(−1)`, `ζ_K(−3)` for real quadratic fields — everything the series
//! and trace-formula layers need, as pure functions over exact rationals.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{rat, rat_i, Error, Rational, Result};

/// Label for the Kronecker character `χ_D = (D/·)`.
///
/// `D = 0` denotes the trivial character. Any other label must satisfy
/// `D ≡ 0, 1 (mod 4)`, the congruence every discriminant satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KroneckerLabel(pub i64);

impl KroneckerLabel {
    /// Validated constructor.
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d.rem_euclid(4) <= 1 {
            Ok(KroneckerLabel(d))
        } else {
            Err(Error::BadDiscriminant(d))
        }
    }

    /// Character value at `n`: `(D/n)`, or `1` for the trivial label.
    pub fn eval(self, n: i64) -> i32 {
        if self.0 == 0 {
            1
        } else {
            kronecker(self.0, n)
        }
    }
}

/// Integer square root: the largest `r` with `r² ≤ n`.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r > 0 && r.checked_mul(r).map_or(true, |s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |s| s <= n) {
        r += 1;
    }
    r
}

/// Divisors of `n ≥ 1` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of n >= 1 only");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Prime factorization of `n ≥ 1` as `(p, v)` pairs with increasing `p`.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut v = 0;
            while n % p == 0 {
                n /= p;
                v += 1;
            }
            out.push((p, v));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Primality by trial division; adequate for the desk-scale ranges used here.
pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// `σ_k(n) = Σ_{d|n, d>0} d^k` as a big integer, for `n ≥ 1`.
pub fn sigma_big(k: u32, n: u64) -> BigInt {
    let mut acc = BigInt::zero();
    for d in divisors(n) {
        acc += BigInt::from(d).pow(k);
    }
    acc
}

/// Divisor power sum `σ_k(n)`, with `σ_k(n) = 0` for `n ≤ 0`.
///
/// The zero extension matches the convention "σ(x) = 0 if x ∉ Z" used when
/// these sums appear with arguments like `n/4` in r_k formulas.
pub fn sigma(k: u32, n: i64) -> Rational {
    if n <= 0 {
        Rational::zero()
    } else {
        Rational::from(sigma_big(k, n as u64))
    }
}

/// Full Kronecker symbol `(a/n)`, extended to all integer arguments.
///
/// At 2 the symbol is `0` for even `a`, `+1` for `a ≡ ±1 (mod 8)` and `−1`
/// for `a ≡ ±3 (mod 8)`; `(a/0) = 1` iff `a = ±1`, and the sign of `n`
/// contributes `(a/−1) = ±1` according to the sign of `a`.
pub fn kronecker(a: i64, n: i64) -> i32 {
    let mut a = a;
    let mut n = n;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let at_two = |a: i64| -> i32 {
        match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        }
    };
    while n % 2 == 0 {
        n /= 2;
        match at_two(a) {
            0 => return 0,
            t => result *= t,
        }
    }
    // n is now odd and positive: Jacobi symbol via quadratic reciprocity.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n.rem_euclid(8), 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Twisted divisor sum `σ_k^{(D)}(n) = Σ_{d|n} (D/d) d^k`; `0` for `n ≤ 0`.
pub fn sigma_twisted(d: KroneckerLabel, k: u32, n: i64) -> BigInt {
    if n <= 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::zero();
    for dv in divisors(n as u64) {
        acc += BigInt::from(d.eval(dv as i64)) * BigInt::from(dv).pow(k);
    }
    acc
}

/// Dual twisted sum `σ_k^{(D,*)}(n) = Σ_{d|n} (D/(n/d)) d^k`; `0` for `n ≤ 0`.
pub fn sigma_twisted_star(d: KroneckerLabel, k: u32, n: i64) -> BigInt {
    if n <= 0 {
        return BigInt::zero();
    }
    let n_u = n as u64;
    let mut acc = BigInt::zero();
    for dv in divisors(n_u) {
        acc += BigInt::from(d.eval((n_u / dv) as i64)) * BigInt::from(dv).pow(k);
    }
    acc
}

/// Bernoulli number `B_k` for the generating function `t/(e^t−1)`, so
/// `B_1 = −1/2`.
pub fn bernoulli(k: u32) -> Rational {
    // B_m = −(1/(m+1)) Σ_{j<m} C(m+1, j) B_j, run bottom-up.
    let mut b: Vec<Rational> = Vec::with_capacity(k as usize + 1);
    for m in 0..=(k as u64) {
        if m == 0 {
            b.push(Rational::one());
            continue;
        }
        let mut acc = Rational::zero();
        // C(m+1, j) accumulated incrementally.
        let mut c = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from(c.clone()) * bj;
            let j = j as u64;
            c = c * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / rat_i(m as i64 + 1));
    }
    b.pop().unwrap()
}

/// Möbius function of `n ≥ 1`.
pub fn moebius(n: u64) -> i32 {
    let f = factorize(n);
    if f.iter().any(|&(_, v)| v > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler totient of `n ≥ 1`.
pub fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for (p, _) in factorize(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Hurwitz class number `H(N)`.
///
/// `H(0) = −1/12`; `H(N) = 0` unless `N ≡ 0, 3 (mod 4)`; otherwise the count
/// of `SL2(Z)`-classes of positive binary quadratic forms of discriminant
/// `−N`, with the classes of `a(x²+y²)` and `a(x²+xy+y²)` weighted `1/2` and
/// `1/3`. Classes are counted through their unique reduced representative
/// `(a, b, c)` with `−a < b ≤ a ≤ c` and `b ≥ 0` whenever `a = c`.
pub fn hurwitz(n: u64) -> Rational {
    if n == 0 {
        return rat(-1, 12);
    }
    if !matches!(n % 4, 0 | 3) {
        return Rational::zero();
    }
    let mut h = Rational::zero();
    let mut a = 1u64;
    while 3 * a * a <= n {
        let a_i = a as i64;
        for b in (1 - a_i)..=a_i {
            let num = (b * b) as u64 + n;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            h += if b == 0 && a == c {
                rat(1, 2)
            } else if b == a_i && c == a {
                rat(1, 3)
            } else {
                rat_i(1)
            };
        }
        a += 1;
    }
    h
}

/// `H_3(N) = H(4N) + 2H(N)` for `N ≥ 1`, the class-number combination used
/// by the τ trace formula.
pub fn h3(n: u64) -> Rational {
    assert!(n >= 1, "H_3 is used for N >= 1 only");
    hurwitz(4 * n) + rat_i(2) * hurwitz(n)
}

/// Is `d` a fundamental discriminant? (`1` counts, as the degenerate case.)
pub fn is_fundamental_discriminant(d: i64) -> bool {
    let squarefree = |m: i64| -> bool {
        m != 0 && factorize(m.unsigned_abs()).iter().all(|&(_, v)| v == 1)
    };
    if d == 0 {
        false
    } else if d.rem_euclid(4) == 1 {
        d == 1 || squarefree(d)
    } else if d % 4 == 0 {
        let m = d / 4;
        matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
    } else {
        false
    }
}

fn require_fundamental_positive(d: u64) -> Result<()> {
    if d <= 1 || !is_fundamental_discriminant(d as i64) {
        return Err(Error::BadDiscriminant(d as i64));
    }
    Ok(())
}

/// `ζ_K(−m)` for `K = Q(√D)`, `D > 1` a fundamental discriminant, `m ∈ {1, 3}`:
///
/// `ζ_K(−1) = (1/60) Σ_{|s|<√D} σ_1((D−s²)/4)` and
/// `ζ_K(−3) = (1/120) Σ_{|s|<√D} σ_3((D−s²)/4)`,
/// where `σ` of a non-integer argument is `0`.
pub fn zeta_k_special(d: u64, m: u32) -> Result<Rational> {
    require_fundamental_positive(d)?;
    assert!(m == 1 || m == 3, "only ζ_K(−1) and ζ_K(−3) are implemented");
    let mut acc = Rational::zero();
    let bound = isqrt(d - 1); // |s| < √D ⇔ s² ≤ D−1
    for s in -(bound as i64)..=(bound as i64) {
        let rem = d as i64 - s * s;
        if rem % 4 == 0 {
            acc += sigma(m, rem / 4);
        }
    }
    Ok(acc / rat_i(if m == 1 { 60 } else { 120 }))
}

/// Representation count `r_5(D) = 480(5 − 2(D/2)) ζ_K(−1)` for fundamental
/// `D > 1`.
pub fn r5_via_zeta(d: u64) -> Result<BigInt> {
    let z = zeta_k_special(d, 1)?;
    let factor = rat_i(480) * rat_i(5 - 2 * kronecker(d as i64, 2) as i64);
    let r = factor * z;
    debug_assert!(r.is_integer(), "r_5 formula must produce an integer");
    Ok(r.to_integer())
}

/// `L(χ, −2) = −B_{3,χ}/3` for the quadratic character `χ = (D/·)` of
/// conductor `|D|`, via the generalized Bernoulli number
/// `B_{3,χ} = f² Σ_{a=1}^{f} χ(a) B_3(a/f)` with `f = |D|`.
pub fn l_chi_minus2(d: i64) -> Result<Rational> {
    if !is_fundamental_discriminant(d) || d == 1 {
        return Err(Error::BadDiscriminant(d));
    }
    let f = d.unsigned_abs() as i64;
    // f²·B_3(a/f) = a³/f − (3/2)a² + (f/2)a, summed against χ(a).
    let mut b3 = Rational::zero();
    for a in 1..=f {
        let chi = kronecker(d, a);
        if chi == 0 {
            continue;
        }
        let poly = rat(a, 1) * rat(a, 1) * rat(a, f) - rat(3, 2) * rat_i(a * a)
            + rat(f, 2) * rat_i(a);
        b3 += rat_i(chi as i64) * poly;
    }
    Ok(-b3 / rat_i(3))
}

/// `r_7(D) = −28(41 − 4(D/2)) L(χ_{−D}, −2)` for `D > 0` with `−D`
/// fundamental.
pub fn r7_via_l(d: u64) -> Result<BigInt> {
    if d == 0 || !is_fundamental_discriminant(-(d as i64)) {
        return Err(Error::BadDiscriminant(-(d as i64)));
    }
    let l = l_chi_minus2(-(d as i64))?;
    let r = rat_i(-28) * rat_i(41 - 4 * kronecker(d as i64, 2) as i64) * l;
    debug_assert!(r.is_integer(), "r_7 formula must produce an integer");
    Ok(r.to_integer())
}

/// Checks both σ-sum identities
/// `Σ_{|s|<√D} σ_1(D−s²) = 60(9−2(D/2)) ζ_K(−1)` and
/// `Σ_{|s|<√D} σ_3(D−s²) = 120(129−8(D/2)) ζ_K(−3)`
/// exactly, for fundamental `D > 1`.
pub fn sigma_sum_identity_check(d: u64) -> Result<bool> {
    require_fundamental_positive(d)?;
    let two = kronecker(d as i64, 2) as i64;
    let bound = isqrt(d - 1);
    let mut s1 = Rational::zero();
    let mut s3 = Rational::zero();
    for s in -(bound as i64)..=(bound as i64) {
        let rem = d as i64 - s * s;
        s1 += sigma(1, rem);
        s3 += sigma(3, rem);
    }
    let rhs1 = rat_i(60) * rat_i(9 - 2 * two) * zeta_k_special(d, 1)?;
    let rhs3 = rat_i(120) * rat_i(129 - 8 * two) * zeta_k_special(d, 3)?;
    Ok(s1 == rhs1 && s3 == rhs3)
}
