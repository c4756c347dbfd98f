//! Exact dimension formulas for spaces of modular forms.
//!
//! Level 1 uses the classical weight-12 staircase; `Γ0(N)` uses the
//! four-term formula `A_1 − A_{2,3} − A_{2,4} ± A_3 (+ δ_{k,2})` whose
//! elliptic-point terms are built from Kronecker symbols at −3 and −4.
//! New-space dimensions come from Möbius-style inversion of the old/new
//! decomposition.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{divisors, euler_phi, factorize, kronecker};
use crate::{rat, rat_i, Error, Rational, Result};

/// Which space a dimension query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// All modular forms `M_k`.
    Full,
    /// Cusp forms `S_k`.
    Cusp,
    /// The new subspace of `S_k(Γ0(N))`.
    NewCusp,
}

fn require_even_nonneg(k: i64) -> Result<u64> {
    if k < 0 || k % 2 != 0 {
        Err(Error::BadWeight(k))
    } else {
        Ok(k as u64)
    }
}

/// `dim M_k(SL2(Z))`: `⌊k/12⌋ + 1`, except `⌊k/12⌋` when `k ≡ 2 (mod 12)`.
pub fn dim_mk_level1(k: i64) -> Result<u64> {
    let k = require_even_nonneg(k)?;
    Ok(k / 12 + if k % 12 == 2 { 0 } else { 1 })
}

/// `dim S_k(SL2(Z))`: one less than the full space once constants exist
/// (weight ≥ 4); weights 0 and 2 carry no cusp forms.
pub fn dim_sk_level1(k: i64) -> Result<u64> {
    let keven = require_even_nonneg(k)?;
    if keven < 4 {
        return Ok(0);
    }
    Ok(dim_mk_level1(k)? - 1)
}

/// The four rational terms of the Γ0(N) dimension formula.
fn gamma0_terms(n: u64, k: u64) -> (Rational, Rational, Rational, Rational) {
    let primes = factorize(n);
    let k = k as i64;
    let n_i = n as i64;

    let mut a1 = rat(k - 1, 12) * rat_i(n_i);
    for &(p, _) in &primes {
        a1 *= rat(p as i64 + 1, p as i64);
    }

    let a23 = if n % 9 == 0 {
        Rational::zero()
    } else {
        let mut t = rat(k - 1, 3) - rat_i(k.div_euclid(3));
        for &(p, _) in &primes {
            t *= rat_i(1 + kronecker(-3, p as i64) as i64);
        }
        t
    };

    let a24 = if n % 4 == 0 {
        Rational::zero()
    } else {
        let mut t = rat(k - 1, 4) - rat_i(k.div_euclid(4));
        for &(p, _) in &primes {
            t *= rat_i(1 + kronecker(-4, p as i64) as i64);
        }
        t
    };

    let mut a3 = Rational::zero();
    for d in divisors(n) {
        a3 += rat_i(euler_phi(num_integer::gcd(d, n / d)) as i64);
    }
    a3 /= rat_i(2);

    (a1, a23, a24, a3)
}

/// `dim M_k(Γ0(N))` or `dim S_k(Γ0(N))` for even `k ≥ 2` (weight 0 is the
/// constants), and the new cusp subspace via [`dim_new`].
pub fn dim_gamma0(n: u64, k: i64, space: Space) -> Result<u64> {
    assert!(n >= 1, "level must be positive");
    if space == Space::NewCusp {
        return dim_new(n, k);
    }
    let keven = require_even_nonneg(k)?;
    if keven == 0 {
        return Ok(match space {
            Space::Full => 1,
            _ => 0,
        });
    }
    let (a1, a23, a24, a3) = gamma0_terms(n, keven);
    let dim = match space {
        Space::Full => a1 - a23 - a24 + a3,
        Space::Cusp => {
            let delta = if keven == 2 { rat_i(1) } else { rat_i(0) };
            a1 - a23 - a24 - a3 + delta
        }
        Space::NewCusp => unreachable!(),
    };
    assert!(
        dim.is_integer() && !dim.is_negative(),
        "dimension formula must produce a nonnegative integer, got {dim} for N={n}, k={k}"
    );
    Ok(dim.to_integer().to_u64().expect("dimension fits in u64"))
}

/// `β(m)`: the multiplicative inversion weights with `β(p) = −2`,
/// `β(p²) = 1`, `β(p^e) = 0` for `e ≥ 3`.
fn beta(m: u64) -> i64 {
    let mut b = 1i64;
    for (_, e) in factorize(m) {
        b *= match e {
            1 => -2,
            2 => 1,
            _ => 0,
        };
    }
    b
}

/// Dimension of the new subspace `S_k^{new}(Γ0(N))` by inverting the old/new
/// decomposition: `Σ_{M|N} β(N/M) · dim S_k(Γ0(M))`.
pub fn dim_new(n: u64, k: i64) -> Result<u64> {
    require_even_nonneg(k)?;
    let mut acc = 0i64;
    for m in divisors(n) {
        let b = beta(n / m);
        if b != 0 {
            acc += b * dim_gamma0(m, k, Space::Cusp)? as i64;
        }
    }
    assert!(acc >= 0, "new-space dimension must be nonnegative, got {acc} for N={n}, k={k}");
    Ok(acc as u64)
}

/// Checks `dim S_k(Γ0(N)) = Σ_{M|N} σ_0(N/M) · dim S_k^{new}(Γ0(M))` — the
/// dimension count of the old/new decomposition.
pub fn olddecomp_check(n: u64, k: i64) -> Result<bool> {
    let lhs = dim_gamma0(n, k, Space::Cusp)?;
    let mut rhs = 0u64;
    for m in divisors(n) {
        rhs += divisors(n / m).len() as u64 * dim_new(m, k)?;
    }
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level1_staircase() {
        assert_eq!(dim_mk_level1(0).unwrap(), 1);
        assert_eq!(dim_mk_level1(2).unwrap(), 0);
        assert_eq!(dim_mk_level1(4).unwrap(), 1);
        assert_eq!(dim_mk_level1(12).unwrap(), 2);
        assert_eq!(dim_mk_level1(14).unwrap(), 1);
        assert_eq!(dim_sk_level1(12).unwrap(), 1);
        assert_eq!(dim_sk_level1(14).unwrap(), 0);
        assert_eq!(dim_sk_level1(24).unwrap(), 2);
        assert_eq!(dim_sk_level1(26).unwrap(), 1);
        assert!(dim_mk_level1(7).is_err());
        assert!(dim_mk_level1(-2).is_err());
    }

    #[test]
    fn gamma0_small_levels() {
        assert_eq!(dim_gamma0(4, 2, Space::Full).unwrap(), 2);
        assert_eq!(dim_gamma0(4, 2, Space::Cusp).unwrap(), 0);
        assert_eq!(dim_gamma0(11, 2, Space::Cusp).unwrap(), 1);
        assert_eq!(dim_gamma0(22, 2, Space::Cusp).unwrap(), 2);
        assert_eq!(dim_gamma0(23, 2, Space::Cusp).unwrap(), 2);
        assert_eq!(dim_gamma0(1, 0, Space::Full).unwrap(), 1);
        assert_eq!(dim_gamma0(10, 0, Space::Cusp).unwrap(), 0);
        // Γ0(4), weight 5/2-adjacent sanity: weight must be even.
        assert!(dim_gamma0(4, 3, Space::Full).is_err());
    }

    #[test]
    fn gamma0_matches_level1() {
        for k in (0..=100).step_by(2) {
            assert_eq!(
                dim_gamma0(1, k, Space::Full).unwrap(),
                dim_mk_level1(k).unwrap(),
                "M_{k}"
            );
            assert_eq!(
                dim_gamma0(1, k, Space::Cusp).unwrap(),
                dim_sk_level1(k).unwrap(),
                "S_{k}"
            );
        }
    }

    #[test]
    fn new_space_dimensions() {
        assert_eq!(dim_new(22, 2).unwrap(), 0);
        assert_eq!(dim_new(11, 2).unwrap(), 1);
        assert_eq!(dim_new(1, 12).unwrap(), 1);
        assert_eq!(dim_gamma0(22, 2, Space::NewCusp).unwrap(), 0);
    }

    #[test]
    fn old_new_decomposition() {
        for (n, k) in [(22, 2), (4, 12), (36, 2), (48, 4), (100, 6)] {
            assert!(olddecomp_check(n, k).unwrap(), "N={n}, k={k}");
        }
        for k in (2..=40).step_by(2) {
            assert!(olddecomp_check(1, k).unwrap());
        }
    }

    #[test]
    fn integrality_across_range() {
        // The assertion inside dim_gamma0 guards integrality; sweep a block.
        for n in 1..=120 {
            for k in [2, 4, 6, 12, 24] {
                let m = dim_gamma0(n, k, Space::Full).unwrap();
                let s = dim_gamma0(n, k, Space::Cusp).unwrap();
                assert!(m >= s, "M ⊇ S at N={n}, k={k}");
            }
        }
    }
}
