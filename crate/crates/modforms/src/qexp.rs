//! Truncated q-expansions with exact rational coefficients.
//!
//! A [`QExp`] stores the coefficients of `Σ_n c_n q^{(off+n)/den}`: a window
//! of a (possibly fractional-exponent) power series, on an exponent grid with
//! step `1/den` where `den` divides 24. Coefficient `n` sits at exponent
//! `(offset_num + n)/offset_den`; exponents below the offset are zero by
//! definition, exponents at or beyond the window end are unknown. Every
//! operation propagates the largest window the inputs mathematically justify
//! and never over-reports.
//!
//! The module also hosts the sparse eta expansions (pentagonal numbers and
//! Jacobi's `η³` series), eta quotients, the partition generating function,
//! and the q-Pochhammer / triple-product identity checks that exercise them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::convolve::convolve_rat;
use crate::{rat_from_str, rat_i, rat_to_str, Error, Rational, Result};

/// Exponent grid denominators in use; everything here lives on the 1/24 grid
/// or a coarsening of it.
pub const ALLOWED_DENS: [u32; 8] = [1, 2, 3, 4, 6, 8, 12, 24];

fn div_ceil_i64(a: i64, b: i64) -> i64 {
    num_integer::Integer::div_ceil(&a, &b)
}

/// Truncated series `Σ_{n=0}^{prec−1} c_n q^{(offset_num+n)/offset_den}`.
#[derive(Debug, Clone)]
pub struct QExp {
    offset_num: i64,
    offset_den: u32,
    coeffs: Vec<Rational>,
}

/// A q-expansion whose leading exponent may be negative (`j` starts at
/// `q^{−1}`). Structurally identical to [`QExp`]; the alias marks intent.
pub type LaurentQExp = QExp;

impl QExp {
    /// Builds a series from raw parts, validating the exponent grid.
    pub fn from_parts(offset_num: i64, offset_den: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if !ALLOWED_DENS.contains(&offset_den) {
            return Err(Error::OutOfGrid(format!(
                "exponent denominator {offset_den} does not divide 24"
            )));
        }
        Ok(QExp { offset_num, offset_den, coeffs })
    }

    /// The zero series with `prec` known (vanishing) integer coefficients.
    pub fn zero(prec: usize) -> Self {
        QExp { offset_num: 0, offset_den: 1, coeffs: vec![Rational::zero(); prec] }
    }

    /// The constant series 1 with `prec` known integer coefficients.
    pub fn one(prec: usize) -> Self {
        Self::constant(Rational::one(), prec)
    }

    /// A constant series with `prec` known integer coefficients.
    pub fn constant(c: Rational, prec: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); prec];
        if let Some(slot) = coeffs.first_mut() {
            *slot = c;
        }
        QExp { offset_num: 0, offset_den: 1, coeffs }
    }

    /// `q^{num/den}` with `prec` known coefficients on the `1/den` grid.
    pub fn monomial(num: i64, den: u32, prec: usize) -> Result<Self> {
        let mut coeffs = vec![Rational::zero(); prec];
        if let Some(slot) = coeffs.first_mut() {
            *slot = Rational::one();
        }
        Self::from_parts(num, den, coeffs)
    }

    pub fn offset_num(&self) -> i64 {
        self.offset_num
    }

    pub fn offset_den(&self) -> u32 {
        self.offset_den
    }

    /// Number of known coefficients (the window length on the grid).
    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Exponent of stored coefficient `n` as an exact rational.
    pub fn exponent_of(&self, n: usize) -> Rational {
        Rational::new(
            BigInt::from(self.offset_num + n as i64),
            BigInt::from(self.offset_den),
        )
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero_series(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero stored coefficient, or `prec` if none.
    fn lead(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len())
    }

    /// Exponent of the first nonzero known coefficient, if any.
    pub fn leading_exponent(&self) -> Option<Rational> {
        let l = self.lead();
        (l < self.coeffs.len()).then(|| self.exponent_of(l))
    }

    /// Canonical representative: leading zeros are folded into the offset,
    /// the grid is compressed to the coarsest denominator carrying the
    /// support, and the precision window end is preserved exactly. Equality
    /// of `QExp` values compares these.
    pub fn normalized(&self) -> QExp {
        let den = self.offset_den as i64;
        let Some(l) = self.coeffs.iter().position(|c| !c.is_zero()) else {
            // Zero series: the window covers integer exponents < end/den.
            let end = div_ceil_i64(self.offset_num + self.coeffs.len() as i64, den);
            return QExp::zero(end.max(0) as usize);
        };
        let off = self.offset_num + l as i64;
        let tail = &self.coeffs[l..];
        let mut g = den;
        for (n, c) in tail.iter().enumerate() {
            if !c.is_zero() {
                g = g.gcd(&(off + n as i64));
            }
        }
        debug_assert!(g >= 1 && den % g == 0 && off % g == 0);
        let prec2 = div_ceil_i64(tail.len() as i64, g) as usize;
        let coeffs = (0..prec2).map(|m| tail[m * g as usize].clone()).collect();
        QExp {
            offset_num: off / g,
            offset_den: (den / g) as u32,
            coeffs,
        }
    }

    /// Re-expresses the series on a finer grid. `den2` must be a multiple of
    /// the current denominator (and a divisor of 24).
    fn rescaled(&self, den2: u32) -> QExp {
        let t = (den2 / self.offset_den) as usize;
        debug_assert_eq!(den2 % self.offset_den, 0);
        if t == 1 {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() * t];
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs[n * t] = c.clone();
        }
        QExp {
            offset_num: self.offset_num * t as i64,
            offset_den: den2,
            coeffs,
        }
    }

    fn common_grid(&self, other: &QExp) -> (QExp, QExp) {
        let den = self.offset_den.lcm(&other.offset_den);
        (self.rescaled(den), other.rescaled(den))
    }

    /// Coefficient-wise sum on the common grid. The result's window is the
    /// intersection of what both inputs determine.
    pub fn add(&self, other: &QExp) -> QExp {
        let (a, b) = self.common_grid(other);
        let off = a.offset_num.min(b.offset_num);
        let end = (a.offset_num + a.coeffs.len() as i64).min(b.offset_num + b.coeffs.len() as i64);
        let prec = (end - off).max(0) as usize;
        let mut coeffs = vec![Rational::zero(); prec];
        for (src_off, src) in [(a.offset_num, &a.coeffs), (b.offset_num, &b.coeffs)] {
            for (n, c) in src.iter().enumerate() {
                let idx = (src_off - off) as usize + n;
                if idx < prec && !c.is_zero() {
                    coeffs[idx] += c;
                }
            }
        }
        QExp { offset_num: off, offset_den: a.offset_den, coeffs }
    }

    pub fn sub(&self, other: &QExp) -> QExp {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QExp {
        self.scale(&-Rational::one())
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Rational) -> QExp {
        QExp {
            offset_num: self.offset_num,
            offset_den: self.offset_den,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Cauchy product. Offsets add; the window length is
    /// `min(prec_f + lead_g, prec_g + lead_f)` on the aligned grid, the
    /// largest length the unknown tails of either factor cannot reach.
    pub fn mul(&self, other: &QExp) -> QExp {
        let (a, b) = self.common_grid(other);
        let prec = (a.coeffs.len() + b.lead()).min(b.coeffs.len() + a.lead());
        let coeffs = convolve_rat(&a.coeffs, &b.coeffs, prec);
        QExp {
            offset_num: a.offset_num + b.offset_num,
            offset_den: a.offset_den,
            coeffs,
        }
    }

    /// Binary powering; `pow(f, 0)` is the constant 1 on `f`'s grid and
    /// window.
    pub fn pow(&self, m: u64) -> QExp {
        let mut result = QExp {
            offset_num: 0,
            offset_den: self.offset_den,
            coeffs: QExp::one(self.coeffs.len()).coeffs,
        };
        let mut base = self.clone();
        let mut m = m;
        while m > 0 {
            if m & 1 == 1 {
                result = result.mul(&base);
            }
            m >>= 1;
            if m > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse in the Laurent sense: leading zeros shift the
    /// offset of the inverse downward. Fails only when no known coefficient
    /// is nonzero.
    pub fn inv(&self) -> Result<QExp> {
        let l = self.lead();
        if l == self.coeffs.len() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let u = &self.coeffs[l..];
        let u0_inv = u[0].recip();
        let mut v = vec![Rational::zero(); u.len()];
        v[0] = u0_inv.clone();
        for n in 1..u.len() {
            let mut acc = Rational::zero();
            for i in 1..=n {
                if !u[i].is_zero() && !v[n - i].is_zero() {
                    acc += &u[i] * &v[n - i];
                }
            }
            if !acc.is_zero() {
                v[n] = -(acc * &u0_inv);
            }
        }
        Ok(QExp {
            offset_num: -(self.offset_num + l as i64),
            offset_den: self.offset_den,
            coeffs: v,
        })
    }

    /// `f/g = f · g^{−1}`.
    pub fn div(&self, other: &QExp) -> Result<QExp> {
        Ok(self.mul(&other.inv()?))
    }

    /// The operator `q d/dq`: multiplies coefficient `n` by its exponent.
    pub fn qderive(&self) -> QExp {
        let den = BigInt::from(self.offset_den);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                let e = Rational::new(BigInt::from(self.offset_num + n as i64), den.clone());
                c * e
            })
            .collect();
        QExp {
            offset_num: self.offset_num,
            offset_den: self.offset_den,
            coeffs,
        }
    }

    /// Substitution `q ↦ q^d`: every exponent is multiplied by `d`, so the
    /// known window scales by `d` as well.
    pub fn substitute_qm(&self, d: u32) -> QExp {
        assert!(d >= 1, "substitution exponent must be positive");
        let d = d as usize;
        if d == 1 {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() * d];
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs[n * d] = c.clone();
        }
        QExp {
            offset_num: self.offset_num * d as i64,
            offset_den: self.offset_den,
            coeffs,
        }
    }

    /// Multiplies by the monomial `q^{t/den}` (offset shift on the grid).
    pub fn shifted(&self, t: i64) -> QExp {
        QExp {
            offset_num: self.offset_num + t,
            offset_den: self.offset_den,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Shortens the window to at most `prec` coefficients.
    pub fn truncated(&self, prec: usize) -> QExp {
        let mut out = self.clone();
        out.coeffs.truncate(prec);
        out
    }

    /// Exact coefficient at a rational exponent. Exponents below the offset
    /// (on the grid) are zero; off-grid exponents and exponents beyond the
    /// window are errors.
    pub fn coefficient(&self, exponent: &Rational) -> Result<Rational> {
        let scaled = exponent * Rational::from(BigInt::from(self.offset_den));
        if !scaled.is_integer() {
            return Err(Error::OutOfGrid(format!(
                "exponent {} is not on the 1/{} grid",
                rat_to_str(exponent),
                self.offset_den
            )));
        }
        let n = scaled.to_integer() - BigInt::from(self.offset_num);
        if n.is_negative() {
            return Ok(Rational::zero());
        }
        match n.to_usize() {
            Some(idx) if idx < self.coeffs.len() => Ok(self.coeffs[idx].clone()),
            _ => Err(Error::OutOfPrecision(format!(
                "exponent {} is beyond the known window",
                rat_to_str(exponent)
            ))),
        }
    }

    /// Coefficient at an integer exponent (integer-grid convenience).
    pub fn coeff_int(&self, exponent: i64) -> Result<Rational> {
        self.coefficient(&rat_i(exponent))
    }

    /// First `count` `(exponent, coefficient)` pairs starting at the leading
    /// nonzero coefficient.
    pub fn head(&self, count: usize) -> Vec<(Rational, Rational)> {
        let n = self.normalized();
        n.coeffs
            .iter()
            .take(count)
            .enumerate()
            .map(|(i, c)| (n.exponent_of(i), c.clone()))
            .collect()
    }
}

impl PartialEq for QExp {
    /// Equality of the underlying truncated series: same support, same
    /// coefficients, and the same precision window end.
    fn eq(&self, other: &Self) -> bool {
        let a = self.normalized();
        let b = other.normalized();
        a.offset_num == b.offset_num && a.offset_den == b.offset_den && a.coeffs == b.coeffs
    }
}

#[derive(Serialize, Deserialize)]
struct QExpRepr {
    offset_num: i64,
    offset_den: u32,
    prec: usize,
    coeffs: Vec<String>,
}

impl Serialize for QExp {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QExpRepr {
            offset_num: self.offset_num,
            offset_den: self.offset_den,
            prec: self.coeffs.len(),
            coeffs: self.coeffs.iter().map(rat_to_str).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QExp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = QExpRepr::deserialize(deserializer)?;
        if repr.prec != repr.coeffs.len() {
            return Err(D::Error::custom(format!(
                "prec {} disagrees with {} coefficients",
                repr.prec,
                repr.coeffs.len()
            )));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| rat_from_str(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        QExp::from_parts(repr.offset_num, repr.offset_den, coeffs).map_err(D::Error::custom)
    }
}

/// `Σ_{j≥0} q^{j·step/den}` with `len` stored coefficients on the `1/den`
/// grid — the explicit inverse of `1 − q^{step/den}`.
fn geometric(step: usize, den: u32, len: usize) -> QExp {
    let mut coeffs = vec![Rational::zero(); len];
    let mut j = 0;
    while j < len {
        coeffs[j] = Rational::one();
        if step == 0 {
            break;
        }
        j += step;
    }
    QExp { offset_num: 0, offset_den: den, coeffs }
}

/// `η = q^{1/24}(1 + Σ_{k≥1} (−1)^k (q^{k(3k−1)/2} + q^{k(3k+1)/2}))` from
/// the pentagonal-number series, covering `prec` integer powers of `q`
/// beyond the leading `q^{1/24}`.
pub fn pentagonal_eta(prec: usize) -> QExp {
    let len = 24 * prec;
    let mut coeffs = vec![Rational::zero(); len];
    if len == 0 {
        return QExp { offset_num: 1, offset_den: 24, coeffs };
    }
    coeffs[0] = Rational::one();
    let sign = |k: usize| if k % 2 == 1 { rat_i(-1) } else { Rational::one() };
    for k in 1.. {
        let lo = 12 * k * (3 * k - 1); // 24 · k(3k−1)/2
        let hi = 12 * k * (3 * k + 1);
        if lo >= len {
            break;
        }
        coeffs[lo] = sign(k);
        if hi < len {
            coeffs[hi] = sign(k);
        }
    }
    QExp { offset_num: 1, offset_den: 24, coeffs }
}

/// `η³ = q^{1/8} Σ_{k≥0} (−1)^k (2k+1) q^{k(k+1)/2}` from Jacobi's series,
/// covering `prec` integer powers of `q` beyond the leading `q^{1/8}`.
pub fn jacobi_eta_cube(prec: usize) -> QExp {
    let len = 8 * prec;
    let mut coeffs = vec![Rational::zero(); len];
    for k in 0.. {
        let idx = 4 * k * (k + 1); // 8 · k(k+1)/2
        if idx >= len {
            break;
        }
        let v = 2 * k as i64 + 1;
        coeffs[idx] = rat_i(if k % 2 == 0 { v } else { -v });
    }
    QExp { offset_num: 1, offset_den: 8, coeffs }
}

/// Eta quotient `Π_m η(mτ)^{r_m}` with offset `Σ m·r_m / 24`, each factor
/// expanded through the pentagonal series, covering `prec` integer powers of
/// `q` beyond the leading exponent. The result is grid-normalized.
pub fn eta_quotient(factors: &[(u32, i64)], prec: usize) -> Result<QExp> {
    if factors.is_empty() {
        return Err(Error::BadInput("eta quotient needs at least one factor".into()));
    }
    let mut acc: Option<QExp> = None;
    for &(m, r) in factors {
        if m == 0 {
            return Err(Error::BadInput("eta argument multiplier must be positive".into()));
        }
        if r == 0 {
            continue;
        }
        let base_prec = prec.div_ceil(m as usize);
        let base = pentagonal_eta(base_prec).substitute_qm(m);
        let piece = if r > 0 {
            base.pow(r as u64)
        } else {
            base.inv()?.pow(r.unsigned_abs())
        };
        acc = Some(match acc {
            None => piece,
            Some(f) => f.mul(&piece),
        });
    }
    let acc = acc.unwrap_or_else(|| QExp::one(prec));
    Ok(acc.truncated(24 * prec).normalized())
}

/// Euler's product `∏_{n≥1}(1−qⁿ)` on the integer grid via pentagonal
/// numbers — `η` without its `q^{1/24}`.
pub fn euler_product(prec: usize) -> QExp {
    let mut coeffs = vec![Rational::zero(); prec];
    if prec == 0 {
        return QExp { offset_num: 0, offset_den: 1, coeffs };
    }
    coeffs[0] = Rational::one();
    for k in 1usize.. {
        let lo = k * (3 * k - 1) / 2;
        let hi = k * (3 * k + 1) / 2;
        if lo >= prec {
            break;
        }
        let s = if k % 2 == 1 { rat_i(-1) } else { Rational::one() };
        coeffs[lo] = s.clone();
        if hi < prec {
            coeffs[hi] = s;
        }
    }
    QExp { offset_num: 0, offset_den: 1, coeffs }
}

/// Partition generating function `Σ p(n) qⁿ = 1/∏(1−qⁿ)` to `prec` terms.
pub fn partition_series(prec: usize) -> QExp {
    euler_product(prec).inv().expect("Euler product starts with 1")
}

/// Verifies `1/∏(1−qⁿ) = Σ_{n≥0} q^{n²}/(q)_n²` coefficient-wise to `prec`.
pub fn partition_identity_check(prec: usize) -> bool {
    let mut rhs = QExp::one(prec);
    let mut pochhammer = QExp::one(prec); // (q)_n, extended one factor per step
    for n in 1.. {
        if n * n >= prec {
            break;
        }
        let mut factor = QExp::one(prec);
        factor.coeffs[n] = rat_i(-1);
        pochhammer = pochhammer.mul(&factor);
        let term = pochhammer.pow(2).inv().expect("unit").shifted((n * n) as i64);
        rhs = rhs.add(&term);
    }
    partition_series(prec) == rhs
}

/// The five specializations of `a` in the q-Pochhammer identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochhammerA {
    /// `a = 1`
    One,
    /// `a = −1`
    NegOne,
    /// `a = −1/q`
    NegInvQ,
    /// `a = q^{1/2}` (runs on the half-integer grid)
    SqrtQ,
    /// `a = −q^{1/2}`
    NegSqrtQ,
}

impl PochhammerA {
    /// `(sign, exponent numerator, grid denominator)` with `a = s·q^{e/den}`.
    fn parts(self) -> (i64, i64, u32) {
        match self {
            PochhammerA::One => (1, 0, 1),
            PochhammerA::NegOne => (-1, 0, 1),
            PochhammerA::NegInvQ => (-1, -1, 1),
            PochhammerA::SqrtQ => (1, 1, 2),
            PochhammerA::NegSqrtQ => (-1, 1, 2),
        }
    }
}

/// Checks the Euler expansions of the q-Pochhammer product at `a`:
///
/// `∏_{n≥1}(1−aqⁿ) = Σ_{n≥0} (−1)ⁿ aⁿ q^{n(n+1)/2}/(q)_n`  and
/// `1/∏_{n≥1}(1−aqⁿ) = Σ_{n≥0} aⁿqⁿ/(q)_n`,
///
/// coefficient-wise over `prec` integer powers of `q`. At `a = −1/q` the
/// second sum's terms all have order zero, so it does not define a formal
/// series; only the first identity is checked there.
pub fn pochhammer_identity_check(a: PochhammerA, prec: usize) -> bool {
    assert!(prec >= 2);
    let (s, e, den) = a.parts();
    let window = prec * den as usize;

    // ∏ (1 − a qⁿ): the n-th factor is 1 − s·q^{(n·den+e)/den}.
    let mut product = QExp::one(window);
    product.offset_den = den;
    for n in 1.. {
        let idx = n * den as i64 + e;
        debug_assert!(idx >= 0);
        if idx as usize >= window {
            break;
        }
        let mut factor = QExp::one(window);
        factor.offset_den = den;
        factor.coeffs[idx as usize] += rat_i(-s);
        product = product.mul(&factor);
    }

    // Σ (−1)ⁿ aⁿ q^{n(n+1)/2}/(q)_n, built from the term ratio
    // S_n/S_{n−1} = (−a)qⁿ/(1−qⁿ).
    let sum_with_ratio = |ratio_sign: i64, ratio_shift: &dyn Fn(i64) -> i64| -> QExp {
        let mut term = QExp::one(window);
        term.offset_den = den;
        let mut total = term.clone();
        for n in 1.. {
            let shift = ratio_shift(n);
            let geom = geometric((n * den as i64) as usize, den, window);
            let ratio = geom.shifted(shift).scale(&rat_i(ratio_sign));
            term = term.mul(&ratio);
            if term.offset_num >= window as i64 {
                break;
            }
            total = total.add(&term);
        }
        total
    };
    let first_rhs = sum_with_ratio(-s, &|n| n * den as i64 + e);
    if product != first_rhs {
        return false;
    }

    if a == PochhammerA::NegInvQ {
        return true;
    }
    let second_rhs = sum_with_ratio(s, &|_| den as i64 + e);
    match product.inv() {
        Ok(inverse) => inverse == second_rhs,
        Err(_) => false,
    }
}

/// Laurent polynomial in `u` whose coefficients are integer-grid q-windows
/// of a fixed length.
type UPoly = BTreeMap<i64, Vec<Rational>>;

fn upoly_apply_factor(m: &UPoly, u_shift: i64, q_shift: usize, sign: i64, prec: usize) -> UPoly {
    let mut out = m.clone();
    for (&e, v) in m {
        let slot = out.entry(e + u_shift).or_insert_with(|| vec![Rational::zero(); prec]);
        for i in 0..prec.saturating_sub(q_shift) {
            if !v[i].is_zero() {
                slot[i + q_shift] += &v[i] * rat_i(sign);
            }
        }
    }
    out
}

fn triple_product_sides(q_prec: usize, flip_u_sign: bool) -> (UPoly, UPoly) {
    let one = vec![Rational::one()]
        .into_iter()
        .chain(std::iter::repeat(Rational::zero()))
        .take(q_prec)
        .collect::<Vec<_>>();
    let mut left: UPoly = BTreeMap::from([(0, one)]);
    // n = 0 factor of ∏_{n≥0}(1 − qⁿ/u): exactly (1 − 1/u).
    left = upoly_apply_factor(&left, -1, 0, -1, q_prec);
    let up_sign = if flip_u_sign { 1 } else { -1 };
    for n in 1..q_prec {
        left = upoly_apply_factor(&left, 0, n, -1, q_prec); // (1 − qⁿ)
        left = upoly_apply_factor(&left, 1, n, up_sign, q_prec); // (1 − qⁿu)
        left = upoly_apply_factor(&left, -1, n, -1, q_prec); // (1 − qⁿ/u)
    }

    let mut right: UPoly = BTreeMap::new();
    for k in 0.. {
        let t = k * (k + 1) / 2;
        if t >= q_prec {
            break;
        }
        let sign = if k % 2 == 0 { rat_i(1) } else { rat_i(-1) };
        let up = right
            .entry(k as i64)
            .or_insert_with(|| vec![Rational::zero(); q_prec]);
        up[t] += &sign;
        let down = right
            .entry(-(k as i64) - 1)
            .or_insert_with(|| vec![Rational::zero(); q_prec]);
        down[t] -= &sign;
    }
    (left, right)
}

/// Verifies the triple product identity
/// `∏_{n≥1}(1−qⁿ)(1−qⁿu) · ∏_{n≥0}(1−qⁿ/u)
///  = Σ_{k≥0} (−1)^k (u^k − u^{−(k+1)}) q^{k(k+1)/2}`
/// for all `u`-degrees `|e| ≤ u_degree_bound` and q-exponents `< q_prec`.
pub fn triple_product_check(u_degree_bound: u32, q_prec: usize) -> bool {
    triple_product_agrees(u_degree_bound, q_prec, false)
}

fn triple_product_agrees(u_degree_bound: u32, q_prec: usize, flip_u_sign: bool) -> bool {
    assert!(u_degree_bound >= 2 && q_prec >= 2);
    let (left, right) = triple_product_sides(q_prec, flip_u_sign);
    let zero = vec![Rational::zero(); q_prec];
    for e in -(u_degree_bound as i64)..=(u_degree_bound as i64) {
        let l = left.get(&e).unwrap_or(&zero);
        let r = right.get(&e).unwrap_or(&zero);
        if l != r {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn series(off: i64, den: u32, v: &[i64]) -> QExp {
        QExp::from_parts(off, den, v.iter().map(|&x| rat_i(x)).collect()).unwrap()
    }

    #[test]
    fn add_and_scale() {
        let q = series(1, 1, &[1]);
        assert_eq!(q.add(&q), series(1, 1, &[2]));
        let f = series(0, 1, &[1, 240, 2160]);
        assert_eq!(f.add(&QExp::zero(3)), f);
        assert!(f.scale(&rat_i(-1)).add(&f).is_zero_series());
    }

    #[test]
    fn add_aligns_grids_and_windows() {
        let a = series(1, 2, &[1, 0, 3]); // q^{1/2} + 3q^{3/2}
        let b = series(0, 1, &[5, 7]); // 5 + 7q
        let sum = a.add(&b);
        assert_eq!(sum.offset_den(), 2);
        assert_eq!(sum.coefficient(&rat(1, 2)).unwrap(), rat_i(1));
        assert_eq!(sum.coeff_int(0).unwrap(), rat_i(5));
        assert_eq!(sum.coeff_int(1).unwrap(), rat_i(7));
        // b's window ends at exponent 2, a's at 2: sum known below 2 only.
        assert!(sum.coefficient(&rat(3, 2)).is_ok());
        assert!(sum.coeff_int(2).is_err());
    }

    #[test]
    fn mul_matches_eisenstein_square() {
        // (1 + 240Σσ₃qⁿ)² begins 1, 480, 61920, 1050240, 7926240.
        let e4 = series(0, 1, &[1, 240, 2160, 6720, 17520]);
        let sq = e4.mul(&e4);
        assert_eq!(sq.prec(), 5);
        let expect = [1, 480, 61920, 1050240, 7926240];
        for (n, want) in expect.iter().enumerate() {
            assert_eq!(sq.coeff_int(n as i64).unwrap(), rat_i(*want));
        }
    }

    #[test]
    fn mul_offsets_add_on_fine_grid() {
        let f = QExp::monomial(1, 24, 3).unwrap();
        let g = f.mul(&f);
        assert_eq!(g.offset_num(), 2);
        assert_eq!(g.offset_den(), 24);
    }

    #[test]
    fn mul_precision_rule() {
        // f known on [1,5), g a unit known on [0,6): the unknown tail of f
        // meets the lead of g at exponent 5, so the product covers [1,5).
        let f = series(1, 1, &[1, 1, 1, 1]);
        let g = series(0, 1, &[1, 2, 3, 4, 5, 6]);
        let fg = f.mul(&g);
        assert_eq!(fg.offset_num(), 1);
        assert_eq!(fg.prec(), 4); // min(4 + 0, 6 + 0)
        // A stored leading zero on g pushes its lead to exponent 2 and buys
        // the product two more justified coefficients.
        let g2 = series(0, 1, &[0, 0, 1, 2, 3, 4]);
        let fg2 = f.mul(&g2);
        assert_eq!(fg2.offset_num(), 1);
        assert_eq!(fg2.prec(), 6); // min(4 + 2, 6 + 0)
        assert_eq!(fg2.coeff_int(3).unwrap(), rat_i(1));
        assert_eq!(fg2.coeff_int(6).unwrap(), rat_i(10));
    }

    #[test]
    fn geometric_inverse() {
        let one_minus_q = series(0, 1, &[1, -1, 0, 0, 0]);
        let inv = one_minus_q.inv().unwrap();
        assert_eq!(inv, series(0, 1, &[1, 1, 1, 1, 1]));
        assert_eq!(one_minus_q.mul(&inv), QExp::one(5));
    }

    #[test]
    fn laurent_inverse_shifts_offset() {
        // (q − 24q² + 252q³)⁻¹ = q⁻¹(1 + 24q + 324q²)
        let f = series(1, 1, &[1, -24, 252]);
        let inv = f.inv().unwrap();
        assert_eq!(inv.offset_num(), -1);
        assert_eq!(inv, series(-1, 1, &[1, 24, 324]));
        assert!(QExp::zero(5).inv().is_err());
    }

    #[test]
    fn pow_basics() {
        let f = series(0, 1, &[1, 1, 0, 0]);
        assert_eq!(f.pow(0), QExp::one(4));
        assert_eq!(f.pow(3), series(0, 1, &[1, 3, 3, 1]));
    }

    #[test]
    fn qderive_on_grid() {
        assert!(QExp::one(4).qderive().is_zero_series());
        let q = series(1, 1, &[1]);
        assert_eq!(q.qderive(), q);
        let eta_like = QExp::monomial(1, 24, 2).unwrap();
        assert_eq!(
            eta_like.qderive().coefficient(&rat(1, 24)).unwrap(),
            rat(1, 24)
        );
    }

    #[test]
    fn substitution() {
        let q = series(1, 1, &[1]);
        // q known below exponent 2 ⇒ q² known below exponent 4.
        assert_eq!(q.substitute_qm(2), series(2, 1, &[1, 0]));
        let e2 = series(0, 1, &[1, -24, -72, -96]);
        let e2_2 = e2.substitute_qm(2);
        assert_eq!(e2_2.prec(), 8);
        assert_eq!(e2_2.coeff_int(2).unwrap(), rat_i(-24));
        assert_eq!(e2_2.coeff_int(4).unwrap(), rat_i(-72));
        assert_eq!(e2_2.coeff_int(3).unwrap(), rat_i(0));
        assert_eq!(e2.substitute_qm(1), e2);
        // substitute_qm(substitute_qm(f,a),b) = substitute_qm(f,ab)
        assert_eq!(e2.substitute_qm(2).substitute_qm(3), e2.substitute_qm(6));
    }

    #[test]
    fn coefficient_errors() {
        let delta_head = series(1, 1, &[1, -24, 252]);
        assert_eq!(delta_head.coeff_int(3).unwrap(), rat_i(252));
        assert_eq!(delta_head.coeff_int(0).unwrap(), rat_i(0));
        assert!(matches!(
            delta_head.coefficient(&rat(1, 2)),
            Err(Error::OutOfGrid(_))
        ));
        assert!(matches!(
            delta_head.coeff_int(4),
            Err(Error::OutOfPrecision(_))
        ));
    }

    #[test]
    fn normalization_compresses_grids() {
        // Support on every 24th slot of the 1/24 grid → integer grid.
        let mut coeffs = vec![Rational::zero(); 49];
        coeffs[0] = rat_i(1);
        coeffs[24] = rat_i(-24);
        coeffs[48] = rat_i(252);
        let f = QExp::from_parts(24, 24, coeffs).unwrap();
        let n = f.normalized();
        assert_eq!(n.offset_num(), 1);
        assert_eq!(n.offset_den(), 1);
        assert_eq!(n.prec(), 3);
        assert_eq!(f, series(1, 1, &[1, -24, 252]));
    }

    #[test]
    fn equality_ignores_leading_zero_padding() {
        let padded = series(0, 1, &[0, 0, 5, 6]);
        let tight = series(2, 1, &[5, 6]);
        assert_eq!(padded, tight);
        // Different window ends are different truncated series.
        assert_ne!(series(0, 1, &[1, 2]), series(0, 1, &[1, 2, 3]));
    }

    #[test]
    fn eta_heads() {
        let eta = pentagonal_eta(16);
        for (e, want) in [(0, 1), (1, -1), (2, -1), (3, 0), (5, 1), (7, 1), (12, -1), (15, -1)] {
            let exp = rat(24 * e + 1, 24);
            assert_eq!(eta.coefficient(&exp).unwrap(), rat_i(want), "η at q^{e}+1/24");
        }
        let cube = jacobi_eta_cube(16);
        for (e, want) in [(0, 1), (1, -3), (3, 5), (6, -7), (10, 9), (15, -11), (2, 0)] {
            let exp = rat(8 * e + 1, 8);
            assert_eq!(cube.coefficient(&exp).unwrap(), rat_i(want), "η³ at q^{e}+1/8");
        }
    }

    #[test]
    fn eta_quotient_delta() {
        let delta = eta_quotient(&[(1, 24)], 8).unwrap();
        assert_eq!(delta.offset_den(), 1);
        let expect = [(1, 1), (2, -24), (3, 252), (4, -1472), (5, 4830), (6, -6048)];
        for (e, want) in expect {
            assert_eq!(delta.coeff_int(e).unwrap(), rat_i(want), "Δ at q^{e}");
        }
    }

    #[test]
    fn eta_power_consistency() {
        let quotient = eta_quotient(&[(1, 24)], 30).unwrap();
        let from_eta = pentagonal_eta(30).pow(24);
        let from_cube = jacobi_eta_cube(30).pow(8);
        assert_eq!(quotient, from_eta.truncated(24 * 30).normalized());
        assert_eq!(quotient, from_cube.truncated(8 * 30).normalized());
    }

    #[test]
    fn partition_values() {
        let p = partition_series(30);
        for (n, want) in [(0, 1), (1, 1), (2, 2), (3, 3), (4, 5), (5, 7), (10, 42), (20, 627)] {
            assert_eq!(p.coeff_int(n).unwrap(), rat_i(want), "p({n})");
        }
    }

    #[test]
    fn partition_identity() {
        assert!(partition_identity_check(120));
    }

    #[test]
    fn pochhammer_identities() {
        for a in [
            PochhammerA::One,
            PochhammerA::NegOne,
            PochhammerA::NegInvQ,
            PochhammerA::SqrtQ,
            PochhammerA::NegSqrtQ,
        ] {
            assert!(pochhammer_identity_check(a, 60), "{a:?}");
        }
    }

    #[test]
    fn triple_product() {
        assert!(triple_product_check(2, 5));
        assert!(triple_product_check(8, 40));
        assert!(!triple_product_agrees(2, 12, true));
    }

    #[test]
    fn json_round_trip() {
        let f = QExp::from_parts(-1, 24, vec![rat_i(1), rat(-691, 2730), rat_i(0)]).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.contains("\"offset_num\":-1"));
        assert!(text.contains("\"prec\":3"));
        assert!(text.contains("-691/2730"));
        let back: QExp = serde_json::from_str(&text).unwrap();
        assert_eq!(back.offset_num(), -1);
        assert_eq!(back.offset_den(), 24);
        assert_eq!(back.coeffs(), f.coeffs());
        // Bad grids and inconsistent prec are rejected.
        assert!(serde_json::from_str::<QExp>(
            "{\"offset_num\":0,\"offset_den\":5,\"prec\":1,\"coeffs\":[\"1\"]}"
        )
        .is_err());
        assert!(serde_json::from_str::<QExp>(
            "{\"offset_num\":0,\"offset_den\":1,\"prec\":2,\"coeffs\":[\"1\"]}"
        )
        .is_err());
    }
}
