//! Named modular-form constructors and exact identity machinery.
//!
//! Everything here is exact: Eisenstein series, Δ, θ, j, monomial bases of
//! `M_k(SL2(Z))`, the Serre derivative, Rankin–Cohen brackets, the Siegel
//! constant-term relation, Γ0(4) Eisenstein series, sums-of-squares counts,
//! and eta–theta identities, all as [`QExp`] computations over `Q`.
//!
//! Constructors take a `prec` argument counting the known coefficients from
//! the form's natural leading exponent (0 for forms with constant term, 1
//! for Δ, −1 for j).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{
    bernoulli, isqrt, sigma_big, sigma_twisted, sigma_twisted_star, KroneckerLabel,
};
use crate::dims::dim_mk_level1;
use crate::qexp::{eta_quotient, QExp};
use crate::{rat, rat_i, Error, Rational, Result};

/// Weight/level/character bookkeeping attached to a form.
///
/// `weight2` is twice the weight so half-integral weights stay exact
/// (θ has `weight2 = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormDesc {
    pub weight2: i64,
    pub level: u64,
    pub character: KroneckerLabel,
    pub cuspidal: bool,
}

impl FormDesc {
    pub fn level1(weight2: i64, cuspidal: bool) -> Self {
        FormDesc { weight2, level: 1, character: KroneckerLabel(0), cuspidal }
    }

    /// The weight as an exact rational.
    pub fn weight(&self) -> Rational {
        rat(self.weight2, 2)
    }
}

/// A q-expansion together with its name and [`FormDesc`].
#[derive(Debug, Clone, PartialEq)]
pub struct NamedForm {
    pub name: String,
    pub desc: FormDesc,
    pub series: QExp,
    /// True only for E_2, which transforms with the extra affine term.
    pub quasimodular: bool,
}

fn constant_term(series: &QExp) -> Rational {
    let end = series.offset_num() + series.prec() as i64;
    if series.offset_num() <= 0 && end > 0 {
        series.coeff_int(0).expect("exponent 0 lies inside the window")
    } else {
        Rational::zero()
    }
}

impl NamedForm {
    /// Bundles a series with its bookkeeping, enforcing the two structural
    /// invariants: at least two known coefficients, and a vanishing constant
    /// term whenever the form is flagged cuspidal.
    pub fn new(name: impl Into<String>, desc: FormDesc, series: QExp) -> Self {
        assert!(series.prec() >= 2, "a named form needs at least two known coefficients");
        if desc.cuspidal {
            assert!(
                constant_term(&series).is_zero(),
                "cuspidal forms must have zero constant term"
            );
        }
        NamedForm { name: name.into(), desc, series, quasimodular: false }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NamedFormRepr {
    name: String,
    weight2: i64,
    level: u64,
    character: i64,
    cuspidal: bool,
    series: QExp,
}

impl Serialize for NamedForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NamedFormRepr {
            name: self.name.clone(),
            weight2: self.desc.weight2,
            level: self.desc.level,
            character: self.desc.character.0,
            cuspidal: self.desc.cuspidal,
            series: self.series.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NamedForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = NamedFormRepr::deserialize(d)?;
        if r.level == 0 {
            return Err(D::Error::custom("level must be positive"));
        }
        let character = KroneckerLabel::new(r.character).map_err(D::Error::custom)?;
        let quasimodular = r.name == "E2";
        Ok(NamedForm {
            name: r.name,
            desc: FormDesc {
                weight2: r.weight2,
                level: r.level,
                character,
                cuspidal: r.cuspidal,
            },
            series: r.series,
            quasimodular,
        })
    }
}

/// `E_k = 1 − (2k/B_k) Σ σ_{k−1}(n) qⁿ` for even `k ≥ 4`.
pub fn eisenstein_e(k: i64, prec: usize) -> Result<NamedForm> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::BadWeight(k));
    }
    let factor = rat_i(-2 * k) / bernoulli(k as u32);
    let mut coeffs = vec![Rational::zero(); prec.max(2)];
    coeffs[0] = Rational::one();
    for (n, slot) in coeffs.iter_mut().enumerate().skip(1) {
        *slot = &factor * Rational::from(sigma_big(k as u32 - 1, n as u64));
    }
    let series = QExp::from_parts(0, 1, coeffs)?;
    Ok(NamedForm::new(format!("E{k}"), FormDesc::level1(2 * k, false), series))
}

/// The quasi-modular `E_2 = 1 − 24 Σ σ_1(n) qⁿ`.
pub fn eisenstein_e2(prec: usize) -> NamedForm {
    let mut coeffs = vec![Rational::zero(); prec.max(2)];
    coeffs[0] = Rational::one();
    for (n, slot) in coeffs.iter_mut().enumerate().skip(1) {
        *slot = rat_i(-24) * Rational::from(sigma_big(1, n as u64));
    }
    let series = QExp::from_parts(0, 1, coeffs).expect("integer grid");
    let mut f = NamedForm::new("E2", FormDesc::level1(4, false), series);
    f.quasimodular = true;
    f
}

/// How to expand Δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaMethod {
    /// `q ∏ (1−qⁿ)^{24}` via the pentagonal-number series.
    Eta24,
    /// `(E_4³ − E_6²)/1728`.
    E4E6,
    /// The convolution recursion `(n−1)τ(n) = −24 Σ σ_1(m) τ(n−m)`.
    Recursion,
}

/// The discriminant form Δ with coefficients `τ(1..=prec)`.
pub fn delta(prec: usize, method: DeltaMethod) -> NamedForm {
    let prec = prec.max(2);
    let series = match method {
        DeltaMethod::Eta24 => crate::qexp::pentagonal_eta(prec).pow(24).normalized(),
        DeltaMethod::E4E6 => {
            let e4 = eisenstein_e(4, prec + 1).expect("valid weight").series;
            let e6 = eisenstein_e(6, prec + 1).expect("valid weight").series;
            e4.pow(3).sub(&e6.pow(2)).scale(&rat(1, 1728)).normalized()
        }
        DeltaMethod::Recursion => {
            let sig: Vec<BigInt> = (0..prec as u64).map(|m| sigma_big(1, m.max(1))).collect();
            let mut tau = vec![BigInt::zero(); prec + 1];
            tau[1] = BigInt::one();
            for n in 2..=prec {
                let mut acc = BigInt::zero();
                for m in 1..n {
                    acc += &sig[m] * &tau[n - m];
                }
                acc *= -24;
                let nm1 = BigInt::from(n as i64 - 1);
                assert!((&acc % &nm1).is_zero(), "recursion must divide exactly");
                tau[n] = acc / nm1;
            }
            let coeffs = tau[1..].iter().map(|t| Rational::from(t.clone())).collect();
            QExp::from_parts(1, 1, coeffs).expect("integer grid")
        }
    };
    NamedForm::new("Delta", FormDesc::level1(24, true), series)
}

/// The modular invariant `j = E_4³/Δ`, a Laurent series from `q^{−1}`.
pub fn jfunction(prec: usize) -> NamedForm {
    let p = prec.max(2) + 2;
    let e4 = eisenstein_e(4, p).expect("valid weight").series;
    let d = delta(p, DeltaMethod::Eta24).series;
    let series = e4.pow(3).div(&d).expect("Δ has unit leading coefficient").truncated(prec.max(2));
    NamedForm::new("j", FormDesc::level1(0, false), series)
}

fn theta_character(m: u64) -> KroneckerLabel {
    if m % 4 == 2 {
        KroneckerLabel(-4)
    } else {
        KroneckerLabel(0)
    }
}

/// `θ = Σ_{n∈Z} q^{n²} = 1 + 2q + 2q⁴ + 2q⁹ + ⋯`.
pub fn theta(prec: usize) -> NamedForm {
    let prec = prec.max(2);
    let mut coeffs = vec![Rational::zero(); prec];
    coeffs[0] = Rational::one();
    let mut n = 1u64;
    while n * n < prec as u64 {
        coeffs[(n * n) as usize] = rat_i(2);
        n += 1;
    }
    let series = QExp::from_parts(0, 1, coeffs).expect("integer grid");
    NamedForm::new(
        "theta",
        FormDesc { weight2: 1, level: 4, character: theta_character(1), cuspidal: false },
        series,
    )
}

/// `θ^m`; its coefficients count representations as sums of `m` squares.
pub fn theta_power(m: u64, prec: usize) -> NamedForm {
    assert!(m >= 1, "exponent must be positive");
    let base = theta(prec);
    let series = if m == 1 { base.series } else { base.series.pow(m) };
    NamedForm::new(
        format!("theta^{m}"),
        FormDesc {
            weight2: m as i64,
            level: 4,
            character: theta_character(m),
            cuspidal: false,
        },
        series,
    )
}

fn monomial_name(a: u32, b: u32) -> String {
    let piece = |base: &str, e: u32| match e {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{e}"),
    };
    let s = format!("{}{}", piece("E4", a), piece("E6", b));
    if s.is_empty() { "1".into() } else { s }
}

/// Exponent pairs `(a, b)` with `4a + 6b = k`, `a` descending.
fn monomial_exponents(k: i64) -> Result<Vec<(u32, u32)>> {
    if k < 0 || k % 2 != 0 {
        return Err(Error::BadWeight(k));
    }
    let mut out = Vec::new();
    let mut a = k / 4;
    while a >= 0 {
        let rem = k - 4 * a;
        if rem % 6 == 0 {
            out.push((a as u32, (rem / 6) as u32));
        }
        a -= 1;
    }
    Ok(out)
}

/// Monomial basis `E_4^a E_6^b` of `M_k(SL2(Z))`, `a` descending.
pub fn mk_basis(k: i64, prec: usize) -> Result<Vec<NamedForm>> {
    let exps = monomial_exponents(k)?;
    let prec = prec.max(2);
    let e4 = eisenstein_e(4, prec)?.series;
    let e6 = eisenstein_e(6, prec)?.series;
    let basis: Vec<NamedForm> = exps
        .into_iter()
        .map(|(a, b)| {
            let series = e4.pow(a as u64).mul(&e6.pow(b as u64));
            NamedForm::new(monomial_name(a, b), FormDesc::level1(2 * k, false), series)
        })
        .collect();
    debug_assert_eq!(basis.len() as u64, dim_mk_level1(k)?, "basis size must match dimension");
    Ok(basis)
}

/// Basis `Δ · mk_basis(k−12)` of `S_k(SL2(Z))`.
pub fn sk_basis(k: i64, prec: usize) -> Result<Vec<NamedForm>> {
    if k < 0 || k % 2 != 0 {
        return Err(Error::BadWeight(k));
    }
    if k < 12 {
        return Ok(Vec::new());
    }
    let prec = prec.max(2);
    let d = delta(prec, DeltaMethod::Eta24).series;
    let basis: Vec<NamedForm> = mk_basis(k - 12, prec)?
        .into_iter()
        .map(|m| {
            let name = if m.name == "1" {
                "Delta".to_string()
            } else {
                format!("Delta*{}", m.name)
            };
            NamedForm::new(name, FormDesc::level1(2 * k, true), d.mul(&m.series))
        })
        .collect();
    debug_assert_eq!(
        basis.len() as u64,
        crate::dims::dim_sk_level1(k)?,
        "basis size must match dimension"
    );
    Ok(basis)
}

/// Coefficient of `f` at grid exponent `e`, treating off-grid exponents
/// below the window end as exact zeros.
fn coefficient_or_zero(f: &QExp, e: &Rational) -> Rational {
    match f.coefficient(e) {
        Ok(c) => c,
        Err(Error::OutOfGrid(_)) => Rational::zero(),
        Err(err) => panic!("coefficient lookup beyond window: {err}"),
    }
}

/// Exact coordinates of `f` in the span of `basis`.
///
/// Solves the linear system over all coefficients the inputs share;
/// requires at least `len(basis) + 1` shared coefficients and verifies the
/// whole window, so success certifies equality to the available precision.
pub fn to_basis(f: &NamedForm, basis: &[NamedForm]) -> Result<Vec<Rational>> {
    let n = basis.len();
    if n == 0 {
        return if f.series.is_zero_series() { Ok(Vec::new()) } else { Err(Error::NotInSpan) };
    }
    let all: Vec<&QExp> = std::iter::once(&f.series).chain(basis.iter().map(|b| &b.series)).collect();
    let den = all.iter().map(|s| s.offset_den() as i64).fold(1i64, num_integer::lcm);
    // Shared window as multiples of 1/den.
    let start = all
        .iter()
        .map(|s| s.offset_num() as i128 * (den / s.offset_den() as i64) as i128)
        .min()
        .unwrap();
    let end = all
        .iter()
        .map(|s| (s.offset_num() + s.prec() as i64) as i128 * (den / s.offset_den() as i64) as i128)
        .min()
        .unwrap();
    let rows = (end - start).max(0) as usize;
    if rows < n + 1 {
        return Err(Error::InsufficientPrecision { needed: n + 1, have: rows });
    }
    let mut mat: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for t in 0..rows {
        let e = Rational::new(BigInt::from(start + t as i128), BigInt::from(den));
        let mut row: Vec<Rational> =
            basis.iter().map(|b| coefficient_or_zero(&b.series, &e)).collect();
        row.push(coefficient_or_zero(&f.series, &e));
        mat.push(row);
    }
    // Gaussian elimination over Q.
    let mut pivot_rows = Vec::with_capacity(n);
    let mut r = 0usize;
    for col in 0..n {
        let Some(p) = (r..rows).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][col].recip();
        for x in mat[r][col..].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][col].is_zero() {
                let factor = mat[i][col].clone();
                for c in col..=n {
                    let sub = &factor * &mat[r][c];
                    mat[i][c] -= sub;
                }
            }
        }
        pivot_rows.push((r, col));
        r += 1;
    }
    if pivot_rows.len() < n {
        return Err(Error::BadInput("basis is linearly dependent over the window".into()));
    }
    // Any nonzero residual row means f is not in the span.
    if mat[r..].iter().any(|row| !row[n].is_zero()) {
        return Err(Error::NotInSpan);
    }
    let mut coords = vec![Rational::zero(); n];
    for (row, col) in pivot_rows {
        coords[col] = mat[row][n].clone();
    }
    Ok(coords)
}

/// `ζ(2m)/π^{2m}` as an exact rational: `(−1)^{m+1} B_{2m} 2^{2m−1}/(2m)!`.
fn zeta_ratio(m: u32) -> Rational {
    let fact: BigInt = (1..=2 * m as u64).map(BigInt::from).product();
    let sign = if m % 2 == 1 { 1 } else { -1 };
    bernoulli(2 * m) * rat_i(sign) * Rational::new(BigInt::one() << (2 * m - 1), fact)
}

type MonoPoly = BTreeMap<(u32, u32), Rational>;

fn mono_mul(p: &MonoPoly, q: &MonoPoly) -> MonoPoly {
    let mut out = MonoPoly::new();
    for ((a1, b1), c1) in p {
        for ((a2, b2), c2) in q {
            let slot = out.entry((a1 + a2, b1 + b2)).or_insert_with(Rational::zero);
            *slot += c1 * c2;
        }
    }
    out
}

/// Writes `E_k` as an exact polynomial in `E_4`, `E_6` by running the
/// weight recursion
/// `(m−3)(2m−1)(2m+1) G_{2m} = 3 Σ_{j=2}^{m−2} (2j−1)(2(m−j)−1) G_{2j} G_{2(m−j)}`
/// on normalized series (G_{2m} = 2 ζ(2m) E_{2m}, with ζ(2m)/π^{2m}
/// rational via Bernoulli numbers).
///
/// Terms come back as `(a, b, coeff)` for `coeff · E_4^a E_6^b`, `a`
/// descending — the same order as [`mk_basis`].
pub fn eisenstein_poly_in_e4e6(k: i64) -> Result<Vec<(u32, u32, Rational)>> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::BadWeight(k));
    }
    let m_top = (k / 2) as u32;
    let mut polys: Vec<MonoPoly> = vec![MonoPoly::new(); (m_top + 1).max(4) as usize];
    polys[2].insert((1, 0), Rational::one());
    polys[3].insert((0, 1), Rational::one());
    let z: Vec<Rational> = (0..=m_top).map(|m| if m >= 2 { zeta_ratio(m) } else { Rational::zero() }).collect();
    for m in 4..=m_top {
        let mut acc = MonoPoly::new();
        for j in 2..=(m - 2) {
            let w = rat_i(((2 * j - 1) * (2 * (m - j) - 1)) as i64) * &z[j as usize]
                * &z[(m - j) as usize];
            for (mono, c) in mono_mul(&polys[j as usize], &polys[(m - j) as usize]) {
                let slot = acc.entry(mono).or_insert_with(Rational::zero);
                *slot += c * &w;
            }
        }
        let factor = rat_i(6)
            / (&z[m as usize]
                * rat_i(((m - 3) as i64) * (2 * m as i64 - 1) * (2 * m as i64 + 1)));
        for c in acc.values_mut() {
            *c *= &factor;
        }
        polys[m as usize] = acc;
    }
    let mut terms: Vec<(u32, u32, Rational)> = polys[m_top as usize]
        .iter()
        .map(|(&(a, b), c)| (a, b, c.clone()))
        .collect();
    terms.sort_by(|x, y| y.0.cmp(&x.0));
    Ok(terms)
}

/// Evaluates a `(a, b, coeff)` polynomial in `E_4`, `E_6` as a q-expansion.
pub fn eval_e4e6_poly(terms: &[(u32, u32, Rational)], prec: usize) -> QExp {
    let prec = prec.max(2);
    let e4 = eisenstein_e(4, prec).expect("valid weight").series;
    let e6 = eisenstein_e(6, prec).expect("valid weight").series;
    let mut acc = QExp::zero(prec);
    for (a, b, c) in terms {
        acc = acc.add(&e4.pow(*a as u64).mul(&e6.pow(*b as u64)).scale(c));
    }
    acc
}

/// Checks `σ_7(n) = σ_3(n) + 120 Σ_{m=1}^{n−1} σ_3(m) σ_3(n−m)` for all
/// `n ≤ nmax`.
pub fn sigma7_identity_check(nmax: u64) -> bool {
    let s3: Vec<BigInt> = (0..=nmax).map(|n| if n == 0 { BigInt::zero() } else { sigma_big(3, n) }).collect();
    for n in 1..=nmax as usize {
        let mut acc = BigInt::zero();
        for m in 1..n {
            acc += &s3[m] * &s3[n - m];
        }
        if sigma_big(7, n as u64) != &s3[n] + 120 * acc {
            return false;
        }
    }
    true
}

/// The Serre derivative `D(f) − (k/12) E_2 f`, modular of weight `k+2`.
pub fn serre_derivative(f: &NamedForm) -> Result<NamedForm> {
    if f.quasimodular {
        return Err(Error::BadInput(format!(
            "{} is only quasi-modular; its Serre derivative is not defined here",
            f.name
        )));
    }
    let p = f.series.prec();
    let window_end = (f.series.offset_num() + p as i64).max(2) as usize;
    let e2 = eisenstein_e2(window_end).series;
    let k12 = f.desc.weight() / rat_i(12);
    let series = f.series.qderive().sub(&e2.mul(&f.series).scale(&k12));
    Ok(NamedForm {
        name: format!("SerreD({})", f.name),
        desc: FormDesc {
            weight2: f.desc.weight2 + 4,
            level: f.desc.level,
            character: f.desc.character,
            cuspidal: f.desc.cuspidal,
        },
        series,
        quasimodular: false,
    })
}

fn combined_character(d1: KroneckerLabel, d2: KroneckerLabel) -> KroneckerLabel {
    match (d1.0, d2.0) {
        (0, d) | (d, 0) => KroneckerLabel(d),
        (a, b) if a == b => KroneckerLabel(0),
        (a, b) => KroneckerLabel(a * b),
    }
}

/// First Rankin–Cohen bracket `k₂ f₂ D(f₁) − k₁ f₁ D(f₂)`, a cusp form of
/// weight `k₁ + k₂ + 2`.
pub fn rc_bracket1(f1: &NamedForm, f2: &NamedForm) -> NamedForm {
    let k1 = f1.desc.weight();
    let k2 = f2.desc.weight();
    let t1 = f2.series.mul(&f1.series.qderive()).scale(&k2);
    let t2 = f1.series.mul(&f2.series.qderive()).scale(&k1);
    NamedForm::new(
        format!("[{},{}]_1", f1.name, f2.name),
        FormDesc {
            weight2: f1.desc.weight2 + f2.desc.weight2 + 4,
            level: num_integer::lcm(f1.desc.level, f2.desc.level),
            character: combined_character(f1.desc.character, f2.desc.character),
            cuspidal: true,
        },
        t1.sub(&t2),
    )
}

/// Binomial `C(x, m)` with rational top argument.
fn binom_rat(x: &Rational, m: u32) -> Rational {
    let mut v = Rational::one();
    for i in 0..m as i64 {
        v *= x - rat_i(i);
    }
    let fact: BigInt = (1..=m as u64).map(BigInt::from).product();
    v / Rational::from(fact)
}

/// Second Rankin–Cohen bracket
/// `C(k₂+1,2) D²(f₁) f₂ − C(k₁+1,1)C(k₂+1,1) D(f₁) D(f₂) + C(k₁+1,2) f₁ D²(f₂)`,
/// a cusp form of weight `k₁ + k₂ + 4`. Weights may be half-integral
/// (`[θ,θ]₂` is a multiple of the spherical form `f₅`).
pub fn rc_bracket2(f1: &NamedForm, f2: &NamedForm) -> NamedForm {
    let k1p = f1.desc.weight() + rat_i(1);
    let k2p = f2.desc.weight() + rat_i(1);
    let a = binom_rat(&k2p, 2);
    let b = -(&k1p * &k2p);
    let c = binom_rat(&k1p, 2);
    let d1 = f1.series.qderive();
    let d2 = f2.series.qderive();
    let series = d1
        .qderive()
        .mul(&f2.series)
        .scale(&a)
        .add(&d1.mul(&d2).scale(&b))
        .add(&f1.series.mul(&d2.qderive()).scale(&c));
    NamedForm::new(
        format!("[{},{}]_2", f1.name, f2.name),
        FormDesc {
            weight2: f1.desc.weight2 + f2.desc.weight2 + 8,
            level: num_integer::lcm(f1.desc.level, f2.desc.level),
            character: combined_character(f1.desc.character, f2.desc.character),
            cuspidal: true,
        },
        series,
    )
}

/// `τ(n)` through the divisor-sum identity
/// `τ(n) = (n/12)(5σ_3(n) + 7σ_5(n)) + 70 Σ_{m=1}^{n−1} (2n − 5m) σ_3(m) σ_5(n−m)`.
pub fn tau_sigma_formula_components(n: u64) -> Rational {
    let main = rat(n as i64, 12)
        * Rational::from(5 * sigma_big(3, n) + 7 * sigma_big(5, n));
    let mut tail = BigInt::zero();
    for m in 1..n {
        tail += BigInt::from(2 * n as i64 - 5 * m as i64) * sigma_big(3, m) * sigma_big(5, n - m);
    }
    main + Rational::from(70 * tail)
}

/// Laurent expansion of `E_{12r−k+2}/Δ^r` where `r = dim M_k(SL2(Z))`
/// (weight `2 − k`), with `prec` coefficients from `q^{−r}`. The leading
/// coefficient is 1 and the constant coefficient is nonzero.
pub fn siegel_coeffs(k: i64, prec: usize) -> Result<QExp> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::BadWeight(k));
    }
    let r = dim_mk_level1(k)? as usize;
    let w = 12 * r as i64 - k + 2;
    let p = prec.max(r + 2) + r + 2;
    let num = if w == 0 {
        QExp::one(p)
    } else {
        eisenstein_e(w, p)?.series
    };
    let series = num
        .div(&delta(p, DeltaMethod::Eta24).series.pow(r as u64))?
        .truncated(prec);
    assert!(series.coeff_int(-(r as i64)).expect("leading term in window").is_one());
    if prec > r {
        assert!(!series.coeff_int(0).expect("constant in window").is_zero());
    }
    Ok(series)
}

/// Checks the Siegel linear relation `Σ_{0≤n≤r} c_{−n} a(n) = 0` satisfied
/// by every `f ∈ M_k(SL2(Z))`, where the `c_i` come from [`siegel_coeffs`].
pub fn siegel_relation_check(f: &NamedForm) -> Result<bool> {
    if f.desc.level != 1 || f.desc.weight2 % 4 != 0 {
        return Err(Error::BadInput("the constant-term relation needs even weight at level 1".into()));
    }
    let k = f.desc.weight2 / 2;
    let r = dim_mk_level1(k)? as i64;
    let window_end = f.series.offset_num() + f.series.prec() as i64;
    if window_end < r + 1 {
        return Err(Error::InsufficientPrecision {
            needed: (r + 1) as usize,
            have: window_end.max(0) as usize,
        });
    }
    let c = siegel_coeffs(k, (r + 1) as usize)?;
    let mut acc = Rational::zero();
    for n in 0..=r {
        acc += c.coeff_int(-n)? * f.series.coeff_int(n)?;
    }
    Ok(acc.is_zero())
}

/// The weight-2 form `N E_2(Nτ) − E_2(τ)` on Γ0(N); its constant term is
/// `N − 1` and its `q` coefficient is `+24` for every `N ≥ 2`.
pub fn weight2_level_eisenstein(n: u64, prec: usize) -> NamedForm {
    assert!(n >= 2, "the combination is only a modular form for N ≥ 2");
    let e2 = eisenstein_e2(prec).series;
    let series = e2.substitute_qm(n as u32).scale(&rat_i(n as i64)).sub(&e2);
    NamedForm::new(
        format!("E2_level{n}"),
        FormDesc { weight2: 4, level: n, character: KroneckerLabel(0), cuspidal: false },
        series,
    )
}

/// The three Γ0(4) Eisenstein series built from χ_{−4}-twisted divisor sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gamma04Series {
    /// Weight 1: `1 + 4 Σ σ_0^{(−4)}(n) qⁿ` (the θ² expansion).
    W1,
    /// Weight 3: `1 − 4 Σ σ_2^{(−4)}(n) qⁿ`.
    F1,
    /// Weight 3: `Σ σ_2^{(−4,*)}(n) qⁿ`.
    F2,
}

/// Eisenstein series on Γ0(4) with character χ_{−4}.
pub fn gamma04_eisenstein(which: Gamma04Series, prec: usize) -> NamedForm {
    let prec = prec.max(2);
    let chi = KroneckerLabel(-4);
    let mut coeffs = vec![Rational::zero(); prec];
    let (name, weight2) = match which {
        Gamma04Series::W1 => ("W1", 2),
        Gamma04Series::F1 => ("F1", 6),
        Gamma04Series::F2 => ("F2", 6),
    };
    for (n, slot) in coeffs.iter_mut().enumerate() {
        *slot = match which {
            Gamma04Series::W1 if n == 0 => Rational::one(),
            Gamma04Series::W1 => Rational::from(4 * sigma_twisted(chi, 0, n as i64)),
            Gamma04Series::F1 if n == 0 => Rational::one(),
            Gamma04Series::F1 => Rational::from(-4 * sigma_twisted(chi, 2, n as i64)),
            Gamma04Series::F2 => Rational::from(sigma_twisted_star(chi, 2, n as i64)),
        };
    }
    let series = QExp::from_parts(0, 1, coeffs).expect("integer grid");
    NamedForm::new(
        name,
        FormDesc { weight2, level: 4, character: chi, cuspidal: false },
        series,
    )
}

fn sigma_at(k: u32, n: u64, d: u64) -> BigInt {
    if n % d == 0 && n > 0 {
        sigma_big(k, n / d)
    } else {
        BigInt::zero()
    }
}

/// Closed-form count of representations of `n` as a sum of `k ∈ {2,4,6,8}`
/// squares.
pub fn rk_formula(k: u32, n: u64) -> Result<i64> {
    if n == 0 {
        return match k {
            2 | 4 | 6 | 8 => Ok(1),
            _ => Err(Error::BadK(k)),
        };
    }
    let chi = KroneckerLabel(-4);
    let value: BigInt = match k {
        2 => 4 * sigma_twisted(chi, 0, n as i64),
        4 => 8 * (sigma_big(1, n) - 4 * sigma_at(1, n, 4)),
        6 => -4 * sigma_twisted(chi, 2, n as i64) + 16 * sigma_twisted_star(chi, 2, n as i64),
        8 => 16 * (sigma_big(3, n) - 2 * sigma_at(3, n, 2) + 16 * sigma_at(3, n, 4)),
        _ => return Err(Error::BadK(k)),
    };
    Ok(value.to_i64().expect("representation count fits in i64"))
}

/// Representation count by direct lattice enumeration (any `k ≥ 1`),
/// the oracle for [`rk_formula`].
pub fn rk_bruteforce(k: u32, n: u64) -> Result<i64> {
    if k == 0 {
        return Ok(if n == 0 { 1 } else { 0 });
    }
    let n = n as usize;
    let mut counts = vec![0i64; n + 1];
    // r_1
    counts[0] = 1;
    let mut x = 1usize;
    while x * x <= n {
        counts[x * x] = 2;
        x += 1;
    }
    for _ in 1..k {
        let mut next = vec![0i64; n + 1];
        for t in 0..=n {
            let mut acc = counts[t];
            let mut x = 1usize;
            while x * x <= t {
                acc += 2 * counts[t - x * x];
                x += 1;
            }
            next[t] = acc;
        }
        counts = next;
    }
    Ok(counts[n])
}

/// Verifies the decomposition of θ⁴ in the weight-2 Eisenstein basis of
/// Γ0(4) and the identities it carries:
/// `θ⁴ = α(2E_2(2τ)−E_2(τ)) + β(4E_2(4τ)−E_2(τ))` solved exactly, the
/// resulting `r_4(n) = 8(σ_1(n) − 4σ_1(n/4))` for `n ≤ min(200, prec−1)`,
/// and `θ⁶ = F_1 + 16 F_2`.
pub fn theta4_decomposition_check(prec: usize) -> Result<bool> {
    assert!(prec >= 4, "need at least the q³ coefficient");
    let th4 = theta_power(4, prec);
    let basis = [weight2_level_eisenstein(2, prec), weight2_level_eisenstein(4, prec)];
    let coords = to_basis(&th4, &basis)?;
    debug_assert_eq!(coords.len(), 2);
    // to_basis certified the series identity on the whole window; confirm
    // the closed-form count it implies term by term.
    for n in 1..=(200.min(prec as u64 - 1)) {
        if rat_i(rk_formula(4, n)?) != th4.series.coeff_int(n as i64)? {
            return Ok(false);
        }
    }
    let th6 = theta_power(6, prec);
    let f1 = gamma04_eisenstein(Gamma04Series::F1, prec);
    let f2 = gamma04_eisenstein(Gamma04Series::F2, prec);
    Ok(th6.series == f1.series.add(&f2.series.scale(&rat_i(16))))
}

/// `q ↦ −q` on an integer-grid series: negates odd-exponent coefficients.
fn substitute_neg_q(f: &QExp) -> Result<QExp> {
    let g = f.normalized();
    if g.offset_den() != 1 {
        return Err(Error::BadInput("q ↦ −q needs an integer exponent grid".into()));
    }
    let coeffs = g
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if (g.offset_num() + i as i64).rem_euclid(2) == 1 {
                -c.clone()
            } else {
                c.clone()
            }
        })
        .collect();
    QExp::from_parts(g.offset_num(), 1, coeffs)
}

/// Verifies both eta-quotient expressions for θ:
/// `θ(τ) = η²(τ+1/2)/η(2τ+1) = η⁵(2τ)/(η²(τ) η²(4τ))`.
///
/// The second equality is a direct exact series identity. For the first,
/// the half-period shift sends `q ↦ −q` inside the Euler products while the
/// outer roots of unity cancel against `η(2τ+1) = e^{πi/12} η(2τ)`, so the
/// relation reduces to the exact rational statement
/// `θ(τ) = [η²(τ)/η(2τ)](−q)` — no cyclotomic coefficients needed.
pub fn eta_theta_relation_check(prec: usize) -> Result<bool> {
    assert!(prec >= 8, "too few terms to be meaningful");
    let th = theta(prec).series;
    let second = eta_quotient(&[(2, 5), (1, -2), (4, -2)], prec)?;
    let first_shifted = substitute_neg_q(&eta_quotient(&[(1, 2), (2, -1)], prec)?)?;
    let end = [&th, &second, &first_shifted]
        .iter()
        .map(|s| s.offset_num() + s.prec() as i64)
        .min()
        .unwrap()
        .max(0) as usize;
    let cut = |s: &QExp| s.truncated(end.saturating_sub(s.offset_num().max(0) as usize));
    Ok(cut(&second) == cut(&th) && cut(&first_shifted) == cut(&th))
}

/// The spherical theta series
/// `f_5 = Σ_{x,y∈Z} (x⁴ − 6x²y² + y⁴) q^{x²+y²} ∈ S_5(Γ0(4), χ_{−4})`.
pub fn spherical_theta_f5(prec: usize) -> NamedForm {
    let prec = prec.max(3);
    let mut coeffs = vec![Rational::zero(); prec];
    let m = isqrt(prec as u64 - 1) as i64;
    for x in -m..=m {
        for y in -m..=m {
            let n = (x * x + y * y) as usize;
            if n < prec {
                let p = x.pow(4) - 6 * x.pow(2) * y.pow(2) + y.pow(4);
                coeffs[n] += rat_i(p);
            }
        }
    }
    let series = QExp::from_parts(0, 1, coeffs).expect("integer grid");
    NamedForm::new(
        "f5",
        FormDesc { weight2: 10, level: 4, character: KroneckerLabel(-4), cuspidal: true },
        series,
    )
}

/// Symbolically applies the Laplacian `∂²/∂x² + ∂²/∂y²` to
/// `x⁴ − 6x²y² + y⁴` on its monomial coefficients and checks it vanishes —
/// the harmonicity that makes `f_5` a cusp form.
pub fn spherical_laplacian_check() -> bool {
    let poly: BTreeMap<(u32, u32), i64> = [((4, 0), 1), ((2, 2), -6), ((0, 4), 1)].into();
    let mut lap: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    for (&(i, j), &c) in &poly {
        if i >= 2 {
            *lap.entry((i - 2, j)).or_insert(0) += c * (i * (i - 1)) as i64;
        }
        if j >= 2 {
            *lap.entry((i, j - 2)).or_insert(0) += c * (j * (j - 1)) as i64;
        }
    }
    lap.values().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat_from_str;

    fn r(s: &str) -> Rational {
        rat_from_str(s).unwrap()
    }

    #[test]
    fn eisenstein_heads() {
        let e4 = eisenstein_e(4, 6).unwrap();
        assert_eq!(e4.series.coeff_int(0).unwrap(), rat_i(1));
        assert_eq!(e4.series.coeff_int(1).unwrap(), rat_i(240));
        assert_eq!(e4.series.coeff_int(2).unwrap(), rat_i(2160));
        let e6 = eisenstein_e(6, 4).unwrap();
        assert_eq!(e6.series.coeff_int(1).unwrap(), rat_i(-504));
        let e8 = eisenstein_e(8, 4).unwrap();
        assert_eq!(e8.series.coeff_int(1).unwrap(), rat_i(480));
        assert!(matches!(eisenstein_e(5, 4), Err(Error::BadWeight(5))));
        assert!(matches!(eisenstein_e(2, 4), Err(Error::BadWeight(2))));
    }

    #[test]
    fn e2_head() {
        let e2 = eisenstein_e2(4);
        assert!(e2.quasimodular);
        assert_eq!(e2.series.coeff_int(0).unwrap(), rat_i(1));
        assert_eq!(e2.series.coeff_int(1).unwrap(), rat_i(-24));
        assert_eq!(e2.series.coeff_int(2).unwrap(), rat_i(-72));
    }

    #[test]
    fn delta_three_ways() {
        let a = delta(80, DeltaMethod::Eta24);
        let b = delta(80, DeltaMethod::E4E6);
        let c = delta(80, DeltaMethod::Recursion);
        assert_eq!(a.series, b.series);
        assert_eq!(a.series, c.series);
        assert_eq!(a.series.coeff_int(4).unwrap(), rat_i(-1472));
        assert_eq!(a.series.coeff_int(6).unwrap(), rat_i(-6048));
        assert!(a.desc.cuspidal);
    }

    #[test]
    fn j_head() {
        let j = jfunction(5);
        assert_eq!(j.series.offset_num(), -1);
        assert_eq!(j.series.coeff_int(-1).unwrap(), rat_i(1));
        assert_eq!(j.series.coeff_int(0).unwrap(), rat_i(744));
        assert_eq!(j.series.coeff_int(1).unwrap(), rat_i(196884));
        assert_eq!(j.series.coeff_int(2).unwrap(), rat_i(21493760));
    }

    #[test]
    fn theta_heads() {
        let t = theta(10);
        assert_eq!(t.series.coeff_int(0).unwrap(), rat_i(1));
        assert_eq!(t.series.coeff_int(1).unwrap(), rat_i(2));
        assert_eq!(t.series.coeff_int(2).unwrap(), rat_i(0));
        assert_eq!(t.series.coeff_int(4).unwrap(), rat_i(2));
        assert_eq!(t.series.coeff_int(9).unwrap(), rat_i(2));
        assert_eq!(theta_power(4, 4).series.coeff_int(1).unwrap(), rat_i(8));
        assert_eq!(theta_power(6, 4).series.coeff_int(1).unwrap(), rat_i(12));
        assert_eq!(theta_power(4, 4).desc.character, KroneckerLabel(0));
        assert_eq!(theta_power(6, 4).desc.character, KroneckerLabel(-4));
    }

    #[test]
    fn bases_match_dimensions() {
        for k in (0..=40).step_by(2) {
            assert_eq!(
                mk_basis(k, 8).unwrap().len() as u64,
                dim_mk_level1(k).unwrap(),
                "M_{k}"
            );
            assert_eq!(
                sk_basis(k, 8).unwrap().len() as u64,
                crate::dims::dim_sk_level1(k).unwrap(),
                "S_{k}"
            );
        }
        assert!(mk_basis(2, 8).unwrap().is_empty());
        let m12 = mk_basis(12, 8).unwrap();
        assert_eq!(m12.len(), 2);
        assert_eq!(m12[0].name, "E4^3");
        assert_eq!(m12[1].name, "E6^2");
        let s12 = sk_basis(12, 20).unwrap();
        assert_eq!(s12.len(), 1);
        assert_eq!(s12[0].series, delta(20, DeltaMethod::Eta24).series);
    }

    #[test]
    fn coordinates_in_bases() {
        let e8 = eisenstein_e(8, 6).unwrap();
        assert_eq!(to_basis(&e8, &mk_basis(8, 6).unwrap()).unwrap(), vec![rat_i(1)]);

        let e12 = eisenstein_e(12, 8).unwrap();
        let coords = to_basis(&e12, &mk_basis(12, 8).unwrap()).unwrap();
        assert_eq!(coords, vec![r("441/691"), r("250/691")]);

        let d = delta(8, DeltaMethod::Eta24);
        let coords = to_basis(&d, &mk_basis(12, 8).unwrap()).unwrap();
        assert_eq!(coords, vec![r("1/1728"), r("-1/1728")]);

        // Not in span: perturb Δ's q² coefficient.
        let mut bad = d.series.coeffs().to_vec();
        bad[1] += rat_i(1);
        let fake = NamedForm::new("fake", FormDesc::level1(24, true), QExp::from_parts(1, 1, bad).unwrap());
        assert!(matches!(to_basis(&fake, &mk_basis(12, 8).unwrap()), Err(Error::NotInSpan)));

        // Too few shared coefficients.
        let short = NamedForm::new("short", FormDesc::level1(12, false), QExp::one(2));
        assert!(matches!(
            to_basis(&short, &mk_basis(12, 8).unwrap()),
            Err(Error::InsufficientPrecision { needed: 3, have: 2 })
        ));
    }

    #[test]
    fn eisenstein_polynomials() {
        assert_eq!(eisenstein_poly_in_e4e6(8).unwrap(), vec![(2, 0, rat_i(1))]);
        assert_eq!(eisenstein_poly_in_e4e6(10).unwrap(), vec![(1, 1, rat_i(1))]);
        assert_eq!(eisenstein_poly_in_e4e6(14).unwrap(), vec![(2, 1, rat_i(1))]);
        assert_eq!(
            eisenstein_poly_in_e4e6(12).unwrap(),
            vec![(3, 0, r("441/691")), (0, 2, r("250/691"))]
        );
        for k in (4..=24).step_by(2) {
            let poly = eisenstein_poly_in_e4e6(k).unwrap();
            assert_eq!(
                eval_e4e6_poly(&poly, 12),
                eisenstein_e(k, 12).unwrap().series,
                "E_{k}"
            );
        }
    }

    #[test]
    fn sigma7_identity_short() {
        assert!(sigma7_identity_check(60));
        assert_eq!(sigma_big(7, 2), BigInt::from(129));
    }

    #[test]
    fn serre_derivative_values() {
        let e4 = eisenstein_e(4, 8).unwrap();
        let e6 = eisenstein_e(6, 8).unwrap();
        let sd4 = serre_derivative(&e4).unwrap();
        assert_eq!(sd4.series, e6.series.scale(&r("-1/3")));
        assert_eq!(sd4.desc.weight2, 12);

        let sd6 = serre_derivative(&e6).unwrap();
        assert_eq!(sd6.series, eisenstein_e(4, 8).unwrap().series.pow(2).scale(&r("-1/2")));

        let d = delta(8, DeltaMethod::Eta24);
        assert!(serre_derivative(&d).unwrap().series.is_zero_series());

        assert!(serre_derivative(&eisenstein_e2(8)).is_err());
    }

    #[test]
    fn rankin_cohen_brackets() {
        let e4 = eisenstein_e(4, 12).unwrap();
        let e6 = eisenstein_e(6, 12).unwrap();
        let b1 = rc_bracket1(&e4, &e6);
        assert_eq!(b1.desc.weight2, 24);
        assert!(constant_term(&b1.series).is_zero());
        assert_eq!(b1.series, delta(11, DeltaMethod::Eta24).series.scale(&rat_i(3456)));
        assert!(rc_bracket1(&e4, &e4).series.is_zero_series());

        let th = theta(40);
        let b2 = rc_bracket2(&th, &th);
        let f5 = spherical_theta_f5(40);
        assert_eq!(b2.series, f5.series.scale(&r("3/8")));
    }

    #[test]
    fn tau_sigma_values() {
        assert_eq!(tau_sigma_formula_components(1), rat_i(1));
        assert_eq!(tau_sigma_formula_components(2), rat_i(-24));
        assert_eq!(tau_sigma_formula_components(3), rat_i(252));
        assert_eq!(tau_sigma_formula_components(6), rat_i(-6048));
    }

    #[test]
    fn siegel_relation() {
        let c12 = siegel_coeffs(12, 3).unwrap();
        assert_eq!(c12.coeff_int(-2).unwrap(), rat_i(1));
        for k in (4..=26).step_by(2) {
            let r = dim_mk_level1(k).unwrap() as usize;
            let c = siegel_coeffs(k, r + 1).unwrap();
            assert_eq!(c.coeff_int(-(r as i64)).unwrap(), rat_i(1), "k={k}");
            assert!(!c.coeff_int(0).unwrap().is_zero(), "k={k}");
        }
        assert!(siegel_relation_check(&delta(8, DeltaMethod::Eta24)).unwrap());
        assert!(siegel_relation_check(&eisenstein_e(12, 8).unwrap()).unwrap());
        assert!(siegel_relation_check(&eisenstein_e(4, 8).unwrap()).unwrap());
    }

    #[test]
    fn weight2_level_series() {
        let f = weight2_level_eisenstein(2, 6);
        assert_eq!(f.series.coeff_int(0).unwrap(), rat_i(1));
        assert_eq!(f.series.coeff_int(1).unwrap(), rat_i(24));
        assert_eq!(f.series.coeff_int(2).unwrap(), rat_i(24));
        let f4 = weight2_level_eisenstein(4, 6);
        assert_eq!(f4.series.coeff_int(0).unwrap(), rat_i(3));
        assert_eq!(f4.series.coeff_int(1).unwrap(), rat_i(24));
    }

    #[test]
    fn gamma04_heads() {
        assert_eq!(
            gamma04_eisenstein(Gamma04Series::W1, 4).series.coeff_int(1).unwrap(),
            rat_i(4)
        );
        assert_eq!(
            gamma04_eisenstein(Gamma04Series::F1, 4).series.coeff_int(1).unwrap(),
            rat_i(-4)
        );
        assert_eq!(
            gamma04_eisenstein(Gamma04Series::F2, 4).series.coeff_int(1).unwrap(),
            rat_i(1)
        );
    }

    #[test]
    fn sums_of_squares() {
        assert_eq!(rk_formula(4, 4).unwrap(), 24);
        assert_eq!(rk_formula(8, 2).unwrap(), 112);
        assert_eq!(rk_formula(2, 5).unwrap(), 8);
        assert!(matches!(rk_formula(3, 5), Err(Error::BadK(3))));
        assert_eq!(rk_bruteforce(3, 1).unwrap(), 6);
        for k in [2u32, 4, 6, 8] {
            for n in 0..=60 {
                assert_eq!(
                    rk_formula(k, n).unwrap(),
                    rk_bruteforce(k, n).unwrap(),
                    "k={k}, n={n}"
                );
            }
        }
    }

    #[test]
    fn theta_decompositions() {
        assert!(theta4_decomposition_check(64).unwrap());
        // The 2×2 solve pins θ⁴ = (1/3)(4E_2(4τ) − E_2(τ)) exactly.
        let th4 = theta_power(4, 24);
        let basis = [weight2_level_eisenstein(2, 24), weight2_level_eisenstein(4, 24)];
        assert_eq!(to_basis(&th4, &basis).unwrap(), vec![rat_i(0), r("1/3")]);
    }

    #[test]
    fn eta_theta_relations() {
        assert!(eta_theta_relation_check(64).unwrap());
        // Deliberate exponent mutation on the quotient must break it.
        let wrong = eta_quotient(&[(2, 5), (1, -2), (4, -1)], 32).unwrap();
        let th = theta(16).series;
        assert_ne!(wrong.truncated(16), th.truncated(16));
    }

    #[test]
    fn spherical_series() {
        let f5 = spherical_theta_f5(12);
        assert_eq!(f5.series.coeff_int(0).unwrap(), rat_i(0));
        assert_eq!(f5.series.coeff_int(1).unwrap(), rat_i(4));
        assert_eq!(f5.series.coeff_int(2).unwrap(), rat_i(-16));
        assert!(f5.desc.cuspidal);
        assert!(spherical_laplacian_check());
    }

    #[test]
    fn named_form_json_round_trip() {
        let d = delta(6, DeltaMethod::Eta24);
        let text = serde_json::to_string(&d).unwrap();
        assert!(text.contains("\"weight2\":24"));
        assert!(text.contains("\"cuspidal\":true"));
        let back: NamedForm = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);

        let e2 = eisenstein_e2(4);
        let back: NamedForm = serde_json::from_str(&serde_json::to_string(&e2).unwrap()).unwrap();
        assert!(back.quasimodular);
    }
}
