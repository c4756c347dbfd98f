//! Completed L-values, period polynomials and the Petersson norm of Δ.
//!
//! For a level-N cusp form F of even weight k the completed L-function
//! `Λ(s) = N^{s/2}(2π)^{-s}Γ(s)L(F,s)` unfolds into the rapidly convergent
//! sum `Σ a(n)·[G_s(x_n) + ε·i^k·G_{k-s}(x_n)]` with `x_n = 2πn/√N` and
//! `G_m(x) = Γ(m,x)/x^m`; the functional equation `Λ(k−s) = ε·i^k·Λ(s)`
//! is then visible term by term.

use super::bigfloat::{exp_real, pi, BigFloat, BigFloatC, EvalContext};
use super::report::CheckReport;
use crate::forms::{delta, DeltaMethod, NamedForm};
use crate::rat::{binomial, rat, rat_to_str};
use crate::{Error, Rational, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Extra decimal digits of headroom when truncating L-series tails.
const TAIL_MARGIN_DIGITS: f64 = 12.0;

fn factorial(n: u32) -> BigInt {
    (1..=u64::from(n)).fold(BigInt::one(), |acc, j| acc * j)
}

/// `G_m(x) = Γ(m,x)/x^m = (m−1)!·e^{−x}·(Σ_{j<m} x^j/j!)/x^m` for m ≥ 1.
fn g_upper(m: u32, x: &BigFloat, ctx: &EvalContext) -> BigFloat {
    assert!(m >= 1);
    let mut acc = BigFloat::one(ctx);
    let mut term = BigFloat::one(ctx);
    for j in 1..m {
        term = (&term * x).div_i64(j as i64);
        acc = &acc + &term;
    }
    let e = exp_real(&-x);
    &(&e * &acc).mul_int(&factorial(m - 1)) / &x.powi(m)
}

/// Number of series terms needed so the tail of `Σ n^κ e^{−an}` falls
/// below the working precision.
fn lseries_cutoff(kappa: f64, a: f64, digits: u32) -> usize {
    let t = (digits as f64 + TAIL_MARGIN_DIGITS) * std::f64::consts::LN_10;
    let mut n = 1.0f64;
    while a * n - kappa * n.ln() <= t {
        n += 1.0;
    }
    n as usize
}

/// Validates that `f` is a cusp form of even integral weight and returns
/// `(k, level)`.
fn lfunction_profile(f: &NamedForm) -> Result<(u32, u64)> {
    if !f.desc.cuspidal {
        return Err(Error::BadInput(format!(
            "{} is not cuspidal; the completed L-integral diverges",
            f.name
        )));
    }
    if f.desc.weight2 % 4 != 0 || f.desc.weight2 <= 0 {
        return Err(Error::BadWeight(f.desc.weight2));
    }
    Ok(((f.desc.weight2 / 2) as u32, f.desc.level))
}

fn coefficient_window(f: &NamedForm, last: usize) -> Result<()> {
    let have = f.series.prec();
    let end = f.series.offset_num() + have as i64;
    let den = i64::from(f.series.offset_den());
    if end <= last as i64 * den {
        let needed = (last as i64 * den - f.series.offset_num() + 1) as usize;
        return Err(Error::InsufficientSeriesPrecision { needed, have });
    }
    Ok(())
}

/// Completed L-value `Λ(s) = N^{s/2}(2π)^{-s}Γ(s)L(F,s)` at an integer
/// point `1 ≤ s ≤ k−1`, with sign `epsilon` (±1) in the functional
/// equation `Λ(k−s) = ε·(−1)^{k/2}·Λ(s)`.
pub fn lambda_level_n(
    f: &NamedForm,
    epsilon: i32,
    s: u32,
    ctx: &EvalContext,
) -> Result<BigFloat> {
    if epsilon != 1 && epsilon != -1 {
        return Err(Error::BadInput(format!("epsilon must be ±1, got {epsilon}")));
    }
    let (k, level) = lfunction_profile(f)?;
    if s < 1 || s > k - 1 {
        return Err(Error::BadRange { s: i64::from(s), max: i64::from(k) - 1 });
    }
    let sqrt_n = BigFloat::from_i64(level as i64, ctx).sqrt();
    let a = 2.0 * std::f64::consts::PI / (level as f64).sqrt();
    let last = lseries_cutoff(k as f64 / 2.0 + 1.0, a, ctx.precision_digits);
    coefficient_window(f, last)?;
    let sign = epsilon * if (k / 2) % 2 == 0 { 1 } else { -1 };
    let two_pi = pi(ctx).mul_i64(2);
    let mut total = BigFloat::zero(ctx);
    for n in 1..=last {
        let c = f.series.coeff_int(n as i64)?;
        if c.is_zero() {
            continue;
        }
        let x = &two_pi.mul_i64(n as i64) / &sqrt_n;
        let bracket = &g_upper(s, &x, ctx) + &g_upper(k - s, &x, ctx).mul_i64(i64::from(sign));
        total = &total + &(&BigFloat::from_rat(&c, ctx) * &bracket);
    }
    Ok(total)
}

/// Level-1 completed L-value `Λ(s) = (2π)^{-s}Γ(s)L(F,s)`; the sign in
/// the functional equation is forced to `(−1)^{k/2}`.
pub fn lambda_level1(f: &NamedForm, s: u32, ctx: &EvalContext) -> Result<BigFloat> {
    if f.desc.level != 1 {
        return Err(Error::BadN(f.desc.level));
    }
    lambda_level_n(f, 1, s, ctx)
}

/// Plain L-value `L(F,s) = Λ(s)·(2π)^s / ((s−1)!·N^{s/2})` at integer s.
pub fn l_value(f: &NamedForm, s: u32, ctx: &EvalContext) -> Result<BigFloat> {
    let lambda = lambda_level_n(f, 1, s, ctx)?;
    let (_, level) = lfunction_profile(f)?;
    let two_pi_s = pi(ctx).mul_i64(2).powi(s);
    let n_half_s = BigFloat::from_i64(level as i64, ctx).sqrt().powi(s);
    Ok(&(&lambda * &two_pi_s) / &(&n_half_s).mul_int(&factorial(s - 1)))
}

/// Central L-value `L(F, k/2)` of a level-1 cusp form by the truncated
/// exponential formula
/// `L(F,k/2) = (1+(−1)^{k/2})·Σ a(n)·n^{-k/2}·e^{−2πn}·P_{k/2}(2πn)`
/// with `P_m(X) = Σ_{j<m} X^j/j!`. Exactly zero when `k ≡ 2 (mod 4)`.
pub fn central_value(f: &NamedForm, ctx: &EvalContext) -> Result<BigFloat> {
    if f.desc.level != 1 {
        return Err(Error::BadN(f.desc.level));
    }
    let (k, _) = lfunction_profile(f)?;
    if k % 4 != 0 {
        return Ok(BigFloat::zero(ctx));
    }
    let m = k / 2;
    let a = 2.0 * std::f64::consts::PI;
    let last = lseries_cutoff(k as f64 / 2.0 + 1.0, a, ctx.precision_digits);
    coefficient_window(f, last)?;
    let two_pi = pi(ctx).mul_i64(2);
    let mut total = BigFloat::zero(ctx);
    for n in 1..=last {
        let c = f.series.coeff_int(n as i64)?;
        if c.is_zero() {
            continue;
        }
        let x = two_pi.mul_i64(n as i64);
        let mut p = BigFloat::one(ctx);
        let mut term = BigFloat::one(ctx);
        for j in 1..m {
            term = (&term * &x).div_i64(j as i64);
            p = &p + &term;
        }
        let weight = &exp_real(&-&x) * &p;
        let n_pow: BigInt = BigInt::from(n).pow(m);
        let scaled = &BigFloat::from_rat(&c, ctx) / &BigFloat::from_bigint(&n_pow, ctx);
        total = &total + &(&scaled * &weight);
    }
    Ok(total.mul_i64(2))
}

/// The eleven completed L-values of Δ against the rational period
/// vectors: odd `Λ(j)` against `ω₋ = Λ(3)`, even against `ω₊ = Λ(2)`.
pub struct ManinReport {
    pub omega_plus: BigFloat,
    pub omega_minus: BigFloat,
    pub checks: Vec<CheckReport>,
}

/// Ratio tolerance for the Manin-vector comparison.
const MANIN_TOL: i64 = -9;

fn ratio_report(name: &str, value: &BigFloat, omega: &BigFloat, expected: &Rational) -> CheckReport {
    let ratio = value / omega;
    let residual = (&ratio - &BigFloat::from_rat_b(expected, ratio.bits())).abs();
    let pass = residual.abs_lt_pow10(MANIN_TOL);
    CheckReport {
        check: name.into(),
        expected: rat_to_str(expected),
        computed: ratio.to_decimal(15),
        residual: residual.to_sci(3),
        tolerance: format!("1e{MANIN_TOL}"),
        pass,
    }
}

/// Checks all eleven `Λ(Δ, j)` against the known rational ratios and
/// returns the two periods; errs with `RatioMismatch` on any failure.
pub fn manin_ratios(ctx: &EvalContext) -> Result<ManinReport> {
    let last = lseries_cutoff(7.0, 2.0 * std::f64::consts::PI, ctx.precision_digits);
    let f = delta(last + 2, DeltaMethod::Eta24);
    let lambda: Vec<BigFloat> =
        (1..=11).map(|s| lambda_level1(&f, s, ctx)).collect::<Result<_>>()?;
    let omega_minus = lambda[2].clone();
    let omega_plus = lambda[1].clone();
    let odd = [rat(1620, 691), rat(1, 1), rat(9, 14), rat(9, 14), rat(1, 1), rat(1620, 691)];
    let even = [rat(1, 1), rat(25, 48), rat(5, 12), rat(25, 48), rat(1, 1)];
    let mut checks = Vec::new();
    for (i, j) in [1u32, 3, 5, 7, 9, 11].iter().enumerate() {
        checks.push(ratio_report(
            &format!("lambda({j})/lambda(3)"),
            &lambda[*j as usize - 1],
            &omega_minus,
            &odd[i],
        ));
    }
    for (i, j) in [2u32, 4, 6, 8, 10].iter().enumerate() {
        checks.push(ratio_report(
            &format!("lambda({j})/lambda(2)"),
            &lambda[*j as usize - 1],
            &omega_plus,
            &even[i],
        ));
    }
    if let Some(bad) = checks.iter().find(|c| !c.pass) {
        return Err(Error::RatioMismatch(bad.summary_line()));
    }
    Ok(ManinReport { omega_plus, omega_minus, checks })
}

/// `⟨Δ, Δ⟩ = (225/2048)·Λ(2)·Λ(3)` for the Petersson product
/// `∫_F |Δ|² y^{12} dx dy/y²` over the standard fundamental domain.
///
/// The constant can be pinned numerically: a direct 2D quadrature of the
/// defining integral gives 1.0353620568043214·10⁻⁶, and the period
/// product `Λ(2)Λ(3)` is exactly `2048/225` times that.
pub fn petersson_delta(ctx: &EvalContext) -> Result<BigFloat> {
    let report = manin_ratios(ctx)?;
    Ok((&report.omega_plus * &report.omega_minus).mul_rat(&rat(225, 2048)))
}

/// Coefficients `c_j = −(−i)^{k−1−j}·C(k−2, j)·Λ(k−1−j)` of the period
/// polynomial `P(F; X) = Σ_j c_j X^j`, degree k−2.
pub fn period_polynomial(f: &NamedForm, ctx: &EvalContext) -> Result<Vec<BigFloatC>> {
    let (k, _) = lfunction_profile(f)?;
    if f.desc.level != 1 {
        return Err(Error::BadN(f.desc.level));
    }
    let mut coeffs = Vec::with_capacity(k as usize - 1);
    for j in 0..=(k - 2) {
        let lambda = lambda_level1(f, k - 1 - j, ctx)?;
        let c = binomial(u64::from(k) - 2, u64::from(j));
        let scale = lambda.mul_int(&c);
        // −(−i)^m by m mod 4: 1, −i, −1, i picks the component and sign.
        let z = BigFloat::zero(ctx);
        coeffs.push(match (k - 1 - j) % 4 {
            0 => BigFloatC::new(-&scale, z),
            1 => BigFloatC::new(z, scale),
            2 => BigFloatC::new(scale, z),
            _ => BigFloatC::new(z, -&scale),
        });
    }
    Ok(coeffs)
}

/// `|P(X) + X^{k−2}·P(−1/X)|` at a real sample point: the period
/// polynomial satisfies `P|_{2−k}(1 + S) = 0`.
pub fn period_relation_residual(f: &NamedForm, x: &BigFloat, ctx: &EvalContext) -> Result<BigFloat> {
    let coeffs = period_polynomial(f, ctx)?;
    let eval = |t: &BigFloat| {
        let mut acc = BigFloatC::zero(ctx);
        for c in coeffs.iter().rev() {
            acc = &acc.mul_bf(t) + c;
        }
        acc
    };
    let degree = coeffs.len() as u32 - 1;
    let direct = eval(x);
    let reflected = eval(&-&x.recip()).mul_bf(&x.powi(degree));
    Ok((&direct + &reflected).abs())
}
