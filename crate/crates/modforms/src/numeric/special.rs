//! Special values and classical near-identities: real theta sums with
//! their inversion laws, Lambert series against closed forms, coprime
//! Fricke sums, the weight-4 Eichler integrals, singular moduli of `j`,
//! the `e^{π√163}` near-integer, and a Gaussian sum that agrees with
//! `5√π − 1/2` to hundreds of digits without being equal to it.
//!
//! The two transcendental constants these checks need — `ζ(3)` and
//! `Γ(1/4)` — are computed at working precision rather than pasted in:
//! `ζ(3)` by Euler–Maclaurin off a cut at `n ≈ digits`, and `Γ(1/4)`
//! through `√2·π^{3/4}·T(1)` with `T` the theta sum below.

use num_bigint::BigInt;

use super::bigfloat::{exp_real, pi, BigFloat, BigFloatC, EvalContext};
use super::qeval::{eval_qexp, j_value, series_len_for, CoeffGrowth};
use super::report::CheckReport;
use crate::arith::{bernoulli, euler_phi, moebius, sigma};
use crate::qexp::QExp;
use crate::{rat, rat_to_str, Error, Result};

/// `T(a) = Σ_{n∈ℤ} e^{−πan²}` for real `a > 0`, summed sparsely over
/// the square exponents.
pub fn theta_real(a: &BigFloat, ctx: &EvalContext) -> Result<BigFloat> {
    if a.is_zero() || a.is_negative() {
        return Err(Error::BadInput("theta sum needs a > 0".into()));
    }
    let t = exp_real(&-&(&pi(ctx) * a));
    let t2 = &t * &t;
    let mut u = t.clone(); // t^{n²}
    let mut v = &t2 * &t; // t^{2n+1}
    let mut acc = BigFloat::one(ctx);
    while !u.is_zero() {
        acc = &acc + &u.mul_i64(2);
        u = &u * &v;
        v = &v * &t2;
    }
    Ok(acc)
}

/// `|T(1/a) − √a·T(a)|`, the inversion law for the real theta sum.
pub fn theta_fe_residual(a: &BigFloat, ctx: &EvalContext) -> Result<BigFloat> {
    let lhs = theta_real(&a.recip(), ctx)?;
    let rhs = &a.sqrt() * &theta_real(a, ctx)?;
    Ok((&lhs - &rhs).abs())
}

/// `T₂(a) = Σ_{n∈ℤ} 1/cosh(πna)` for real `a > 0`.
pub fn cosh_sum(a: &BigFloat, ctx: &EvalContext) -> Result<BigFloat> {
    if a.is_zero() || a.is_negative() {
        return Err(Error::BadInput("cosh sum needs a > 0".into()));
    }
    let p = exp_real(&(&pi(ctx) * a));
    let four = BigFloat::from_i64(4, ctx);
    let mut pn = p.clone();
    let mut acc = BigFloat::one(ctx);
    loop {
        // 2/cosh(πna), covering the ±n pair at once.
        let term = &four / &(&pn + &pn.recip());
        if term.is_zero() {
            break;
        }
        acc = &acc + &term;
        pn = &pn * &p;
    }
    Ok(acc)
}

/// `|T₂(1/a) − a·T₂(a)|`.
pub fn cosh_fe_residual(a: &BigFloat, ctx: &EvalContext) -> Result<BigFloat> {
    let lhs = cosh_sum(&a.recip(), ctx)?;
    let rhs = a * &cosh_sum(a, ctx)?;
    Ok((&lhs - &rhs).abs())
}

/// `|T₂(a) − T(a)²|`.
pub fn theta_sq_identity_residual(a: &BigFloat, ctx: &EvalContext) -> Result<BigFloat> {
    let t = theta_real(a, ctx)?;
    Ok((&cosh_sum(a, ctx)? - &(&t * &t)).abs())
}

/// `ζ(3)` by Euler–Maclaurin: direct sum below the cut `a`, then
/// `a⁻²/2 + a⁻³/2 + Σ_k B_{2k}(2k+1)/2 · a^{−2k−2}`.
pub fn zeta3(ctx: &EvalContext) -> BigFloat {
    let a = ctx.precision_digits as i64 + 20;
    let mut acc = BigFloat::zero(ctx);
    for n in 1..a {
        acc = &acc + &BigFloat::from_rat(&rat(1, n * n * n), ctx);
    }
    acc = &acc + &BigFloat::from_rat(&rat(1, 2 * a * a), ctx);
    acc = &acc + &BigFloat::from_rat(&rat(1, 2 * a * a * a), ctx);
    let inv_a2 = BigFloat::from_rat(&rat(1, a * a), ctx);
    let mut apow = &inv_a2 * &inv_a2;
    for k in 1..=600u32 {
        // The terms keep shrinking until 2k ≈ 2πa, and with this cut the
        // minimum sits far below one ulp, so underflow ends the loop.
        let term = apow.mul_rat(&(&bernoulli(2 * k) * &rat(2 * (k as i64) + 1, 2)));
        if term.is_zero() {
            break;
        }
        acc = &acc + &term;
        apow = &apow * &inv_a2;
    }
    acc
}

/// `Γ(1/4) = √2 · π^{3/4} · T(1)`.
pub fn gamma_quarter(ctx: &EvalContext) -> BigFloat {
    let p = pi(ctx);
    let p34 = (&p * &p.sqrt()).sqrt();
    let t1 = theta_real(&BigFloat::one(ctx), ctx).expect("1 > 0");
    &(&BigFloat::from_i64(2, ctx).sqrt() * &p34) * &t1
}

/// `F(k) = Σ_{n≥1} n^k/(e^{2πn} − 1)` by direct summation.
pub fn lambert_value(k: u32, ctx: &EvalContext) -> BigFloat {
    let r = exp_real(&-&pi(ctx).mul_i64(2));
    let one = BigFloat::one(ctx);
    let mut pn = r.clone();
    let mut acc = BigFloat::zero(ctx);
    let mut n = 1i64;
    loop {
        let term = &pn.mul_int(&BigInt::from(n).pow(k)) / &(&one - &pn);
        if term.is_zero() {
            break;
        }
        acc = &acc + &term;
        pn = &pn * &r;
        n += 1;
    }
    acc
}

/// Compares `F(k)` against its closed form for `k ∈ {1, 3, 5, 9}`.
///
/// `F(1)` comes from `E₂(i) = 3/π`, `F(3)` from the CM value of `E₄` at
/// `i`, and `F(5)`, `F(9)` from `E₆(i) = E₁₀(i) = 0`.
pub fn lambert_identity_report(ctx: &EvalContext) -> Vec<CheckReport> {
    const TOL: i64 = -30;
    let p = pi(ctx);
    let f1 = &BigFloat::from_rat(&rat(1, 24), ctx) - &p.mul_i64(8).recip();
    let g = gamma_quarter(ctx);
    let f3 = &(&g.powi(8) / &p.mul_i64(2).powi(6).mul_i64(80))
        - &BigFloat::from_rat(&rat(1, 240), ctx);
    let row = |k: u32, label: &str, expected: BigFloat| {
        let value = lambert_value(k, ctx);
        let residual = (&value - &expected).abs();
        CheckReport {
            check: format!("F({k})"),
            expected: label.into(),
            computed: value.to_decimal(32),
            residual: residual.to_sci(3),
            tolerance: format!("1e{TOL}"),
            pass: residual.abs_lt_pow10(TOL),
        }
    };
    vec![
        row(1, "1/24 - 1/(8π)", f1),
        row(3, "Γ(1/4)⁸/(80(2π)⁶) - 1/240", f3),
        row(5, "1/504", BigFloat::from_rat(&rat(1, 504), ctx)),
        row(9, "1/264", BigFloat::from_rat(&rat(1, 264), ctx)),
    ]
}

/// Checks `Σ_{gcd(m,N)=1} m/(e^{2πm/√N} − 1) = φ(N)/24` for squarefree
/// `N > 1` with `μ(N) = 1`.
///
/// Möbius-unfolding the coprimality condition turns the left side into
/// `Σ_{d|N} μ(d)·d`-weighted `E₂` values at `id/√N`; pairing `d ↔ N/d`
/// cancels the quasi-period because `Σ_{d|N} μ(d) = 0`, which is what
/// makes the identity exact.
pub fn fricke_sum_check(n: u64, ctx: &EvalContext) -> Result<CheckReport> {
    if n <= 1 || moebius(n) != 1 {
        return Err(Error::BadN(n));
    }
    const TOL: i64 = -25;
    let sqrt_n = BigFloat::from_i64(n as i64, ctx).sqrt();
    let r = exp_real(&-&(&pi(ctx).mul_i64(2) / &sqrt_n));
    let one = BigFloat::one(ctx);
    let mut pm = one.clone();
    let mut acc = BigFloat::zero(ctx);
    let mut m = 0i64;
    loop {
        m += 1;
        pm = &pm * &r;
        if pm.is_zero() {
            break;
        }
        if num_integer::gcd(m as u64, n) != 1 {
            continue;
        }
        acc = &acc + &(&pm.mul_i64(m) / &(&one - &pm));
    }
    let expected = rat(euler_phi(n) as i64, 24);
    let residual = (&acc - &BigFloat::from_rat(&expected, ctx)).abs();
    Ok(CheckReport {
        check: format!("fricke_sum({n})"),
        expected: rat_to_str(&expected),
        computed: acc.to_decimal(30),
        residual: residual.to_sci(3),
        tolerance: format!("1e{TOL}"),
        pass: residual.abs_lt_pow10(TOL),
    })
}

/// `Σ_{n≤len} σ₋₃(n) qⁿ` as an exact series, with `σ₋₃(n) = σ₃(n)/n³`.
fn sigma_m3_series(len: usize) -> QExp {
    let coeffs = (1..=len as i64)
        .map(|n| &sigma(3, n) * &rat(1, n * n * n))
        .collect();
    QExp::from_parts(1, 1, coeffs).expect("integer exponent grid")
}

/// The q-series tail of the weight-4 Eichler integrals. `σ₋₃ ≤ ζ(3)`,
/// so the flat growth model truncates it honestly.
fn f4_tail(tau: &BigFloatC, ctx: &EvalContext) -> Result<BigFloatC> {
    let len = series_len_for(CoeffGrowth::Poly(1.0), 1, 1, tau, ctx)?;
    eval_qexp(&sigma_m3_series(len), CoeffGrowth::Poly(1.0), tau, ctx)
}

/// `τ/i`, the rotation that keeps the polynomial pieces real on the
/// imaginary axis.
fn over_i(tau: &BigFloatC) -> BigFloatC {
    BigFloatC::new(tau.im.clone(), -&tau.re)
}

/// `F₄**(τ) = −(π³/180)(τ/i)³ − (π³/72)(τ/i) + ζ(3)/2 + Σ σ₋₃(n)qⁿ`.
fn f4_double_star(tau: &BigFloatC, ctx: &EvalContext) -> Result<BigFloatC> {
    let w = over_i(tau);
    let p3 = pi(ctx).powi(3);
    let poly = &w.powi(3).mul_bf(&p3.div_i64(-180)) + &w.mul_bf(&p3.div_i64(-72));
    let constant = BigFloatC::from_re(zeta3(ctx).half());
    Ok(&(&poly + &constant) + &f4_tail(tau, ctx)?)
}

/// `|F₄**(−1/τ) − τ^{−2}F₄**(τ)|`: the completed Eichler integral is
/// weight-(−2) invariant under the inversion.
pub fn f4star_residual(tau: &BigFloatC, ctx: &EvalContext) -> Result<BigFloat> {
    if tau.im.is_zero() || tau.im.is_negative() {
        return Err(Error::NotInUpperHalfPlane);
    }
    let left = f4_double_star(&-&tau.recip(), ctx)?;
    let right = &f4_double_star(tau, ctx)? * &tau.powi(-2);
    Ok((&left - &right).abs())
}

/// Residual of the first functional form,
/// `τ²F₄*(−1/τ) = F₄*(τ) + ζ(3)(1 − τ²)/2 − (π³/36)(τ/i)` where
/// `F₄*(τ) = −(π³/180)(τ/i)³ + Σ σ₋₃(n)qⁿ` carries no completion terms.
pub fn f4star_first_residual(tau: &BigFloatC, ctx: &EvalContext) -> Result<BigFloat> {
    if tau.im.is_zero() || tau.im.is_negative() {
        return Err(Error::NotInUpperHalfPlane);
    }
    let p3 = pi(ctx).powi(3);
    let fstar = |t: &BigFloatC| -> Result<BigFloatC> {
        Ok(&over_i(t).powi(3).mul_bf(&p3.div_i64(-180)) + &f4_tail(t, ctx)?)
    };
    let left = &tau.powi(2) * &fstar(&-&tau.recip())?;
    let half_zeta = BigFloatC::from_re(zeta3(ctx).half());
    let one_minus = &BigFloatC::from_re(BigFloat::one(ctx)) - &tau.powi(2);
    let rhs = &(&fstar(tau)? + &(&half_zeta * &one_minus))
        - &over_i(tau).mul_bf(&p3.div_i64(36));
    Ok((&left - &rhs).abs())
}

/// CM points of the classical singular-moduli table, keyed by the
/// discriminant of the order. Every point is `(δ + i√d)/2` with
/// `d = |disc|` and `δ = d mod 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmPoint {
    /// `τ = (1+i√3)/2`, the corner of the fundamental domain.
    D3,
    /// `τ = i`.
    D4,
    /// `τ = (1+i√7)/2`.
    D7,
    /// `τ = i√2`.
    D8,
    /// `τ = (1+i√11)/2`.
    D11,
    /// `τ = i√3`.
    D12,
    /// `τ = (1+i√15)/2`, the first class-number-2 row.
    D15,
    /// `τ = 2i`.
    D16,
    /// `τ = (1+3i√3)/2`, the non-maximal order of conductor 3.
    D27,
    /// `τ = (1+i√163)/2`.
    D163,
}

impl CmPoint {
    /// Table order, by `|disc|`.
    pub const ALL: [CmPoint; 10] = [
        CmPoint::D3,
        CmPoint::D4,
        CmPoint::D7,
        CmPoint::D8,
        CmPoint::D11,
        CmPoint::D12,
        CmPoint::D15,
        CmPoint::D16,
        CmPoint::D27,
        CmPoint::D163,
    ];

    /// The (negative) discriminant.
    pub fn discriminant(self) -> i64 {
        match self {
            CmPoint::D3 => -3,
            CmPoint::D4 => -4,
            CmPoint::D7 => -7,
            CmPoint::D8 => -8,
            CmPoint::D11 => -11,
            CmPoint::D12 => -12,
            CmPoint::D15 => -15,
            CmPoint::D16 => -16,
            CmPoint::D27 => -27,
            CmPoint::D163 => -163,
        }
    }

    /// Printable name of the point.
    pub fn label(self) -> &'static str {
        match self {
            CmPoint::D3 => "(1+i√3)/2",
            CmPoint::D4 => "i",
            CmPoint::D7 => "(1+i√7)/2",
            CmPoint::D8 => "i√2",
            CmPoint::D11 => "(1+i√11)/2",
            CmPoint::D12 => "i√3",
            CmPoint::D15 => "(1+i√15)/2",
            CmPoint::D16 => "2i",
            CmPoint::D27 => "(1+3i√3)/2",
            CmPoint::D163 => "(1+i√163)/2",
        }
    }

    /// The point on the upper half-plane, at working precision.
    pub fn tau(self, ctx: &EvalContext) -> BigFloatC {
        let d = -self.discriminant();
        let re = BigFloat::from_rat(&rat(d % 2, 2), ctx);
        BigFloatC::new(re, BigFloat::from_i64(d, ctx).sqrt().half())
    }

    /// The nine integer rows of the table; disc −15 is the exception.
    fn integer_modulus(self) -> Option<i64> {
        match self {
            CmPoint::D3 => Some(0),
            CmPoint::D4 => Some(1728),
            CmPoint::D7 => Some(-3375),
            CmPoint::D8 => Some(8000),
            CmPoint::D11 => Some(-32768),
            CmPoint::D12 => Some(54000),
            CmPoint::D15 => None,
            CmPoint::D16 => Some(287496),
            CmPoint::D27 => Some(-12288000),
            CmPoint::D163 => Some(-262_537_412_640_768_000),
        }
    }

    /// The exact singular modulus `j(τ)` — an integer on every row
    /// except disc −15, whose class field forces `(−191025−85995√5)/2`.
    pub fn singular_modulus(self, ctx: &EvalContext) -> BigFloat {
        match self.integer_modulus() {
            Some(v) => BigFloat::from_i64(v, ctx),
            None => (&BigFloat::from_i64(-191025, ctx)
                - &BigFloat::from_i64(5, ctx).sqrt().mul_i64(85995))
                .half(),
        }
    }

    fn modulus_label(self) -> String {
        match self.integer_modulus() {
            Some(v) => v.to_string(),
            None => "(-191025 - 85995√5)/2".into(),
        }
    }
}

/// `j` at a CM point of the table. The disc −163 row needs headroom
/// for its 18-digit target value.
pub fn cm_j(point: CmPoint, ctx: &EvalContext) -> Result<BigFloatC> {
    if point == CmPoint::D163 && ctx.precision_digits < 40 {
        return Err(Error::InsufficientPrecision {
            needed: 40,
            have: ctx.precision_digits as usize,
        });
    }
    j_value(&point.tau(ctx), ctx)
}

/// The full ten-row singular-moduli table; every row but disc −163 is
/// held to `10⁻²⁰` absolute, that one to `10⁻¹⁸` relative.
pub fn cm_j_report(ctx: &EvalContext) -> Result<Vec<CheckReport>> {
    if ctx.precision_digits < 50 {
        return Err(Error::InsufficientPrecision {
            needed: 50,
            have: ctx.precision_digits as usize,
        });
    }
    CmPoint::ALL
        .iter()
        .map(|&p| {
            let value = cm_j(p, ctx)?;
            let expected = p.singular_modulus(ctx);
            let residual = (&value - &BigFloatC::from_re(expected.clone())).abs();
            let (pass, tolerance) = if p == CmPoint::D163 {
                let bound = expected.abs().mul_rat(&rat(1, 1_000_000_000_000_000_000));
                (residual < bound, "1e-18 relative".to_string())
            } else {
                (residual.abs_lt_pow10(-20), "1e-20".to_string())
            };
            Ok(CheckReport {
                check: format!("j({})", p.label()),
                expected: p.modulus_label(),
                computed: value.to_decimal(25),
                residual: residual.to_sci(3),
                tolerance,
                pass,
            })
        })
        .collect()
}

/// Checks `(e^{π√163} − 744)^{1/3} = 640320 − ε` with `0 < ε < 10⁻²⁴`,
/// and that `ε ≈ 65628·e^{−(5/3)π√163}` — the coefficient being
/// `196884/3` from the first nontrivial term of the `j` expansion.
pub fn almost_integer_report(ctx: &EvalContext) -> Result<Vec<CheckReport>> {
    if ctx.precision_digits < 60 {
        return Err(Error::InsufficientPrecision {
            needed: 60,
            have: ctx.precision_digits as usize,
        });
    }
    let x = &pi(ctx) * &BigFloat::from_i64(163, ctx).sqrt();
    let root = (&exp_real(&x) - &BigFloat::from_i64(744, ctx)).cbrt();
    let eps = &BigFloat::from_i64(640_320, ctx) - &root;
    let in_window = !eps.is_negative() && !eps.is_zero() && eps.abs_lt_pow10(-24);
    let approx = exp_real(&-&x.mul_rat(&rat(5, 3))).mul_i64(65628);
    let ratio = &eps / &approx;
    let deviation = (&ratio - &BigFloat::one(ctx)).abs();
    Ok(vec![
        CheckReport {
            check: "640320 - (e^{π√163} - 744)^{1/3}".into(),
            expected: "in (0, 1e-24)".into(),
            computed: eps.to_sci(10),
            residual: eps.to_sci(3),
            tolerance: "1e-24".into(),
            pass: in_window,
        },
        CheckReport {
            check: "ε / (65628·e^{-(5/3)π√163})".into(),
            expected: "1".into(),
            computed: ratio.to_decimal(12),
            residual: deviation.to_sci(3),
            tolerance: "1e-3".into(),
            pass: deviation.abs_lt_pow10(-3),
        },
        CheckReport {
            check: "3·65628".into(),
            expected: "196884".into(),
            computed: (3i64 * 65628).to_string(),
            residual: "0".into(),
            tolerance: "exact".into(),
            pass: 3 * 65628 == 196884,
        },
    ])
}

/// `Σ_{n≥1} e^{−(n/10)²}` versus `5√π − 1/2`: Poisson summation says the
/// difference is `10√π·Σ_{k≥1} e^{−100π²k²} ≈ 10^{−427}` — tiny but not
/// zero. At ≥ 450 digits the difference is bracketed in
/// `(10^{−435}, 10^{−400})`, certifying both statements at once.
pub fn gaussian_sum_check(ctx: &EvalContext) -> Result<CheckReport> {
    if ctx.precision_digits < 450 {
        return Err(Error::InsufficientPrecision {
            needed: 450,
            have: ctx.precision_digits as usize,
        });
    }
    let rho = exp_real(&BigFloat::from_rat(&rat(-1, 100), ctx));
    let rho2 = &rho * &rho;
    let mut u = rho.clone(); // ρ^{n²}
    let mut v = &rho2 * &rho; // ρ^{2n+1}
    let mut acc = BigFloat::zero(ctx);
    while !u.is_zero() {
        acc = &acc + &u;
        u = &u * &v;
        v = &v * &rho2;
    }
    let target = &pi(ctx).sqrt().mul_i64(5) - &BigFloat::from_rat(&rat(1, 2), ctx);
    let diff = &acc - &target;
    let pass = !diff.is_negative() && diff.abs_gt_pow10(-435) && diff.abs_lt_pow10(-400);
    Ok(CheckReport {
        check: "Σ e^{-(n/10)²} vs 5√π - 1/2".into(),
        expected: "difference in (1e-435, 1e-400)".into(),
        computed: diff.to_sci(8),
        residual: diff.to_sci(3),
        tolerance: "1e-400, nonzero".into(),
        pass,
    })
}
