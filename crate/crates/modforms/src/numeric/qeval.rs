//! Evaluating q-expansions on the upper half-plane, and numerical checks
//! of the classical transformation laws.

use super::bigfloat::{pi, BigFloat, BigFloatC, EvalContext};
use crate::arith::kronecker;
use crate::forms::{eisenstein_e, eisenstein_e2, jfunction, NamedForm};
use crate::qexp::{pentagonal_eta, QExp};
use crate::{Error, Result};
use num_traits::Zero;

/// Coefficient growth model used to truncate a q-series honestly: the
/// tail after the cut must fall below the working precision.
#[derive(Clone, Copy, Debug)]
pub enum CoeffGrowth {
    /// `|a(n)| ≤ C·n^κ` with moderate `C`.
    Poly(f64),
    /// `|a(n)| ≤ C·e^{c√n}`, the j-function regime.
    ExpSqrt(f64),
}

/// Extra decimal digits the truncation aims below the context precision,
/// absorbing the modest constants the growth models ignore.
const TAIL_MARGIN_DIGITS: f64 = 12.0;

/// Smallest integer `E` such that all terms with exponent beyond `E`
/// sum below `10^-(digits + margin)` at height `y`.
fn truncation_exponent(growth: CoeffGrowth, y: f64, digits: u32) -> usize {
    let a = 2.0 * std::f64::consts::PI * y;
    // Tail comparison against a geometric series of ratio e^-a.
    let t = (digits as f64 + TAIL_MARGIN_DIGITS) * std::f64::consts::LN_10
        + (1.0 - (-a).exp()).recip().max(1.0).ln();
    let e = match growth {
        CoeffGrowth::Poly(kappa) => {
            let mut e = (t / a).max(3.0);
            for _ in 0..3 {
                e = (t + kappa.max(0.0) * e.ln()) / a;
            }
            e
        }
        CoeffGrowth::ExpSqrt(c) => {
            // Solve a·e − c·√e = t as a quadratic in √e.
            let s = (c + (c * c + 4.0 * a * t).sqrt()) / (2.0 * a);
            s * s
        }
    };
    e.ceil() as usize + 2
}

/// Evaluates a (possibly Laurent) q-expansion at `tau` in the upper
/// half-plane, truncating according to `growth`.
///
/// Fails with `NotInUpperHalfPlane` when `Im τ ≤ 0` and with
/// `InsufficientSeriesPrecision` when the stored window is too short for
/// the requested precision at this height.
pub fn eval_qexp(
    series: &QExp,
    growth: CoeffGrowth,
    tau: &BigFloatC,
    ctx: &EvalContext,
) -> Result<BigFloatC> {
    if tau.im.is_zero() || tau.im.is_negative() {
        return Err(Error::NotInUpperHalfPlane);
    }
    let y = tau.im.to_f64();
    if y <= 0.0 {
        return Err(Error::BadInput("Im τ is too small to evaluate at".into()));
    }
    let den = series.offset_den() as i64;
    let off = series.offset_num();
    let e = truncation_exponent(growth, y, ctx.precision_digits) as i64;
    // Keep stored indices with exponent (off + idx)/den ≤ e.
    let idx_max = e * den - off;
    if idx_max >= 0 && idx_max as usize >= series.prec() {
        return Err(Error::InsufficientSeriesPrecision {
            needed: idx_max as usize + 1,
            have: series.prec(),
        });
    }
    // w = e^{2πiτ/den}; the series is a polynomial in w times w^off.
    let f = pi(ctx).mul_i64(2).div_i64(den);
    let z = BigFloatC::new(&-&tau.im * &f, &tau.re * &f);
    let w = z.exp();
    let mut acc = BigFloatC::zero(ctx);
    if idx_max >= 0 {
        for c in series.coeffs()[..=idx_max as usize].iter().rev() {
            acc = &acc * &w;
            if !c.is_zero() {
                acc = &acc + &BigFloatC::from_re(BigFloat::from_rat(c, ctx));
            }
        }
    }
    Ok(&acc * &w.powi(off))
}

/// Evaluates a named form at `tau`, picking the growth model from its
/// bookkeeping: `e^{4π√n}` for j, polynomial of degree `k + 1` otherwise.
pub fn eval_form(f: &NamedForm, tau: &BigFloatC, ctx: &EvalContext) -> Result<BigFloatC> {
    let growth = if f.name == "j" {
        CoeffGrowth::ExpSqrt(4.0 * std::f64::consts::PI)
    } else {
        CoeffGrowth::Poly(f.desc.weight2 as f64 / 2.0 + 1.0)
    };
    eval_qexp(&f.series, growth, tau, ctx)
}

pub(crate) fn series_len_for(
    growth: CoeffGrowth,
    den: i64,
    off: i64,
    tau: &BigFloatC,
    ctx: &EvalContext,
) -> Result<usize> {
    if tau.im.is_zero() || tau.im.is_negative() {
        return Err(Error::NotInUpperHalfPlane);
    }
    let y = tau.im.to_f64();
    if y <= 0.0 {
        return Err(Error::BadInput("Im τ is too small to evaluate at".into()));
    }
    let e = truncation_exponent(growth, y, ctx.precision_digits) as i64;
    Ok((e * den - off).max(1) as usize + 2)
}

/// `η(τ)` from the pentagonal-number series.
pub fn eta_value(tau: &BigFloatC, ctx: &EvalContext) -> Result<BigFloatC> {
    let n = series_len_for(CoeffGrowth::Poly(1.0), 24, 1, tau, ctx)?;
    eval_qexp(&pentagonal_eta(n / 24 + 2), CoeffGrowth::Poly(1.0), tau, ctx)
}

/// `Δ(τ)` as the 24th power of the eta value.
pub fn delta_value(tau: &BigFloatC, ctx: &EvalContext) -> Result<BigFloatC> {
    Ok(eta_value(tau, ctx)?.powi(24))
}

/// `θ(τ) = 1 + 2Σ q^{n²}`, summed sparsely.
pub fn theta_value(tau: &BigFloatC, ctx: &EvalContext) -> Result<BigFloatC> {
    if tau.im.is_zero() || tau.im.is_negative() {
        return Err(Error::NotInUpperHalfPlane);
    }
    let f = pi(ctx).mul_i64(2);
    let q = BigFloatC::new(&-&tau.im * &f, &tau.re * &f).exp();
    let q2 = &q * &q;
    let mut acc = BigFloatC::from_re(BigFloat::one(ctx));
    let mut u = q.clone();
    let mut v = &q * &q2;
    while !u.is_zero() {
        acc = &acc + &u.mul_i64(2);
        u = &u * &v;
        v = &v * &q2;
    }
    Ok(acc)
}

/// `E_k(τ)`; `k = 2` is allowed and uses the quasimodular series.
pub fn eisenstein_value(k: i64, tau: &BigFloatC, ctx: &EvalContext) -> Result<BigFloatC> {
    let kappa = k as f64 + 1.0;
    let n = series_len_for(CoeffGrowth::Poly(kappa), 1, 0, tau, ctx)?;
    let form = if k == 2 { eisenstein_e2(n) } else { eisenstein_e(k, n)? };
    eval_form(&form, tau, ctx)
}

/// `j(τ)` from its Laurent expansion.
pub fn j_value(tau: &BigFloatC, ctx: &EvalContext) -> Result<BigFloatC> {
    let growth = CoeffGrowth::ExpSqrt(4.0 * std::f64::consts::PI);
    let n = series_len_for(growth, 1, -1, tau, ctx)?;
    eval_form(&jfunction(n), tau, ctx)
}

fn neg_recip(tau: &BigFloatC) -> BigFloatC {
    -&tau.recip()
}

/// `|E₂(−1/τ) − τ²E₂(τ) − (6/π)(y − ix)|`: the quasimodular anomaly of
/// E₂ is exactly the affine term `12τ/(2πi)`.
pub fn quasi_modularity_residual(tau: &BigFloatC, ctx: &EvalContext) -> Result<BigFloat> {
    let left = eisenstein_value(2, &neg_recip(tau), ctx)?;
    let right = &tau.powi(2) * &eisenstein_value(2, tau, ctx)?;
    let six_over_pi = &BigFloat::from_i64(6, ctx) / &pi(ctx);
    let affine = BigFloatC::new(&tau.im * &six_over_pi, &-&tau.re * &six_over_pi);
    Ok((&(&left - &right) - &affine).abs())
}

/// `|E₂*(−1/τ) − τ²E₂*(τ)|` for the weight-2 completion
/// `E₂*(τ) = E₂(τ) − 3/(π·Im τ)`.
pub fn e2_star_covariance_residual(tau: &BigFloatC, ctx: &EvalContext) -> Result<BigFloat> {
    let star = |t: &BigFloatC| -> Result<BigFloatC> {
        let correction = &BigFloat::from_i64(3, ctx) / &(&pi(ctx) * &t.im);
        Ok(&eisenstein_value(2, t, ctx)? - &BigFloatC::from_re(correction))
    };
    let left = star(&neg_recip(tau))?;
    let right = &tau.powi(2) * &star(tau)?;
    Ok((&left - &right).abs())
}

/// `|η(−1/τ) − √(τ/i)·η(τ)|` with the principal square root
/// (`τ/i = y − ix` has positive real part on the upper half-plane).
pub fn eta_inversion_residual(tau: &BigFloatC, ctx: &EvalContext) -> Result<BigFloat> {
    let left = eta_value(&neg_recip(tau), ctx)?;
    let root = BigFloatC::new(tau.im.clone(), -&tau.re).sqrt();
    let right = &root * &eta_value(tau, ctx)?;
    Ok((&left - &right).abs())
}

/// `|Δ(−1/τ) − τ¹²Δ(τ)|`.
pub fn delta_inversion_residual(tau: &BigFloatC, ctx: &EvalContext) -> Result<BigFloat> {
    let left = delta_value(&neg_recip(tau), ctx)?;
    let right = &tau.powi(12) * &delta_value(tau, ctx)?;
    Ok((&left - &right).abs())
}

/// `|θ(−1/(4τ)) − √(2τ/i)·θ(τ)|`: the Fricke involution on level 4.
pub fn theta_w4_residual(tau: &BigFloatC, ctx: &EvalContext) -> Result<BigFloat> {
    let w4 = -&tau.mul_i64(4).recip();
    let left = theta_value(&w4, ctx)?;
    let root = BigFloatC::new(tau.im.mul_i64(2), tau.re.mul_i64(-2)).sqrt();
    let right = &root * &theta_value(tau, ctx)?;
    Ok((&left - &right).abs())
}

/// `|θ(γτ)² − (−4|d)·(cτ+d)·θ(τ)²|` for `γ = [a, b; c, d]` in Γ₀(4).
///
/// Rejects matrices outside Γ₀(4) with `BadMatrix(4)`.
pub fn theta_sq_twist_residual(
    gamma: [i64; 4],
    tau: &BigFloatC,
    ctx: &EvalContext,
) -> Result<BigFloat> {
    let [mut a, mut b, mut c, mut d] = gamma;
    if a * d - b * c != 1 || c.rem_euclid(4) != 0 {
        return Err(Error::BadMatrix(4));
    }
    // γ and −γ act identically; normalize to d > 0 so the character
    // argument is positive (the twist is odd, so this is consistent).
    if d < 0 || (d == 0 && c < 0) {
        a = -a;
        b = -b;
        c = -c;
        d = -d;
    }
    let chi = kronecker(-4, d);
    let scale = |m: i64, n: i64| {
        BigFloatC::new(
            &tau.re.mul_i64(m) + &BigFloat::from_i64(n, ctx),
            tau.im.mul_i64(m),
        )
    };
    let num = scale(a, b);
    let den = scale(c, d);
    let gtau = &num / &den;
    let left = theta_value(&gtau, ctx)?.powi(2);
    let right = &den.mul_i64(chi as i64) * &theta_value(tau, ctx)?.powi(2);
    Ok((&left - &right).abs())
}
