//! Exact-arithmetic toolkit for classical modular forms on `SL2(Z)` and
//! `Γ0(N)`.
//!
//! The crate is organized in layers:
//!
//! * [`arith`] — scalar number theory: divisor sums, Kronecker symbols,
//!   Bernoulli numbers, Hurwitz class numbers, Dedekind-zeta special values.
//! * [`qexp`] — truncated q-expansions with exact rational coefficients on a
//!   fractional exponent grid, including eta quotients and partition series.
//! * [`forms`] — named constructors (`E_k`, `Δ`, `θ`, `j`, …), bases of
//!   `M_k(Γ)`, Serre derivatives, Rankin–Cohen brackets, and the classical
//!   identity checks that tie them together.
//! * [`dims`] — dimension formulas for `M_k`/`S_k` at level 1 and on
//!   `Γ0(N)`, plus new-space dimensions.
//! * [`hecke`] — Hecke operators, Hecke matrices and eigenforms, Euler
//!   factors, `T(n)` acting on `j`, Fricke signs.
//! * [`tau`] — four independent algorithms for Ramanujan's τ together with
//!   congruence and bound checks.
//! * [`numeric`] — arbitrary-precision evaluation on the upper half-plane:
//!   L-values, period polynomials, Petersson norms via periods, CM values of
//!   `j`, and functional-equation residuals.
//!
//! All series arithmetic is exact (BigInt rationals); floating-point enters
//! only in [`numeric`], which tracks an explicit decimal-digit precision.

pub mod arith;
mod convolve;
pub mod dims;
mod error;
pub mod forms;
pub mod hecke;
pub mod numeric;
pub mod qexp;
mod rat;
pub mod tau;

pub use error::{Error, Result};
pub use rat::{binomial, rat, rat_from_str, rat_i, rat_to_str};

/// Exact rational scalar used for every coefficient in the crate.
pub type Rational = num_rational::BigRational;

/// Arbitrary-precision integer re-export.
pub type Integer = num_bigint::BigInt;
