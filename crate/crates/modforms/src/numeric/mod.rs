//! High-precision numerical evaluation.
//!
//! Everything the rest of the crate does is exact; this module is the
//! bridge to analysis. It evaluates q-expansions at points of the upper
//! half-plane, computes completed L-values, period polynomials and
//! Petersson norms, and verifies the classical transformation laws and
//! special-value identities numerically, with every tolerance spelled out
//! at the call site.
//!
//! Arithmetic is fixed-point on `2^bits` with a guard margin derived from
//! an [`EvalContext`]; there is no global precision state, and rerunning a
//! check with a doubled-precision context is the intended way to confirm a
//! residual is genuine rather than round-off.

mod bigfloat;
mod lseries;
mod qeval;
mod report;
mod special;

pub use bigfloat::{exp_real, pi, BigFloat, BigFloatC, EvalContext};
pub use lseries::{
    central_value, l_value, lambda_level1, lambda_level_n, manin_ratios, period_polynomial,
    period_relation_residual, petersson_delta, ManinReport,
};
pub use report::CheckReport;
pub use qeval::{
    delta_inversion_residual, delta_value, e2_star_covariance_residual, eisenstein_value,
    eta_inversion_residual, eta_value, eval_form, eval_qexp, j_value,
    quasi_modularity_residual, theta_sq_twist_residual, theta_value, theta_w4_residual,
    CoeffGrowth,
};
pub use special::{
    almost_integer_report, cm_j, cm_j_report, cosh_fe_residual, cosh_sum,
    f4star_first_residual, f4star_residual, fricke_sum_check, gamma_quarter,
    gaussian_sum_check, lambert_identity_report, lambert_value, theta_fe_residual,
    theta_real, theta_sq_identity_residual, zeta3, CmPoint,
};
