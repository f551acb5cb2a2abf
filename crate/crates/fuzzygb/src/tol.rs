//! Tolerance policy.
//!
//! The paper works with exact matrices; every tolerance here sits well below
//! the O(1/N) convergence signals being measured. `FUZZYGB_TOL_SCALE` scales
//! all of them uniformly (default 1).

use std::sync::OnceLock;

/// Relative hermiticity tolerance: a certificate passes iff
/// `‖A − A†‖ ≤ TOL_HERM_REL·‖A‖`.
pub const TOL_HERM_REL: f64 = 1e-10;

/// Relative eigenvalue accuracy target of the QL solver.
pub const TOL_EIG_REL: f64 = 1e-10;

/// Relative band below zero tolerated (and clamped) in `hermitian_sqrt`.
pub const TOL_PSD_REL: f64 = 1e-8;

/// Relative closure tolerance on `w_N²` in the axisymmetric recursion.
pub const TOL_CLOSURE_REL: f64 = 1e-9;

static SCALE: OnceLock<f64> = OnceLock::new();

/// Multiplier applied to every tolerance, read once from `FUZZYGB_TOL_SCALE`.
pub fn tol_scale() -> f64 {
    *SCALE.get_or_init(|| {
        std::env::var("FUZZYGB_TOL_SCALE")
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
            .filter(|v| *v > 0.0 && v.is_finite())
            .unwrap_or(1.0)
    })
}

pub fn tol_herm(norm: f64) -> f64 {
    TOL_HERM_REL * norm * tol_scale()
}

pub fn tol_psd(norm: f64) -> f64 {
    TOL_PSD_REL * norm * tol_scale()
}

pub fn tol_closure(scale: f64) -> f64 {
    TOL_CLOSURE_REL * scale * tol_scale()
}
