//! Numerical building blocks shared by every test family.

pub mod normal;
pub mod odds;
pub mod quadrature;
pub mod roots;
pub mod special;
pub mod tdist;

pub use normal::{normal_cdf, normal_log_pdf, normal_pdf, normal_quantile, normal_sf, LN_SQRT_2PI};
pub use odds::{posterior_model_odds, EvidenceRatio, GuardWarning, LogValue, ModelOdds, Orientation};
pub use quadrature::{integrate, integrate_with_breaks, Domain, QuadratureOptions, QuadratureResult};
pub use roots::{find_root, minimize_scalar, ROOT_MAX_ITER};
pub use special::{
    binomial_lower_tail, binomial_upper_tail, ln_choose, log_beta, log_gamma, regularized_incomplete_beta,
};
pub use tdist::{student_t_cdf, student_t_log_pdf, student_t_pdf, student_t_quantile, student_t_sf};

/// Default root tolerance in the bracketed variable.
pub const ROOT_TOL: f64 = 1e-10;

/// Work limits for the iterative routines.
///
/// `quad_evaluations` caps each quadrature call; `search_steps` caps the
/// integer scans used by the constructors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub quad_evaluations: usize,
    pub search_steps: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { quad_evaluations: QuadratureOptions::default().max_evaluations, search_steps: 1_000_000 }
    }
}

impl Budget {
    /// Quadrature options with the given tolerances and this budget's cap.
    pub fn quad(&self, abs_tol: f64, rel_tol: f64) -> QuadratureOptions {
        QuadratureOptions { abs_tol, rel_tol, max_evaluations: self.quad_evaluations }
    }
}
