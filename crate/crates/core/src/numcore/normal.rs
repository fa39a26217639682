//! Standard normal distribution.

use libm::erfc;
use statrs::function::erf::erfc_inv;

use crate::error::{domain, Result};

pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `Φ(z)`, the standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Upper tail `1 - Φ(z)` without cancellation for large `z`.
pub fn normal_sf(z: f64) -> f64 {
    normal_cdf(-z)
}

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z - LN_SQRT_2PI).exp()
}

/// `ln φ(z)`.
pub fn normal_log_pdf(z: f64) -> f64 {
    -0.5 * z * z - LN_SQRT_2PI
}

/// `Φ⁻¹(p)` for `p` strictly inside (0, 1).
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("normal_quantile", format!("p must lie in (0, 1), got {p}")));
    }
    let mut z = -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p);
    // One Newton step on whichever tail is better conditioned.
    let density = normal_pdf(z);
    if density > 0.0 {
        let residual = if p < 0.5 { normal_cdf(z) - p } else { (1.0 - p) - normal_sf(z) };
        z -= residual / density;
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Φ from the Maclaurin series of erf; fine for |z| up to about 3.
    fn erf_series_oracle(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        for n in 1..200 {
            term *= -x * x / n as f64;
            sum += term / (2 * n + 1) as f64;
        }
        2.0 / std::f64::consts::PI.sqrt() * sum
    }

    #[test]
    fn center_and_symmetry() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert_eq!(normal_quantile(0.5).unwrap(), 0.0);
        for &z in &[0.1, 1.0, 2.5, 5.0, 8.0] {
            assert!((normal_cdf(-z) - (1.0 - normal_cdf(z))).abs() <= 1e-15);
        }
    }

    #[test]
    fn fisher_five_percent_point() {
        let z = normal_quantile(0.975).unwrap();
        assert!((z - 1.959_964).abs() < 1e-6);
        assert!((z - 1.96).abs() < 0.001);
    }

    #[test]
    fn cdf_matches_erf_series() {
        for &z in &[1.0, 0.3, -1.7, 2.4] {
            let oracle = 0.5 * (1.0 + erf_series_oracle(z / std::f64::consts::SQRT_2));
            assert!((normal_cdf(z) - oracle).abs() < 1e-14, "z={z}");
        }
    }

    #[test]
    fn quantile_domain() {
        assert!(normal_quantile(0.0).is_err());
        assert!(normal_quantile(1.0).is_err());
        assert!(normal_quantile(f64::NAN).is_err());
    }
}
