//! Central Student-t distribution.

use super::normal::normal_quantile;
use super::roots::find_root;
use super::special::{ln_beta_unchecked, regularized_incomplete_beta};
use crate::error::{domain, Result};

fn check_df(op: &'static str, df: f64) -> Result<()> {
    if !(df > 0.0) || !df.is_finite() {
        return Err(domain(op, format!("degrees of freedom must be positive, got {df}")));
    }
    Ok(())
}

/// `P(T <= t)` for `T ~ t(df)`.
pub fn student_t_cdf(t: f64, df: f64) -> Result<f64> {
    check_df("student_t_cdf", df)?;
    if t.is_nan() {
        return Err(domain("student_t_cdf", "t is NaN"));
    }
    if t == 0.0 {
        return Ok(0.5);
    }
    // For small |t| the complementary argument keeps precision near the center.
    let t2 = t * t;
    let tail = if t2 < df {
        0.5 * (1.0 - regularized_incomplete_beta(t2 / (df + t2), 0.5, 0.5 * df)?)
    } else {
        0.5 * regularized_incomplete_beta(df / (df + t2), 0.5 * df, 0.5)?
    };
    Ok(if t > 0.0 { 1.0 - tail } else { tail })
}

/// Upper tail `P(T > t)`.
pub fn student_t_sf(t: f64, df: f64) -> Result<f64> {
    student_t_cdf(-t, df)
}

/// `ln f(t; df)` for the central t density.
pub fn student_t_log_pdf(t: f64, df: f64) -> Result<f64> {
    check_df("student_t_log_pdf", df)?;
    Ok(-0.5 * (df + 1.0) * (t * t / df).ln_1p() - 0.5 * df.ln() - ln_beta_unchecked(0.5 * df, 0.5))
}

pub fn student_t_pdf(t: f64, df: f64) -> Result<f64> {
    Ok(student_t_log_pdf(t, df)?.exp())
}

/// Inverse of [`student_t_cdf`].
pub fn student_t_quantile(p: f64, df: f64) -> Result<f64> {
    check_df("student_t_quantile", df)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("student_t_quantile", format!("p must lie in (0, 1), got {p}")));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    if df == 1.0 {
        return Ok((std::f64::consts::PI * (p - 0.5)).tan());
    }
    // Solve on the upper half and reflect.
    let upper = p.max(1.0 - p);
    let guess = normal_quantile(upper)?.max(1e-3);
    let mut hi = guess * 2.0;
    while student_t_cdf(hi, df)? < upper {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(domain("student_t_quantile", "quantile beyond representable range"));
        }
    }
    let root =
        find_root(|t| student_t_cdf(t, df).map(|c| c - upper).unwrap_or(f64::NAN), 0.0, hi, 1e-13 * hi.max(1.0))?;
    Ok(if p > 0.5 { root } else { -root })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cauchy_closed_form() {
        assert_eq!(student_t_cdf(0.0, 1.0).unwrap(), 0.5);
        assert!((student_t_cdf(1.0, 1.0).unwrap() - 0.75).abs() < 1e-14);
        for &t in &[-3.0f64, 0.4, 7.5] {
            let closed = 0.5 + t.atan() / std::f64::consts::PI;
            assert!((student_t_cdf(t, 1.0).unwrap() - closed).abs() < 1e-14);
        }
    }

    #[test]
    fn two_sided_five_percent_point_df9() {
        // Oracle: bisection on the incomplete-beta tail directly.
        let tail = |t: f64| 0.5 * regularized_incomplete_beta(9.0 / (9.0 + t * t), 4.5, 0.5).unwrap();
        let (mut lo, mut hi) = (1.0f64, 4.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if tail(mid) > 0.025 {
                lo = mid
            } else {
                hi = mid
            }
        }
        let q = student_t_quantile(0.975, 9.0).unwrap();
        assert!((q - lo).abs() < 1e-10);
        assert!((q - 2.262).abs() < 5e-4);
    }

    #[test]
    fn large_df_tends_to_normal() {
        let q = student_t_quantile(0.975, 1e7).unwrap();
        assert!((q - 1.959_964).abs() < 1e-5);
        assert!((q - 1.96).abs() < 1e-3);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for &df in &[1.5, 3.0, 9.0, 29.0, 331.0] {
            for &p in &[1e-6, 0.01, 0.3, 0.5, 0.8, 0.975, 0.999_9] {
                let t = student_t_quantile(p, df).unwrap();
                assert!((student_t_cdf(t, df).unwrap() - p).abs() < 1e-10, "df={df} p={p}");
            }
        }
    }

    #[test]
    fn density_integrates_like_cdf_difference() {
        // Simpson on [-1, 2] against the CDF.
        let df = 4.0;
        let n = 2000;
        let h = 3.0 / n as f64;
        let mut s = 0.0;
        for i in 0..=n {
            let x = -1.0 + i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            s += w * student_t_pdf(x, df).unwrap();
        }
        s *= h / 3.0;
        let diff = student_t_cdf(2.0, df).unwrap() - student_t_cdf(-1.0, df).unwrap();
        assert!((s - diff).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(student_t_cdf(1.0, 0.0).is_err());
        assert!(student_t_quantile(0.0, 3.0).is_err());
        assert!(student_t_quantile(0.5, -1.0).is_err());
    }
}
