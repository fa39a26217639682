//! Bracketed scalar root finding and minimization.

use crate::error::{domain, Error, Result};

/// Iteration cap for [`find_root`]; bisection alone would need ~1100 steps
/// to shrink any finite f64 bracket to a single ulp.
pub const ROOT_MAX_ITER: usize = 2_000;

/// Brent's method: bisection safeguarded by inverse quadratic interpolation.
///
/// `g(lo)` and `g(hi)` must not have the same strict sign. The returned
/// point lies in a bracket no wider than `x_tol` (plus a few ulps).
pub fn find_root<G>(mut g: G, lo: f64, hi: f64, x_tol: f64) -> Result<f64>
where
    G: FnMut(f64) -> f64,
{
    if !(x_tol > 0.0) || !lo.is_finite() || !hi.is_finite() {
        return Err(domain("find_root", format!("invalid bracket [{lo}, {hi}] or tolerance {x_tol}")));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (g(a), g(b));
    if fa.is_nan() || fb.is_nan() {
        return Err(domain("find_root", "function is NaN at a bracket end"));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NotBracketed { lo, hi, g_lo: fa, g_hi: fb });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..ROOT_MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * x_tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = g(b);
        if fb.is_nan() {
            return Err(domain("find_root", format!("function is NaN at {b}")));
        }
    }
    Err(Error::IterationBudget { op: "find_root", budget: ROOT_MAX_ITER })
}

/// Minimum of `f` on `[lo, hi]`: a coarse scan over `grid` points picks the
/// best cell, then golden-section search refines within its neighbours.
/// Returns `(x, f(x))`.
pub fn minimize_scalar<F>(mut f: F, lo: f64, hi: f64, grid: usize, x_tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    if !(hi > lo) || grid < 3 || !(x_tol > 0.0) {
        return Err(domain("minimize_scalar", format!("bad interval [{lo}, {hi}] or grid {grid}")));
    }
    let step = (hi - lo) / (grid - 1) as f64;
    let mut best = (0usize, f64::INFINITY);
    for i in 0..grid {
        let v = f(lo + i as f64 * step);
        if v.is_nan() {
            return Err(domain("minimize_scalar", "objective is NaN"));
        }
        if v < best.1 {
            best = (i, v);
        }
    }
    let mut a = lo + best.0.saturating_sub(1) as f64 * step;
    let mut b = (lo + (best.0 + 1) as f64 * step).min(hi);
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut iter = 0;
    while b - a > x_tol {
        iter += 1;
        if iter > ROOT_MAX_ITER {
            return Err(Error::IterationBudget { op: "minimize_scalar", budget: ROOT_MAX_ITER });
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    // Endpoints of the original range are candidates too.
    let mut x = 0.5 * (a + b);
    let mut fx = f(x);
    for cand in [lo, hi] {
        let fc = f(cand);
        if fc < fx {
            x = cand;
            fx = fc;
        }
    }
    Ok((x, fx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_root() {
        let r = find_root(|x| x * x - 4.0, 0.0, 10.0, 1e-12).unwrap();
        assert!((r - 2.0).abs() < 1e-11);
    }

    #[test]
    fn large_sample_critical_t() {
        let n = 100_000.0f64;
        let target = (2.0 * n / std::f64::consts::PI).ln();
        let r = find_root(|t| t * t - target, 0.0, 10.0, 1e-10).unwrap();
        assert!((r - 3.326).abs() < 5e-4);
        assert!((r - 3.32).abs() < 0.01);
    }

    #[test]
    fn not_bracketed() {
        let err = find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::NotBracketed { .. }));
    }

    #[test]
    fn deterministic_and_scale_invariant() {
        let g = |x: f64| x.exp() - 3.0 - x;
        let a = find_root(g, 0.0, 5.0, 1e-10).unwrap();
        let b = find_root(g, 0.0, 5.0, 1e-10).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        let c = find_root(|x| 3.0 * g(x), 0.0, 5.0, 1e-10).unwrap();
        assert!((a - c).abs() <= 1e-10);
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, fx) = minimize_scalar(|x| (x - 1.3).powi(2) + 2.0, 0.0, 10.0, 41, 1e-9).unwrap();
        // A parabola is flat to machine precision within ~1e-8 of its vertex.
        assert!((x - 1.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-14);
    }

    #[test]
    fn golden_section_boundary_minimum() {
        let (x, _) = minimize_scalar(|x| x, 0.0, 10.0, 21, 1e-9).unwrap();
        assert_eq!(x, 0.0);
    }
}
