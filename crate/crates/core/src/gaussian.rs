//! Normal-theory Bayes factors: point null with a uniform prior range, the
//! generic `√(An)` form, the uniformity test, peri-null priors and the
//! Lindley construction.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numcore::{find_root, normal_quantile, EvidenceRatio, Orientation, LN_SQRT_2PI, ROOT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianTestSpec {
    /// Estimate.
    pub a: f64,
    /// Standard error of `a`.
    pub s: f64,
    pub n: u64,
    /// Width of the uniform prior range under the alternative.
    pub m: f64,
}

impl GaussianTestSpec {
    pub fn new(a: f64, s: f64, n: u64, m: f64) -> Result<Self> {
        if !(s > 0.0) || !(m > 0.0) || n == 0 || !a.is_finite() || !s.is_finite() || !m.is_finite() {
            return Err(domain("GaussianTestSpec", format!("need s > 0, m > 0, n >= 1; got s={s}, m={m}, n={n}")));
        }
        Ok(GaussianTestSpec { a, s, n, m })
    }
}

/// `K = m / (√(2π) s) · exp(-a² / 2s²)`. Warns when `s > m/10`, where the
/// prior is no longer flat over the likelihood.
pub fn point_null_gaussian_bf(spec: &GaussianTestSpec) -> EvidenceRatio {
    let z = spec.a / spec.s;
    let ln_k = spec.m.ln() - LN_SQRT_2PI - spec.s.ln() - 0.5 * z * z;
    let k = EvidenceRatio::from_ln(ln_k, Orientation::NullOverAlt);
    if spec.s > spec.m / 10.0 {
        k.with_warning(format!("standard error {} is not small against the prior range {}", spec.s, spec.m))
    } else {
        k
    }
}

/// `√(ln(2n/π))`: the estimate-to-standard-error ratio at which the
/// least-squares test is indifferent.
pub fn least_squares_critical_ratio(n: u64) -> Result<f64> {
    let arg = 2.0 * n as f64 / PI;
    if n < 2 || arg <= 1.0 {
        return Err(domain("least_squares_critical_ratio", format!("need 2n/π > 1, got n={n}")));
    }
    Ok(arg.ln().sqrt())
}

/// Sample sizes printed in the least-squares table.
pub const TABLE2_SIZES: [u64; 14] = [5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10_000, 20_000, 50_000, 100_000];

/// Rows `(n, b/σ_b)` of the least-squares table.
pub fn jeffreys1936_table() -> Result<Vec<(u64, f64)>> {
    TABLE2_SIZES.iter().map(|&n| least_squares_critical_ratio(n).map(|r| (n, r))).collect()
}

/// `K = √(A n) · exp(-a² / 2 s_a²)`.
pub fn generic_sqrt_n_bf(a: f64, s_a: f64, n: u64, big_a: f64) -> Result<EvidenceRatio> {
    if !(s_a > 0.0) || !(big_a > 0.0) || n == 0 {
        return Err(domain("generic_sqrt_n_bf", format!("need s_a > 0, A > 0, n >= 1; got {s_a}, {big_a}, {n}")));
    }
    let z = a / s_a;
    Ok(EvidenceRatio::from_ln(0.5 * (big_a * n as f64).ln() - 0.5 * z * z, Orientation::NullOverAlt))
}

/// `a/s_a` at which the generic form gives `K = 1`, i.e. `√(ln(An))`.
pub fn generic_critical_ratio(n: u64, big_a: f64) -> Result<f64> {
    let arg = big_a * n as f64;
    if !(arg > 1.0) {
        return Err(domain("generic_critical_ratio", format!("need A n > 1, got {arg}")));
    }
    Ok(arg.ln().sqrt())
}

/// Inferred from the `a0 = 0` column of the uniformity table as
/// `K / √(n/2π)` at n = 100 (close to 2/√3).
pub const UNIFORMITY_C_FIRST: f64 = 4.61 / 3.989_422_804_014_327;
/// Second column of the same table (close to √3).
pub const UNIFORMITY_C_SECOND: f64 = 6.92 / 3.989_422_804_014_327;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformitySpec {
    pub n: u64,
    /// Maximum-likelihood amplitude; its standard error is `n^(-1/2)`.
    pub a0: f64,
    pub c: f64,
}

impl UniformitySpec {
    pub fn new(n: u64, a0: f64, c: f64) -> Result<Self> {
        if n == 0 || !(c > 0.0) || !a0.is_finite() {
            return Err(domain("UniformitySpec", format!("need n >= 1, c > 0; got n={n}, c={c}")));
        }
        Ok(UniformitySpec { n, a0, c })
    }

    pub fn chi_square(&self) -> f64 {
        self.n as f64 * self.a0 * self.a0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformityOutcome {
    pub evidence: EvidenceRatio,
    pub chi_square: f64,
}

/// `K = √(n/2π) · c · exp(-n a0² / 2)`.
pub fn uniformity_bf(spec: &UniformitySpec) -> UniformityOutcome {
    let chi_square = spec.chi_square();
    let ln_k = 0.5 * (spec.n as f64).ln() - LN_SQRT_2PI + spec.c.ln() - 0.5 * chi_square;
    UniformityOutcome { evidence: EvidenceRatio::from_ln(ln_k, Orientation::NullOverAlt), chi_square }
}

/// `a0 √n` making the uniformity `K` equal one, found by root search.
pub fn uniformity_critical_root(n: u64, c: f64) -> Result<f64> {
    let k_at_zero = uniformity_bf(&UniformitySpec::new(n, 0.0, c)?).evidence.log_value;
    if k_at_zero <= 0.0 {
        return Err(domain("uniformity_critical_root", format!("K <= 1 already at a0 = 0 for n={n}, c={c}")));
    }
    let sqrt_n = (n as f64).sqrt();
    let g = |r: f64| uniformity_bf(&UniformitySpec { n, a0: r / sqrt_n, c }).evidence.log_value;
    find_root(g, 0.0, 2.0 * k_at_zero.sqrt() + 1.0, ROOT_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table4Row {
    pub n: u64,
    pub k_first: f64,
    pub k_second: f64,
    pub root_first: f64,
    pub root_second: f64,
    pub chi2_first: f64,
    pub chi2_second: f64,
}

pub const TABLE4_SIZES: [u64; 11] = [5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10_000];

pub fn uniformity_table(sizes: &[u64], c_first: f64, c_second: f64) -> Result<Vec<Table4Row>> {
    sizes
        .iter()
        .map(|&n| {
            let k = |c| uniformity_bf(&UniformitySpec { n, a0: 0.0, c }).evidence.bf01();
            let root_first = uniformity_critical_root(n, c_first)?;
            let root_second = uniformity_critical_root(n, c_second)?;
            Ok(Table4Row {
                n,
                k_first: k(c_first),
                k_second: k(c_second),
                root_first,
                root_second,
                chi2_first: root_first * root_first,
                chi2_second: root_second * root_second,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriNullSpec {
    pub z: f64,
    pub n: u64,
    /// Variance of the standardized effect under the peri-null.
    pub g0: f64,
    /// Variance of the standardized effect under the alternative.
    pub g1: f64,
}

impl PeriNullSpec {
    pub fn new(z: f64, n: u64, g0: f64, g1: f64) -> Result<Self> {
        if n == 0 || !(g0 > 0.0) || !(g1 > g0) || !g1.is_finite() || !z.is_finite() {
            return Err(domain("PeriNullSpec", format!("need 0 < g0 < g1 and n >= 1; got g0={g0}, g1={g1}, n={n}")));
        }
        Ok(PeriNullSpec { z, n, g0, g1 })
    }
}

/// `ln BF` of `N(0, g0)` against `N(0, g1)` on δ; no ordering check, so a
/// zero `g0` (point null) or equal variances are admitted here.
pub fn perinull_ln_bf(z: f64, n: f64, g0: f64, g1: f64) -> f64 {
    let (v0, v1) = (1.0 + n * g0, 1.0 + n * g1);
    0.5 * (v1.ln() - v0.ln()) + (g0 - g1) * n * z * z / (2.0 * v0 * v1)
}

/// Peri-null over alternative:
/// `√((1+n g1)/(1+n g0)) · exp((g0-g1) n z² / (2 (1+n g0)(1+n g1)))`.
pub fn perinull_bf(spec: &PeriNullSpec) -> EvidenceRatio {
    EvidenceRatio::from_ln(perinull_ln_bf(spec.z, spec.n as f64, spec.g0, spec.g1), Orientation::NullOverAlt)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Sidedness {
    /// `z = Φ⁻¹(1 - α)`, as printed under the figure.
    #[default]
    One,
    /// `z = Φ⁻¹(1 - α/2)`.
    Two,
}

pub fn z_for_alpha(alpha: f64, sidedness: Sidedness) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain("z_for_alpha", format!("alpha must lie in (0, 1), got {alpha}")));
    }
    match sidedness {
        Sidedness::One => normal_quantile(1.0 - alpha),
        Sidedness::Two => normal_quantile(1.0 - alpha / 2.0),
    }
}

/// `(n, BF)` pairs with `z` pinned at the `alpha` boundary.
pub fn perinull_curve(g0: f64, g1: f64, alpha: f64, n_grid: &[u64], sidedness: Sidedness) -> Result<Vec<(u64, f64)>> {
    let z = z_for_alpha(alpha, sidedness)?;
    n_grid.iter().map(|&n| Ok((n, perinull_bf(&PeriNullSpec::new(z, n, g0, g1)?).bf01()))).collect()
}

/// Peri-null factor with the alternative's variance shrinking as
/// `g1 = c_over_n / n`. `g0 = 0` is allowed here.
pub fn bartlett_scaled_bf(z: f64, n: u64, g0: f64, c_over_n: f64) -> Result<EvidenceRatio> {
    let g1 = c_over_n / n as f64;
    if n == 0 || !(g0 >= 0.0) || !(c_over_n > 0.0) || g1 < g0 {
        return Err(domain(
            "bartlett_scaled_bf",
            format!("need g1 = c/n >= g0 >= 0; got c={c_over_n}, n={n}, g0={g0}"),
        ));
    }
    Ok(EvidenceRatio::from_ln(perinull_ln_bf(z, n as f64, g0, g1), Orientation::NullOverAlt))
}

/// `|z|` at which the `N(0, g0)` vs `N(0, g1)` factor equals one.
pub fn critical_z_for_unit_bf(n: u64, g0: f64, g1: f64) -> Result<f64> {
    let nf = n as f64;
    if !(g1 > g0) || !(g0 >= 0.0) || perinull_ln_bf(0.0, nf, g0, g1) <= 0.0 {
        return Err(domain("critical_z_for_unit_bf", format!("no crossing for n={n}, g0={g0}, g1={g1}")));
    }
    let g = |z: f64| perinull_ln_bf(z, nf, g0, g1);
    let mut hi = 1.0;
    while g(hi) > 0.0 {
        hi *= 2.0;
    }
    find_root(g, 0.0, hi, ROOT_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LindleyResult {
    pub n: u64,
    pub z: f64,
    pub k: f64,
    pub posterior_h0: f64,
}

/// Largest sample size the Lindley search will consider.
pub const LINDLEY_MAX_N: u64 = 1 << 50;

/// Smallest `n` at which an estimate sitting exactly on the two-sided
/// `alpha` boundary still leaves `P(H0 | data) >= target`, using
/// `K = I √n / (σ √(2π)) · exp(-z²/2)`.
pub fn lindley_construct(
    alpha: f64,
    target_posterior_h0: f64,
    i: f64,
    sigma: f64,
    prior_mass_h0: f64,
) -> Result<LindleyResult> {
    for (name, v) in [("alpha", alpha), ("target_posterior_h0", target_posterior_h0), ("prior_mass_h0", prior_mass_h0)]
    {
        if !(v > 0.0 && v < 1.0) {
            return Err(domain("lindley_construct", format!("{name} must lie in (0, 1), got {v}")));
        }
    }
    if !(i > 0.0) || !(sigma > 0.0) {
        return Err(domain("lindley_construct", format!("need I > 0 and sigma > 0, got {i}, {sigma}")));
    }
    let z = normal_quantile(1.0 - alpha / 2.0)?;
    let rho = prior_mass_h0 / (1.0 - prior_mass_h0);
    let ln_k = |n: u64| i.ln() + 0.5 * (n as f64).ln() - sigma.ln() - LN_SQRT_2PI - 0.5 * z * z;
    let posterior = |n: u64| {
        let odds = (ln_k(n) + rho.ln()).exp();
        odds / (odds + 1.0)
    };
    let reached = |n: u64| posterior(n) >= target_posterior_h0;

    if reached(1) {
        return Ok(LindleyResult { n: 1, z, k: ln_k(1).exp(), posterior_h0: posterior(1) });
    }
    // Gallop to a bracket, then bisect on the integers.
    let mut hi = 2u64;
    while !reached(hi) {
        if hi >= LINDLEY_MAX_N {
            return Err(Error::SearchBudget {
                op: "lindley_construct",
                detail: format!("posterior stays below {target_posterior_h0} for n <= {LINDLEY_MAX_N}"),
            });
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reached(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(LindleyResult { n: hi, z, k: ln_k(hi).exp(), posterior_h0: posterior(hi) })
}
