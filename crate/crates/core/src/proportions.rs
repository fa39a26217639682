//! Two-proportion tests and binomial constructions.
//!
//! Counts follow the 1935 notation: sample one has `x` successes and `y`
//! failures, sample two has `x2` and `y2`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numcore::special::ln_gamma_unchecked;
use crate::numcore::{binomial_lower_tail, binomial_upper_tail, find_root, EvidenceRatio, Orientation, ROOT_TOL};

/// Per-sample size below which the large-sample form is tagged with a warning.
pub const APPROX_MIN_SAMPLE: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TwoProportionCounts {
    pub x: u64,
    pub y: u64,
    pub x2: u64,
    pub y2: u64,
}

impl TwoProportionCounts {
    pub fn new(x: u64, y: u64, x2: u64, y2: u64) -> Result<Self> {
        if x + y == 0 || x2 + y2 == 0 {
            return Err(domain("TwoProportionCounts", "each sample needs at least one observation"));
        }
        Ok(TwoProportionCounts { x, y, x2, y2 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinomialOutcome {
    pub n: u64,
    pub s: u64,
    pub theta0: f64,
}

impl BinomialOutcome {
    pub fn new(n: u64, s: u64, theta0: f64) -> Result<Self> {
        if n == 0 || s > n {
            return Err(domain("BinomialOutcome", format!("need 0 <= s <= n and n >= 1, got s={s}, n={n}")));
        }
        check_probability("BinomialOutcome", theta0)?;
        Ok(BinomialOutcome { n, s, theta0 })
    }

    pub fn log_likelihood(&self, theta: f64) -> f64 {
        binomial_log_kernel(self.n, self.s, theta)
    }
}

fn check_probability(op: &'static str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(domain(op, format!("probability must lie in (0, 1), got {p}")))
    }
}

/// `s ln θ + (n - s) ln(1 - θ)`; the binomial coefficient cancels in every ratio.
fn binomial_log_kernel(n: u64, s: u64, theta: f64) -> f64 {
    let (s, f) = (s as f64, (n - s) as f64);
    let a = if s == 0.0 { 0.0 } else { s * theta.ln() };
    let b = if f == 0.0 { 0.0 } else { f * (-theta).ln_1p() };
    a + b
}

fn ln_factorial(k: f64) -> f64 {
    ln_gamma_unchecked(k + 1.0)
}

/// `ln K` of the exact factorial form, valid for non-integer counts too.
fn exact_ln_odds(x: f64, y: f64, x2: f64, y2: f64) -> f64 {
    ln_factorial(x + x2) + ln_factorial(y + y2) + ln_factorial(x + y + 1.0) + ln_factorial(x2 + y2 + 1.0)
        - ln_factorial(x)
        - ln_factorial(y)
        - ln_factorial(x2)
        - ln_factorial(y2)
        - ln_factorial(x + x2 + y + y2 + 1.0)
}

fn approx_ln_odds(x: f64, y: f64, x2: f64, y2: f64) -> f64 {
    let total = x + x2 + y + y2;
    let (n1, n2) = (x + y, x2 + y2);
    let (succ, fail) = (x + x2, y + y2);
    let cross = x * y2 - x2 * y;
    0.5 * (total * n1 * n2 / (2.0 * PI * succ * fail)).ln() - 0.5 * total * cross * cross / (succ * fail * n1 * n2)
}

/// Posterior odds for equal population proportions against unequal ones,
/// from the exact factorial expression. Orientation 01.
pub fn exact_two_proportion_odds(counts: &TwoProportionCounts) -> EvidenceRatio {
    let c = counts;
    EvidenceRatio::from_ln(exact_ln_odds(c.x as f64, c.y as f64, c.x2 as f64, c.y2 as f64), Orientation::NullOverAlt)
}

/// Large-sample form of [`exact_two_proportion_odds`]. Samples smaller than
/// [`APPROX_MIN_SAMPLE`] get a warning rather than an error.
pub fn approx_two_proportion_odds(counts: &TwoProportionCounts) -> Result<EvidenceRatio> {
    approx_two_proportion_odds_with_guard(counts, APPROX_MIN_SAMPLE)
}

/// As [`approx_two_proportion_odds`] with a caller-chosen guard size.
pub fn approx_two_proportion_odds_with_guard(counts: &TwoProportionCounts, min_sample: u64) -> Result<EvidenceRatio> {
    let c = counts;
    if c.x + c.x2 == 0 || c.y + c.y2 == 0 {
        return Err(domain("approx_two_proportion_odds", "pooled successes and failures must both be positive"));
    }
    let mut ratio = EvidenceRatio::from_ln(
        approx_ln_odds(c.x as f64, c.y as f64, c.x2 as f64, c.y2 as f64),
        Orientation::NullOverAlt,
    );
    for (label, size) in [("x+y", c.x + c.y), ("x2+y2", c.x2 + c.y2)] {
        if size < min_sample {
            ratio = ratio.with_warning(format!("{label} = {size} is below the large-sample guard of {min_sample}"));
        }
    }
    Ok(ratio)
}

/// One row of the two-proportion calibration table.
///
/// Both samples have size `m`, the first split evenly; `critical_d` is the
/// `x2 - y2` at which the odds fall to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table1Row {
    pub sample_size: u64,
    /// Large-sample odds at `x2 = y2`, i.e. `√(m/π)`.
    pub max_odds: f64,
    /// Exact odds at `x2 = y2`.
    pub max_odds_exact: f64,
    /// Root with the pooled margins held at their `d = 0` values, which
    /// gives `d² = 2m ln(m/π)`.
    pub critical_d: f64,
    /// `critical_d / √m`.
    pub ratio: f64,
    /// Root of the large-sample form with margins moving with `d`.
    pub critical_d_full: f64,
    /// Root of the exact form on the continuous relaxation.
    pub critical_d_exact: f64,
}

/// Regenerate the two-proportion table for the given first-sample sizes.
pub fn jeffreys1935_table(sizes: &[u64]) -> Result<Vec<Table1Row>> {
    sizes.iter().map(|&m| jeffreys1935_row(m)).collect()
}

pub fn jeffreys1935_row(m: u64) -> Result<Table1Row> {
    if m < 4 || !m.is_multiple_of(2) {
        return Err(domain("jeffreys1935_table", format!("sample size must be even and at least 4, got {m}")));
    }
    let mf = m as f64;
    let h = 0.5 * mf;
    // Second sample: x2 = (m + d)/2, y2 = (m - d)/2.
    let full = |d: f64| approx_ln_odds(h, h, 0.5 * (mf + d), 0.5 * (mf - d));
    let exact = |d: f64| exact_ln_odds(h, h, 0.5 * (mf + d), 0.5 * (mf - d));
    // Same expression with succ = fail = m in both the outside factor and the
    // exponent's denominator.
    let held = |d: f64| {
        let total = 2.0 * mf;
        let cross = -h * d;
        0.5 * (total * mf * mf / (2.0 * PI * mf * mf)).ln() - 0.5 * total * cross * cross / (mf * mf * mf * mf)
    };

    let max_odds = full(0.0).exp();
    if max_odds <= 1.0 {
        return Err(domain("jeffreys1935_table", format!("odds never exceed one at m={m}")));
    }
    let hi = mf * (1.0 - 1e-9);
    let critical_d = find_root(held, 0.0, mf, ROOT_TOL)?;
    let critical_d_full = find_root(full, 0.0, hi, ROOT_TOL)?;
    let critical_d_exact = find_root(exact, 0.0, hi, ROOT_TOL)?;
    Ok(Table1Row {
        sample_size: m,
        max_odds,
        max_odds_exact: exact(0.0).exp(),
        critical_d,
        ratio: critical_d / mf.sqrt(),
        critical_d_full,
        critical_d_exact,
    })
}

/// Sizes printed in the 1935 table.
pub const TABLE1_SIZES: [u64; 7] = [40, 100, 200, 400, 1_000, 10_000, 100_000];

/// Two-sided binomial p-value by tail doubling:
/// `min(1, 2 min(P(X <= s), P(X >= s)))`.
pub fn binomial_two_sided_p(outcome: &BinomialOutcome) -> Result<f64> {
    let o = outcome;
    let lower = binomial_lower_tail(o.s, o.n, o.theta0)?;
    let upper = binomial_upper_tail(o.s, o.n, o.theta0)?;
    Ok((2.0 * lower.min(upper)).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimplissimusResult {
    pub n: u64,
    pub s: u64,
    pub p_value: f64,
    pub sample_proportion: f64,
    /// `ln L(0.5) - ln L(0.5 + ε)` at `(n, s)`; positive favours 0.5.
    pub ln_likelihood_ratio: f64,
}

impl SimplissimusResult {
    pub fn likelihood_ratio(&self) -> f64 {
        self.ln_likelihood_ratio.exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplissimusOptions {
    /// Only consider `n` for which `n (0.5 + ε/7)` is an integer.
    pub perfect_only: bool,
    pub max_n: u64,
}

impl Default for SimplissimusOptions {
    fn default() -> Self {
        SimplissimusOptions { perfect_only: true, max_n: 10_000_000 }
    }
}

/// Smallest `n` whose count `s = round(n (0.5 + ε/7))` reaches a two-sided
/// p at or below `target_p`.
pub fn simplissimus_construct(epsilon: f64, target_p: f64) -> Result<SimplissimusResult> {
    simplissimus_construct_with(epsilon, target_p, &SimplissimusOptions::default())
}

pub fn simplissimus_construct_with(
    epsilon: f64,
    target_p: f64,
    opts: &SimplissimusOptions,
) -> Result<SimplissimusResult> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(domain("simplissimus_construct", format!("epsilon must lie in (0, 0.5), got {epsilon}")));
    }
    check_probability("simplissimus_construct", target_p)?;
    let q = 0.5 + epsilon / 7.0;
    for n in 1..=opts.max_n {
        let exact = n as f64 * q;
        let s = exact.round();
        if opts.perfect_only && (exact - s).abs() > 1e-9 * n as f64 {
            continue;
        }
        let s = s as u64;
        let p_value = binomial_two_sided_p(&BinomialOutcome { n, s, theta0: 0.5 })?;
        if p_value <= target_p {
            return Ok(SimplissimusResult {
                n,
                s,
                p_value,
                sample_proportion: s as f64 / n as f64,
                ln_likelihood_ratio: binomial_log_kernel(n, s, 0.5) - binomial_log_kernel(n, s, 0.5 + epsilon),
            });
        }
    }
    Err(Error::SearchBudget {
        op: "simplissimus_construct",
        detail: format!("no n <= {} reaches p <= {target_p}", opts.max_n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BagComparison {
    pub theta: f64,
    /// `ln L(θ0) - ln L(θ)`; positive favours θ0.
    pub ln_likelihood_difference: f64,
}

pub fn bag_likelihood_comparison(outcome: &BinomialOutcome, candidate_thetas: &[f64]) -> Result<Vec<BagComparison>> {
    let base = outcome.log_likelihood(outcome.theta0);
    candidate_thetas
        .iter()
        .map(|&theta| {
            check_probability("bag_likelihood_comparison", theta)?;
            let diff = if theta == outcome.theta0 { 0.0 } else { base - outcome.log_likelihood(theta) };
            Ok(BagComparison { theta, ln_likelihood_difference: diff })
        })
        .collect()
}
