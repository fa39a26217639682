//! One-sample t-test Bayes factors.
//!
//! The Cauchy-prior factor needs the noncentral t density, computed here
//! from its mixture representation
//!
//! ```text
//! f(t; ν, λ) = C_ν ∫₀^∞ s^ν exp(-(t s - λ)²/2 - ν s²/2) ds,
//! ln C_ν = ln 2 + (ν/2) ln ν - (ν/2) ln 2 - ln Γ(ν/2) - ln √(2π),
//! ```
//!
//! where `s = √(V/ν)` and `V ~ χ²_ν`. The integrand peaks at
//! `s* = (tλ + √(t²λ² + 4ν(ν + t²))) / (2(ν + t²))`, which is where the
//! inner quadrature places its break points.

use std::cell::Cell;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numcore::special::ln_gamma_unchecked;
use crate::numcore::{
    find_root, integrate_with_breaks, student_t_log_pdf, student_t_quantile, student_t_sf, Budget, Domain,
    EvidenceRatio, Orientation, LN_SQRT_2PI, ROOT_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTestSpec {
    pub t: f64,
    pub n: u64,
}

impl TTestSpec {
    pub fn new(t: f64, n: u64) -> Result<Self> {
        if n < 2 || !t.is_finite() {
            return Err(domain("TTestSpec", format!("need finite t and n >= 2, got t={t}, n={n}")));
        }
        Ok(TTestSpec { t, n })
    }

    pub fn df(&self) -> f64 {
        (self.n - 1) as f64
    }
}

/// Zero-centred Cauchy prior on the standardized effect δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CauchyPrior {
    pub scale: f64,
}

impl Default for CauchyPrior {
    fn default() -> Self {
        CauchyPrior { scale: FRAC_1_SQRT_2 }
    }
}

impl CauchyPrior {
    pub fn new(scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(domain("CauchyPrior", format!("scale must be positive, got {scale}")));
        }
        Ok(CauchyPrior { scale })
    }

    pub fn density(&self, delta: f64) -> f64 {
        let u = delta / self.scale;
        1.0 / (PI * self.scale * (1.0 + u * u))
    }

    pub fn ordinate_at_zero(&self) -> f64 {
        1.0 / (PI * self.scale)
    }
}

/// `K = √(2n/π) · (1 + t²/(n-1))^(-(n-3)/2)`, warning below n = 4.
pub fn jeffreys1938_t_bf(spec: &TTestSpec) -> EvidenceRatio {
    let n = spec.n as f64;
    let k = EvidenceRatio::from_ln(jeffreys1938_ln_k(spec.t, n, n - 3.0), Orientation::NullOverAlt);
    if spec.n < 4 {
        k.with_warning(format!("n = {} < 4: the exponent no longer penalises large t", spec.n))
    } else {
        k
    }
}

/// `ln K` with the power's numerator `exponent` supplied by the caller
/// (`n - 3` in the published form).
pub fn jeffreys1938_ln_k(t: f64, n: f64, exponent: f64) -> f64 {
    0.5 * (2.0 * n / PI).ln() - 0.5 * exponent * (t * t / (n - 1.0)).ln_1p()
}

/// Sample sizes of the t-test table.
pub const TABLE3_SIZES: [u64; 8] = [5, 6, 7, 8, 9, 10, 20, 30];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table3Row {
    pub n: u64,
    /// Two-sided 5% point of t on `n - 1` degrees of freedom.
    pub t: f64,
    pub k: f64,
}

/// `K` at the two-sided 5% point of `t` with `n - 1` degrees of freedom.
pub fn jeffreys1938_table(sizes: &[u64]) -> Result<Vec<Table3Row>> {
    sizes
        .iter()
        .map(|&n| {
            let t = student_t_quantile(0.975, (n - 1) as f64)?;
            Ok(Table3Row { n, t, k: jeffreys1938_t_bf(&TTestSpec::new(t, n)?).bf01() })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalT {
    /// Root of `K(t) = 1`.
    pub exact: f64,
    /// `√(ln(2n/π))`.
    pub asymptotic: f64,
}

pub fn critical_t_for_unit_bf(n: u64) -> Result<CriticalT> {
    let nf = n as f64;
    if n < 4 || 2.0 * nf / PI <= 1.0 {
        return Err(domain("critical_t_for_unit_bf", format!("need n >= 4, got {n}")));
    }
    let g = |t: f64| jeffreys1938_ln_k(t, nf, nf - 3.0);
    let mut hi = 1.0;
    while g(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NotBracketed { lo: 0.0, hi, g_lo: g(0.0), g_hi: g(hi) });
        }
    }
    Ok(CriticalT { exact: find_root(g, 0.0, hi, ROOT_TOL)?, asymptotic: (2.0 * nf / PI).ln().sqrt() })
}

/// Relative tolerance of the inner (noncentral t) integral.
const INNER_REL_TOL: f64 = 1e-12;
/// Relative tolerance of integrals over δ; looser than the inner one so the
/// inner integral's rounding noise stays below it.
const OUTER_REL_TOL: f64 = 1e-9;

fn nct_ln_const(nu: f64) -> f64 {
    std::f64::consts::LN_2 + 0.5 * nu * nu.ln()
        - 0.5 * nu * std::f64::consts::LN_2
        - ln_gamma_unchecked(0.5 * nu)
        - LN_SQRT_2PI
}

/// `ln f(t; ν, λ)` for the noncentral t distribution.
pub fn noncentral_t_log_pdf(t: f64, nu: f64, lambda: f64, budget: &Budget) -> Result<f64> {
    if !(nu > 0.0) || !t.is_finite() || !lambda.is_finite() {
        return Err(domain(
            "noncentral_t_log_pdf",
            format!("need nu > 0 and finite t, lambda; got {nu}, {t}, {lambda}"),
        ));
    }
    let t2 = t * t;
    let s_star = (t * lambda + (t2 * lambda * lambda + 4.0 * nu * (nu + t2)).sqrt()) / (2.0 * (nu + t2));
    let width = 1.0 / (nu / (s_star * s_star) + t2 + nu).sqrt();
    let d_star = t * s_star - lambda;
    let h_star = nu * s_star.ln() - 0.5 * d_star * d_star - 0.5 * nu * s_star * s_star;
    // h(s*+u) - h(s*), expanded so large λ does not cancel catastrophically.
    let dh = |s: f64| {
        let u = s - s_star;
        nu * (u / s_star).ln_1p() - 0.5 * t * u * (2.0 * d_star + t * u) - 0.5 * nu * u * (2.0 * s_star + u)
    };
    let breaks: Vec<f64> = [-8.0, -3.0, -1.0, 0.0, 1.0, 3.0, 8.0].iter().map(|k| s_star + k * width).collect();
    let r = integrate_with_breaks(
        |s| if s <= 0.0 { 0.0 } else { dh(s).exp() },
        Domain::UpperHalfLine(0.0),
        &breaks,
        &budget.quad(0.0, INNER_REL_TOL),
    )?;
    Ok(nct_ln_const(nu) + h_star + r.value.ln())
}

/// Likelihood of `t` as a function of δ, divided by its value near the peak.
struct Likelihood {
    t: f64,
    nu: f64,
    sqrt_n: f64,
    /// `ln f` at the reference point, added back at the end.
    ln_ref: f64,
    peak: f64,
}

impl Likelihood {
    fn new(spec: &TTestSpec, budget: &Budget) -> Result<Self> {
        let sqrt_n = (spec.n as f64).sqrt();
        let peak = spec.t / sqrt_n;
        let ln_ref = noncentral_t_log_pdf(spec.t, spec.df(), spec.t, budget)?;
        Ok(Likelihood { t: spec.t, nu: spec.df(), sqrt_n, ln_ref, peak })
    }

    fn scaled(&self, delta: f64, budget: &Budget) -> Result<f64> {
        Ok((noncentral_t_log_pdf(self.t, self.nu, delta * self.sqrt_n, budget)? - self.ln_ref).exp())
    }

    /// Break points on the δ axis: 0, the peak, and the peak ± k/√n.
    fn delta_breaks(&self) -> Vec<f64> {
        let w = 1.0 / self.sqrt_n;
        let mut b = vec![0.0, self.peak];
        for k in [1.0, 3.0, 8.0] {
            b.push(self.peak - k * w);
            b.push(self.peak + k * w);
        }
        b
    }
}

/// Runs an integrand that can fail, keeping the first error.
fn guarded<F>(f: F) -> (impl FnMut(f64) -> f64, std::rc::Rc<Cell<Option<Error>>>)
where
    F: Fn(f64) -> Result<f64>,
{
    let slot = std::rc::Rc::new(Cell::new(None));
    let inner = slot.clone();
    let g = move |x: f64| match f(x) {
        Ok(v) => v,
        Err(e) => {
            let prev = inner.take();
            inner.set(Some(prev.unwrap_or(e)));
            f64::NAN
        }
    };
    (g, slot)
}

fn integrate_fallible<F>(f: F, range: Domain, breaks: &[f64], budget: &Budget, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (g, slot) = guarded(f);
    let r = integrate_with_breaks(g, range, breaks, &budget.quad(0.0, rel_tol));
    match slot.take() {
        Some(e) => Err(e),
        None => Ok(r?.value),
    }
}

/// Prior-weighted likelihood mass on `δ < 0` and `δ > 0`, in units of
/// `exp(ln_ref)`.
fn marginal_halves(lik: &Likelihood, prior: &CauchyPrior, budget: &Budget) -> Result<(f64, f64)> {
    let f = |d: f64| Ok(lik.scaled(d, budget)? * prior.density(d));
    let breaks = lik.delta_breaks();
    let neg = integrate_fallible(f, Domain::LowerHalfLine(0.0), &breaks, budget, OUTER_REL_TOL)?;
    let pos = integrate_fallible(f, Domain::UpperHalfLine(0.0), &breaks, budget, OUTER_REL_TOL)?;
    Ok((neg, pos))
}

/// BF10 for a one-sample t-test with a Cauchy prior on δ:
/// marginal likelihood under the prior over the central t density.
pub fn cauchy_t_bf10(spec: &TTestSpec, prior: &CauchyPrior) -> Result<EvidenceRatio> {
    cauchy_t_bf10_with_budget(spec, prior, &Budget::default())
}

pub fn cauchy_t_bf10_with_budget(spec: &TTestSpec, prior: &CauchyPrior, budget: &Budget) -> Result<EvidenceRatio> {
    let lik = Likelihood::new(spec, budget)?;
    let (neg, pos) = marginal_halves(&lik, prior, budget)?;
    let ln_marginal = lik.ln_ref + (neg + pos).ln();
    let ln_null = student_t_log_pdf(spec.t, spec.df())?;
    Ok(EvidenceRatio::from_ln(ln_marginal - ln_null, Orientation::AltOverNull))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionalEvidence {
    /// Posterior mass on `δ < 0` under the alternative.
    pub mass_negative: f64,
    /// Positive over negative effect.
    pub bf_plus_minus: f64,
}

pub fn posterior_direction_masses(spec: &TTestSpec, prior: &CauchyPrior) -> Result<DirectionalEvidence> {
    posterior_direction_masses_with_budget(spec, prior, &Budget::default())
}

pub fn posterior_direction_masses_with_budget(
    spec: &TTestSpec,
    prior: &CauchyPrior,
    budget: &Budget,
) -> Result<DirectionalEvidence> {
    let lik = Likelihood::new(spec, budget)?;
    let (neg, pos) = marginal_halves(&lik, prior, budget)?;
    if !(neg > 0.0 && pos > 0.0) {
        return Err(domain(
            "posterior_direction_masses",
            format!("a half-line mass underflowed at t={}, n={}", spec.t, spec.n),
        ));
    }
    let ev = DirectionalEvidence { mass_negative: neg / (neg + pos), bf_plus_minus: pos / neg };
    let identity = (1.0 - ev.mass_negative) / ev.mass_negative;
    debug_assert!(((identity - ev.bf_plus_minus) / ev.bf_plus_minus).abs() <= 1e-9);
    Ok(ev)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SavageDickey {
    pub evidence: EvidenceRatio,
    pub prior_ordinate: f64,
    pub posterior_ordinate: f64,
}

/// BF10 as prior over posterior density of δ at zero.
///
/// The posterior normaliser is integrated in `θ = atan(δ/r)`, where the
/// Cauchy weight becomes the constant `1/π`, and the likelihood at zero
/// comes from the same mixture integral as every other point. Neither step
/// shares node placement or the closed-form central t density with
/// [`cauchy_t_bf10`], so the two routes check each other.
pub fn savage_dickey_bf10(spec: &TTestSpec, prior: &CauchyPrior) -> Result<SavageDickey> {
    savage_dickey_bf10_with_budget(spec, prior, &Budget::default())
}

pub fn savage_dickey_bf10_with_budget(spec: &TTestSpec, prior: &CauchyPrior, budget: &Budget) -> Result<SavageDickey> {
    let lik = Likelihood::new(spec, budget)?;
    let r = prior.scale;
    let f = |theta: f64| {
        if theta.abs() >= FRAC_PI_2 {
            return Ok(0.0);
        }
        Ok(lik.scaled(r * theta.tan(), budget)? / PI)
    };
    let breaks: Vec<f64> = lik.delta_breaks().iter().map(|d| (d / r).atan()).collect();
    let normaliser = integrate_fallible(f, Domain::Finite(-FRAC_PI_2, FRAC_PI_2), &breaks, budget, OUTER_REL_TOL)?;
    let lik_at_zero = lik.scaled(0.0, budget)?;
    let prior_ordinate = prior.ordinate_at_zero();
    let posterior_ordinate = lik_at_zero * prior_ordinate / normaliser;
    Ok(SavageDickey {
        evidence: EvidenceRatio::from_ln(prior_ordinate.ln() - posterior_ordinate.ln(), Orientation::AltOverNull),
        prior_ordinate,
        posterior_ordinate,
    })
}

/// `(1 - p) / p`.
pub fn one_sided_p_odds(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("one_sided_p_odds", format!("p must lie in (0, 1), got {p}")));
    }
    Ok((1.0 - p) / p)
}

/// Upper-tail p-value of `t` on `n - 1` degrees of freedom.
pub fn one_sided_p(spec: &TTestSpec) -> Result<f64> {
    student_t_sf(spec.t, spec.df())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParadoxTriple {
    pub t: f64,
    pub n: u64,
    pub bf10: f64,
    pub mass_negative: f64,
    /// `|ln BF10 - ln target|`.
    pub ln_distance: f64,
}

/// Search range for the sample size.
pub const PARADOX_N_RANGE: (u64, u64) = (2, 100_000);

/// Largest `t` tried when solving for a posterior mass.
const T_SEARCH_MAX: f64 = 50.0;

/// Posterior mass on `δ < 0`; may underflow to zero for extreme `t`.
fn mass_negative_at(t: f64, n: u64, prior: &CauchyPrior, budget: &Budget) -> Result<f64> {
    let lik = Likelihood::new(&TTestSpec::new(t, n)?, budget)?;
    let (neg, pos) = marginal_halves(&lik, prior, budget)?;
    Ok(neg / (neg + pos))
}

/// `t` at which the posterior mass on `δ < 0` equals `target`. Small
/// samples cannot push the mass that low for any `t`; that case is a
/// search-budget error.
pub fn t_for_mass_negative(n: u64, target: f64, prior: &CauchyPrior, budget: &Budget) -> Result<f64> {
    if !(target > 0.0 && target < 0.5) {
        return Err(domain("t_for_mass_negative", format!("target must lie in (0, 0.5), got {target}")));
    }
    let floor = mass_negative_at(T_SEARCH_MAX, n, prior, budget)?;
    if floor >= target {
        return Err(Error::SearchBudget {
            op: "t_for_mass_negative",
            detail: format!("mass stays at {floor:.6} or above for t <= {T_SEARCH_MAX} at n={n}"),
        });
    }
    let err = Cell::new(None);
    let g = |t: f64| match mass_negative_at(t, n, prior, budget) {
        Ok(m) => m.ln() - target.ln(),
        Err(e) => {
            err.set(Some(e));
            f64::NAN
        }
    };
    let mut hi = 2.0;
    while hi < T_SEARCH_MAX && g(hi) > 0.0 {
        hi = (2.0 * hi).min(T_SEARCH_MAX);
    }
    let root = find_root(g, 0.0, hi, 1e-9);
    match err.take() {
        Some(e) => Err(e),
        None => root,
    }
}

/// Find `(t, n)` whose posterior mass on `δ < 0` is `target_mass_negative`
/// and whose BF10 is as close as possible to `target_bf10`.
///
/// With the mass held fixed BF10 falls as n grows, so the search bisects on
/// n and then keeps whichever neighbour is closer on the log scale.
pub fn paradox_triple_construct(
    target_mass_negative: f64,
    target_bf10: f64,
    prior: &CauchyPrior,
) -> Result<ParadoxTriple> {
    paradox_triple_construct_with_budget(target_mass_negative, target_bf10, prior, &Budget::default())
}

pub fn paradox_triple_construct_with_budget(
    target_mass_negative: f64,
    target_bf10: f64,
    prior: &CauchyPrior,
    budget: &Budget,
) -> Result<ParadoxTriple> {
    if !(target_bf10 > 0.0) || !target_bf10.is_finite() {
        return Err(domain("paradox_triple_construct", format!("target BF10 must be positive, got {target_bf10}")));
    }
    let ln_target = target_bf10.ln();
    let mut steps = 0usize;
    let mut eval = |n: u64| -> Result<ParadoxTriple> {
        steps += 1;
        if steps > budget.search_steps {
            return Err(Error::SearchBudget {
                op: "paradox_triple_construct",
                detail: format!("more than {} sample sizes tried", budget.search_steps),
            });
        }
        let t = t_for_mass_negative(n, target_mass_negative, prior, budget)?;
        let spec = TTestSpec::new(t, n)?;
        let bf = cauchy_t_bf10_with_budget(&spec, prior, budget)?;
        let mass = posterior_direction_masses_with_budget(&spec, prior, budget)?.mass_negative;
        Ok(ParadoxTriple { t, n, bf10: bf.value(), mass_negative: mass, ln_distance: (bf.log_value - ln_target).abs() })
    };

    let (mut lo, mut hi) = PARADOX_N_RANGE;
    // The mass target is out of reach for the smallest samples; start the
    // search at the first n where it can be met.
    let reachable =
        |n: u64| -> Result<bool> { Ok(mass_negative_at(T_SEARCH_MAX, n, prior, budget)? < target_mass_negative) };
    if !reachable(hi)? {
        return Err(Error::SearchBudget {
            op: "paradox_triple_construct",
            detail: format!("mass {target_mass_negative} is unreachable even at n={hi}"),
        });
    }
    if !reachable(lo)? {
        let (mut a, mut b) = (lo, hi);
        while b - a > 1 {
            let mid = a + (b - a) / 2;
            if reachable(mid)? {
                b = mid;
            } else {
                a = mid;
            }
        }
        lo = b;
    }
    let mut at_lo = eval(lo)?;
    let mut at_hi = eval(hi)?;
    let above = |p: &ParadoxTriple| p.bf10.ln() > ln_target;
    if !above(&at_lo) || above(&at_hi) {
        return Err(Error::SearchBudget {
            op: "paradox_triple_construct",
            detail: format!(
                "BF10 runs from {:.4} at n={lo} to {:.4} at n={hi}; target {target_bf10} is outside",
                at_lo.bf10, at_hi.bf10
            ),
        });
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let at_mid = eval(mid)?;
        if above(&at_mid) {
            lo = mid;
            at_lo = at_mid;
        } else {
            hi = mid;
            at_hi = at_mid;
        }
    }
    Ok(if at_lo.ln_distance <= at_hi.ln_distance { at_lo } else { at_hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{integrate, student_t_pdf, QuadratureOptions};
    use proptest::prelude::*;

    const FIG_MASS: f64 = 0.020_417_83;

    fn spec(t: f64, n: u64) -> TTestSpec {
        TTestSpec::new(t, n).unwrap()
    }

    #[test]
    fn jeffreys_t_examples() {
        let t = student_t_quantile(0.975, 9.0).unwrap();
        assert!((jeffreys1938_t_bf(&spec(t, 10)).bf01() - 0.522).abs() < 0.001);
        for n in [2u64, 5, 40] {
            let k = jeffreys1938_t_bf(&spec(0.0, n));
            assert!((k.bf01() - (2.0 * n as f64 / PI).sqrt()).abs() < 1e-12);
            assert!(k.bf01() > 1.0);
        }
        assert_eq!(jeffreys1938_t_bf(&spec(1.0, 3)).warnings.len(), 1);
        assert!(TTestSpec::new(1.0, 1).is_err());
    }

    #[test]
    fn critical_t_examples() {
        let c = critical_t_for_unit_bf(100_000).unwrap();
        assert!((c.asymptotic - 3.32).abs() < 0.01);
        assert!((c.exact - c.asymptotic).abs() < 0.05);
        assert!(critical_t_for_unit_bf(10_000).unwrap().exact < critical_t_for_unit_bf(1_000_000).unwrap().exact);

        // Dense grid scan for the sign change of ln K at n = 50.
        let exact = critical_t_for_unit_bf(50).unwrap().exact;
        let step = 1e-5;
        let mut t = 0.0;
        while jeffreys1938_ln_k(t + step, 50.0, 47.0) > 0.0 {
            t += step;
        }
        assert!((exact - t).abs() <= step);
    }

    #[test]
    fn nct_reduces_to_central_t() {
        let b = Budget::default();
        for (t, nu) in [(0.0, 1.0), (2.321, 19.0), (-1.2, 4.5), (6.0, 331.0)] {
            let got = noncentral_t_log_pdf(t, nu, 0.0, &b).unwrap();
            assert!((got - student_t_log_pdf(t, nu).unwrap()).abs() < 1e-10, "t={t}, nu={nu}");
        }
    }

    #[test]
    fn nct_integrates_to_one() {
        let b = Budget::default();
        for (nu, lambda) in [(5.0, 1.5), (30.0, -2.0)] {
            let r = integrate(
                |t| noncentral_t_log_pdf(t, nu, lambda, &b).unwrap().exp(),
                Domain::Real,
                &QuadratureOptions::with_tolerances(1e-12, 1e-10),
            )
            .unwrap();
            assert!((r.value - 1.0).abs() < 1e-8, "nu={nu}: {}", r.value);
        }
    }

    #[test]
    fn nct_mean_matches_closed_form() {
        // E[T] = λ √(ν/2) Γ((ν-1)/2) / Γ(ν/2) for ν > 1.
        let b = Budget::default();
        let (nu, lambda) = (12.0, 1.7);
        let r = integrate(
            |t| t * noncentral_t_log_pdf(t, nu, lambda, &b).unwrap().exp(),
            Domain::Real,
            &QuadratureOptions::with_tolerances(1e-12, 1e-10),
        )
        .unwrap();
        let mean =
            lambda * (nu / 2.0f64).sqrt() * (ln_gamma_unchecked((nu - 1.0) / 2.0) - ln_gamma_unchecked(nu / 2.0)).exp();
        assert!((r.value - mean).abs() < 1e-8);
    }

    /// BF10 by the inverse-gamma mixture over g (Zellner-Siow form).
    fn jzs_oracle(t: f64, n: u64, r: f64) -> f64 {
        let (nf, nu) = (n as f64, (n - 1) as f64);
        let null = -(nu + 1.0) / 2.0 * (t * t / nu).ln_1p();
        let f = |g: f64| {
            if g <= 0.0 {
                return 0.0;
            }
            let v = 1.0 + nf * g;
            let ln_lik = -0.5 * v.ln() - (nu + 1.0) / 2.0 * (t * t / (v * nu)).ln_1p();
            let ln_prior = r.ln() - LN_SQRT_2PI - 1.5 * g.ln() - r * r / (2.0 * g);
            (ln_lik + ln_prior - null).exp()
        };
        integrate(f, Domain::UpperHalfLine(0.0), &QuadratureOptions::with_tolerances(1e-13, 1e-11)).unwrap().value
    }

    #[test]
    fn cauchy_bf_matches_g_mixture() {
        let prior = CauchyPrior::default();
        for (t, n) in [(2.321, 20u64), (0.5, 5), (-3.0, 60), (2.062, 332)] {
            let got = cauchy_t_bf10(&spec(t, n), &prior).unwrap().bf10();
            let want = jzs_oracle(t, n, prior.scale);
            assert!((got / want - 1.0).abs() < 1e-7, "t={t}, n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn figure_triples() {
        let prior = CauchyPrior::default();
        for (t, n, bf) in [(2.321, 20u64, 2.0), (2.113, 82, 1.0), (2.062, 332, 0.5)] {
            let got = cauchy_t_bf10(&spec(t, n), &prior).unwrap();
            assert_eq!(got.orientation, Orientation::AltOverNull);
            assert!((got.bf10() / bf - 1.0).abs() < 0.02, "n={n}: {}", got.bf10());
            let dir = posterior_direction_masses(&spec(t, n), &prior).unwrap();
            assert!((dir.mass_negative - FIG_MASS).abs() < 1e-4);
        }
        let dir = posterior_direction_masses(&spec(2.321, 20), &prior).unwrap();
        assert!((dir.bf_plus_minus - 47.9768).abs() < 0.1);
    }

    #[test]
    fn riemann_grid_oracle() {
        // 1000 × 1000 midpoint grid over (θ, s) with δ = r tan θ; the
        // quadrature route must agree on the prior-weighted likelihood.
        let (t, n) = (2.321, 20u64);
        let prior = CauchyPrior::default();
        let (nu, sqrt_n) = (19.0, (20f64).sqrt());
        let ln_c = nct_ln_const(nu);
        let (m, s_max) = (1000usize, 4.0);
        let (dth, ds) = (PI / m as f64, s_max / m as f64);
        let mut total = 0.0;
        for i in 0..m {
            let theta = -FRAC_PI_2 + (i as f64 + 0.5) * dth;
            let lambda = prior.scale * theta.tan() * sqrt_n;
            let mut inner = 0.0;
            for j in 0..m {
                let s = (j as f64 + 0.5) * ds;
                let d = t * s - lambda;
                inner += (ln_c + nu * s.ln() - 0.5 * d * d - 0.5 * nu * s * s).exp();
            }
            total += inner * ds / PI;
        }
        let riemann = total * dth;
        let bf = cauchy_t_bf10(&spec(t, n), &prior).unwrap().bf10();
        let quad = bf * student_t_pdf(t, nu).unwrap();
        assert!((riemann / quad - 1.0).abs() < 1e-5, "{riemann} vs {quad}");
    }

    #[test]
    fn savage_dickey_ordinates() {
        let prior = CauchyPrior::default();
        assert!((prior.ordinate_at_zero() - 0.45).abs() < 0.001);
        let sd = savage_dickey_bf10(&spec(2.321, 20), &prior).unwrap();
        assert!((sd.posterior_ordinate - 0.45 / 2.0).abs() < 0.002);
        let direct = cauchy_t_bf10(&spec(2.321, 20), &prior).unwrap();
        assert!((sd.evidence.log_value - direct.log_value).abs() < 1e-6);
    }

    #[test]
    fn symmetric_at_zero() {
        let prior = CauchyPrior::default();
        let dir = posterior_direction_masses(&spec(0.0, 30), &prior).unwrap();
        assert!((dir.mass_negative - 0.5).abs() < 1e-9);
        assert!((dir.bf_plus_minus - 1.0).abs() < 1e-8);
    }

    #[test]
    fn one_sided_odds() {
        assert!((one_sided_p_odds(FIG_MASS).unwrap() - 47.9768).abs() < 1e-3);
        assert_eq!(one_sided_p_odds(0.5).unwrap(), 1.0);
        assert!(one_sided_p_odds(0.0).is_err() && one_sided_p_odds(1.0).is_err());
        let p = [(2.321, 20u64, 0.016), (2.113, 82, 0.019), (2.062, 332, 0.020)];
        for (t, n, printed) in p {
            assert!((one_sided_p(&spec(t, n)).unwrap() - printed).abs() < 0.0005);
        }
    }

    #[test]
    fn p_odds_approach_direction_factor_slowly() {
        let prior = CauchyPrior::default();
        let gap = |t: f64, n: u64| {
            let s = spec(t, n);
            let bf = posterior_direction_masses(&s, &prior).unwrap().bf_plus_minus;
            (one_sided_p_odds(one_sided_p(&s).unwrap()).unwrap() - bf).abs() / bf
        };
        // Still 8.6% apart at n = 82; inside 5% once n is a few hundred.
        let mid = gap(2.113, 82);
        assert!(mid > 0.08 && mid < 0.09, "{mid}");
        let late = gap(2.062, 332);
        assert!(late < 0.025, "{late}");
        assert!(gap(2.05, 2000) < late);
    }

    #[test]
    fn paradox_triple_middle_panel() {
        let r = paradox_triple_construct(FIG_MASS, 1.0, &CauchyPrior::default()).unwrap();
        assert_eq!(r.n, 82);
        assert!((r.t - 2.113).abs() < 0.001);
        assert!((r.mass_negative - FIG_MASS).abs() < 1e-8);
        assert!(r.ln_distance < 0.01);
    }

    #[test]
    fn paradox_triple_out_of_range() {
        let r = paradox_triple_construct(FIG_MASS, 1e6, &CauchyPrior::default());
        assert!(matches!(r, Err(Error::SearchBudget { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn jeffreys_t_grows_like_sqrt_n(n in 10_000u64..1_000_000) {
            let d = jeffreys1938_t_bf(&spec(0.0, 4 * n)).log_value - jeffreys1938_t_bf(&spec(0.0, n)).log_value;
            prop_assert!((d - 0.5 * 4f64.ln()).abs() < 1e-9);
        }

        #[test]
        fn routes_agree(t in -4.0f64..4.0, n in 3u64..400) {
            let prior = CauchyPrior::default();
            let a = cauchy_t_bf10(&spec(t, n), &prior).unwrap().log_value;
            let b = savage_dickey_bf10(&spec(t, n), &prior).unwrap().evidence.log_value;
            prop_assert!((a - b).abs() <= 1e-4, "{a} vs {b}");
        }

        #[test]
        fn direction_identity(t in -3.0f64..3.0, n in 2u64..200) {
            let dir = posterior_direction_masses(&spec(t, n), &CauchyPrior::default()).unwrap();
            let identity = (1.0 - dir.mass_negative) / dir.mass_negative;
            prop_assert!(((identity - dir.bf_plus_minus) / dir.bf_plus_minus).abs() <= 1e-9);
        }
    }
}
