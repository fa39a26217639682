//! Type I / Type II error trade-offs for the two-sided z rule and a seeded
//! Monte Carlo harness that counts mistakes.
//!
//! Each Monte Carlo trial `i` draws from its own ChaCha8 stream (the user
//! seed, stream `i`), so tallies do not depend on how rayon splits the work.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::gaussian::perinull_ln_bf;
use crate::numcore::{
    integrate_with_breaks, minimize_scalar, normal_cdf, normal_pdf, normal_quantile, normal_sf, Budget, Domain,
};

/// Upper end of the critical-value search.
pub const C_MAX: f64 = 10.0;
const C_GRID: usize = 201;
const C_TOL: f64 = 1e-6;

/// Distribution of the standardized effect δ under H1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EffectPrior {
    /// `δ ~ N(0, variance)`.
    Normal { variance: f64 },
    /// `δ ~ U(-half_width, half_width)`.
    Uniform { half_width: f64 },
}

impl EffectPrior {
    fn validate(&self) -> Result<()> {
        match *self {
            EffectPrior::Normal { variance: v } if v > 0.0 && v.is_finite() => Ok(()),
            EffectPrior::Uniform { half_width: h } if h > 0.0 && h.is_finite() => Ok(()),
            other => Err(domain("EffectPrior", format!("scale must be positive and finite: {other:?}"))),
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            EffectPrior::Normal { variance } => variance.sqrt() * rng.sample::<f64, _>(StandardNormal),
            EffectPrior::Uniform { half_width } => half_width * (2.0 * rng.random::<f64>() - 1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorTradeoff {
    pub critical_value: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: Option<f64>,
}

impl ErrorTradeoff {
    /// `λα + β`; needs `lambda`.
    pub fn objective(&self) -> Option<f64> {
        self.lambda.map(|l| l * self.alpha + self.beta)
    }
}

/// `α = 2(1 - Φ(c))`.
pub fn alpha_for(c: f64) -> f64 {
    2.0 * normal_sf(c)
}

/// `P(|Z| < c)` for `Z ~ N(μ, 1)`.
fn acceptance_probability(c: f64, mu: f64) -> f64 {
    if mu >= 0.0 {
        normal_cdf(c - mu) - normal_cdf(-c - mu)
    } else {
        normal_cdf(c + mu) - normal_cdf(-c + mu)
    }
}

/// `β(c)`: the chance of keeping H0 when δ is drawn from `prior`, by quadrature.
pub fn beta_for(c: f64, n: u64, prior: &EffectPrior, budget: &Budget) -> Result<f64> {
    prior.validate()?;
    let sqrt_n = (n as f64).sqrt();
    let accept = |d: f64| acceptance_probability(c, d * sqrt_n);
    let edges = [c / sqrt_n, -c / sqrt_n, 0.0];
    let opts = budget.quad(1e-13, 1e-10);
    let r = match *prior {
        EffectPrior::Normal { variance } => {
            let sd = variance.sqrt();
            let mut breaks = edges.to_vec();
            for k in [1.0, 3.0, 6.0] {
                breaks.extend([k * sd, -k * sd, (c + k) / sqrt_n, -(c + k) / sqrt_n]);
            }
            integrate_with_breaks(|d| accept(d) * normal_pdf(d / sd) / sd, Domain::Real, &breaks, &opts)?
        }
        EffectPrior::Uniform { half_width } => integrate_with_breaks(
            |d| accept(d) / (2.0 * half_width),
            Domain::Finite(-half_width, half_width),
            &edges,
            &opts,
        )?,
    };
    Ok(r.value.clamp(0.0, 1.0))
}

/// `α` and `β` for the two-sided rule `|z| > c` under `δ ~ N(0, g)`.
pub fn error_rates(c: f64, n: u64, g: f64) -> Result<ErrorTradeoff> {
    error_rates_with_prior(c, n, &EffectPrior::Normal { variance: g }, &Budget::default())
}

pub fn error_rates_with_prior(c: f64, n: u64, prior: &EffectPrior, budget: &Budget) -> Result<ErrorTradeoff> {
    if !(c > 0.0) || n == 0 {
        return Err(domain("error_rates", format!("need c > 0 and n >= 1, got c={c}, n={n}")));
    }
    Ok(ErrorTradeoff { critical_value: c, alpha: alpha_for(c), beta: beta_for(c, n, prior, budget)?, lambda: None })
}

/// Critical value minimising `λα + β` over `c ∈ [0, 10]`.
pub fn minimize_weighted_errors(lambda: f64, n: u64, g: f64) -> Result<ErrorTradeoff> {
    minimize_weighted_errors_with_prior(lambda, n, &EffectPrior::Normal { variance: g }, &Budget::default())
}

pub fn minimize_weighted_errors_with_prior(
    lambda: f64,
    n: u64,
    prior: &EffectPrior,
    budget: &Budget,
) -> Result<ErrorTradeoff> {
    if !(lambda > 0.0) || !lambda.is_finite() || n == 0 {
        return Err(domain("minimize_weighted_errors", format!("need lambda > 0 and n >= 1, got {lambda}, {n}")));
    }
    prior.validate()?;
    let mut failure = None;
    let mut objective = |c: f64| match beta_for(c, n, prior, budget) {
        Ok(b) => lambda * alpha_for(c) + b,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    check_unimodal(&mut objective)?;
    let (c, _) = minimize_scalar(&mut objective, 0.0, C_MAX, C_GRID, C_TOL)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(ErrorTradeoff {
        critical_value: c,
        alpha: alpha_for(c),
        beta: beta_for(c, n, prior, budget)?,
        lambda: Some(lambda),
    })
}

/// Grid scan confirming the objective falls and then rises, so golden
/// section is safe.
fn check_unimodal(objective: &mut impl FnMut(f64) -> f64) -> Result<()> {
    let step = C_MAX / (C_GRID - 1) as f64;
    let values: Vec<f64> = (0..C_GRID).map(|i| objective(i as f64 * step)).collect();
    if values.iter().any(|v| v.is_nan()) {
        return Err(domain("minimize_weighted_errors", "objective is not finite on the grid"));
    }
    let slack = 1e-12;
    let turn = values.windows(2).position(|w| w[1] > w[0] + slack).unwrap_or(values.len() - 1);
    if values[turn..].windows(2).any(|w| w[1] < w[0] - slack) {
        return Err(domain("minimize_weighted_errors", "objective is not unimodal on [0, 10]"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScheduleRow {
    pub n: u64,
    pub critical_value: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// `α*` at the `λ = 1` optimum for each sample size.
pub fn pearson_alpha_schedule(n_grid: &[u64], g: f64) -> Result<Vec<ScheduleRow>> {
    weighted_schedule(n_grid, 1.0, g)
}

pub fn weighted_schedule(n_grid: &[u64], lambda: f64, g: f64) -> Result<Vec<ScheduleRow>> {
    if n_grid.is_empty() {
        return Err(domain("pearson_alpha_schedule", "empty sample-size grid"));
    }
    n_grid
        .iter()
        .map(|&n| {
            let opt = minimize_weighted_errors(lambda, n, g)?;
            Ok(ScheduleRow { n, critical_value: opt.critical_value, alpha: opt.alpha, beta: opt.beta })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialConfig {
    pub n: u64,
    pub prior: EffectPrior,
    pub prior_prob_h0: f64,
    pub trials: u64,
    pub seed: u64,
}

impl TrialConfig {
    pub fn normal(n: u64, g: f64, prior_prob_h0: f64, trials: u64, seed: u64) -> Self {
        TrialConfig { n, prior: EffectPrior::Normal { variance: g }, prior_prob_h0, trials, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(domain("run_mistake_count", "trials must be at least 1"));
        }
        if self.n == 0 || !(self.prior_prob_h0 > 0.0 && self.prior_prob_h0 < 1.0) {
            return Err(domain("run_mistake_count", format!("need n >= 1 and P(H0) in (0, 1): {self:?}")));
        }
        self.prior.validate()
    }
}

/// How a trial's `z` is turned into a decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecisionRule {
    /// Reject when the two-sided p falls below `alpha`.
    FixedAlpha { alpha: f64 },
    /// Reject when `BF01 < k_crit`, with the factor computed under
    /// `δ ~ N(0, g_model)`.
    BfThreshold { k_crit: f64, g_model: f64 },
    /// Reject beyond the `λα + β` optimal critical value.
    Weighted { lambda: f64 },
}

/// Rejection threshold on `|z|` implied by a rule.
pub fn rule_critical_value(rule: &DecisionRule, config: &TrialConfig) -> Result<f64> {
    match *rule {
        DecisionRule::FixedAlpha { alpha } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(domain("DecisionRule", format!("alpha must lie in (0, 1), got {alpha}")));
            }
            normal_quantile(1.0 - alpha / 2.0)
        }
        DecisionRule::BfThreshold { k_crit, g_model } => {
            if !(k_crit > 0.0) || !(g_model > 0.0) {
                return Err(domain(
                    "DecisionRule",
                    format!("need k_crit > 0 and g_model > 0, got {k_crit}, {g_model}"),
                ));
            }
            // ln BF01(z) = ½ ln s² - z² (s² - 1) / (2 s²) with s² = 1 + n g.
            let s2 = 1.0 + config.n as f64 * g_model;
            let z2 = (s2.ln() - 2.0 * k_crit.ln()) * s2 / (s2 - 1.0);
            debug_assert!(
                z2 <= 0.0 || (perinull_ln_bf(z2.sqrt(), config.n as f64, 0.0, g_model) - k_crit.ln()).abs() < 1e-9
            );
            Ok(z2.max(0.0).sqrt())
        }
        DecisionRule::Weighted { lambda } => {
            Ok(minimize_weighted_errors_with_prior(lambda, config.n, &config.prior, &Budget::default())?.critical_value)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MistakeTally {
    pub h0_trials: u64,
    pub h1_trials: u64,
    /// H0 true, rejected.
    pub type1: u64,
    /// H1 true, retained.
    pub type2: u64,
    pub total: u64,
}

impl MistakeTally {
    fn add(self, o: MistakeTally) -> MistakeTally {
        MistakeTally {
            h0_trials: self.h0_trials + o.h0_trials,
            h1_trials: self.h1_trials + o.h1_trials,
            type1: self.type1 + o.type1,
            type2: self.type2 + o.type2,
            total: self.total + o.total,
        }
    }

    const ZERO: MistakeTally = MistakeTally { h0_trials: 0, h1_trials: 0, type1: 0, type2: 0, total: 0 };
}

/// Draws of one trial: whether H0 holds and the observed `z`.
fn draw_trial(config: &TrialConfig, index: u64) -> (bool, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    let h0 = rng.random::<f64>() < config.prior_prob_h0;
    let delta = if h0 { 0.0 } else { config.prior.sample(&mut rng) };
    let noise: f64 = rng.sample(StandardNormal);
    (h0, delta * (config.n as f64).sqrt() + noise)
}

fn tally_one(h0: bool, z: f64, c: f64) -> MistakeTally {
    let reject = z.abs() > c;
    let (type1, type2) = (u64::from(h0 && reject), u64::from(!h0 && !reject));
    MistakeTally { h0_trials: u64::from(h0), h1_trials: u64::from(!h0), type1, type2, total: type1 + type2 }
}

/// Count Type I and Type II mistakes over `config.trials` simulated
/// experiments, in parallel.
pub fn run_mistake_count(config: &TrialConfig, rule: &DecisionRule) -> Result<MistakeTally> {
    config.validate()?;
    let c = rule_critical_value(rule, config)?;
    Ok((0..config.trials)
        .into_par_iter()
        .map(|i| {
            let (h0, z) = draw_trial(config, i);
            tally_one(h0, z, c)
        })
        .reduce(|| MistakeTally::ZERO, MistakeTally::add))
}

/// Single-threaded version of [`run_mistake_count`]; same tallies.
pub fn run_mistake_count_serial(config: &TrialConfig, rule: &DecisionRule) -> Result<MistakeTally> {
    config.validate()?;
    let c = rule_critical_value(rule, config)?;
    Ok((0..config.trials).fold(MistakeTally::ZERO, |acc, i| {
        let (h0, z) = draw_trial(config, i);
        acc.add(tally_one(h0, z, c))
    }))
}
