//! Command bodies. Each returns an [`Output`]; rendering and exit codes are
//! handled by the caller.

use jlp_core::decisions::{
    minimize_weighted_errors_with_prior, rule_critical_value, run_mistake_count, DecisionRule, EffectPrior,
    ScheduleRow, TrialConfig,
};
use jlp_core::gaussian::{
    jeffreys1936_table, lindley_construct, perinull_bf, point_null_gaussian_bf, uniformity_bf, uniformity_table,
    GaussianTestSpec, PeriNullSpec, UniformitySpec, TABLE4_SIZES, UNIFORMITY_C_FIRST, UNIFORMITY_C_SECOND,
};
use jlp_core::proportions::{
    approx_two_proportion_odds_with_guard, exact_two_proportion_odds, jeffreys1935_table, simplissimus_construct_with,
    SimplissimusOptions, TwoProportionCounts, TABLE1_SIZES,
};
use jlp_core::repro::{reproduce as run_reproduce, Mutation, ReproReport};
use jlp_core::student::{
    cauchy_t_bf10_with_budget, jeffreys1938_t_bf, jeffreys1938_table, paradox_triple_construct_with_budget,
    posterior_direction_masses_with_budget, CauchyPrior, TTestSpec, TABLE3_SIZES,
};
use jlp_core::{Budget, EvidenceRatio};
use serde_json::{json, Value};

use crate::output::{Cell, Output, Table};
use crate::{BfSubject, CliError, ConstructKind, DecisionAction, MutateArg, TableName};

type Result<T> = std::result::Result<T, CliError>;

/// Three significant figures, as the odds column is printed.
fn sig3(v: f64) -> Cell {
    let digits = if v.abs() >= 1.0 { v.abs().log10().floor() as i32 + 1 } else { 1 };
    Cell::num(v, (3 - digits).max(0) as usize)
}

pub fn table(name: TableName) -> Result<Output> {
    let inputs = json!({ "name": table_label(name) });
    let command = "table";
    Ok(match name {
        TableName::Jeffreys1935 => {
            let rows = jeffreys1935_table(&TABLE1_SIZES)?;
            let mut t = Table::new(["x + y", "P(q)/P(~q)", "x' - y'", "(x' - y')/(x + y)^1/2"]);
            for r in &rows {
                t.push(vec![
                    Cell::Int(r.sample_size),
                    sig3(r.max_odds),
                    Cell::num(r.critical_d, 1),
                    Cell::num(r.ratio, 2),
                ]);
            }
            let mut out = Output::new(command, inputs, json!({ "rows": rows }));
            out.table = Some(t);
            out
        }
        TableName::Jeffreys1936 => {
            let rows = jeffreys1936_table()?;
            let mut t = Table::new(["n.", "b/σ_b."]);
            for &(n, r) in &rows {
                t.push(vec![Cell::Int(n), Cell::num(r, 2)]);
            }
            let json_rows: Vec<Value> = rows.iter().map(|&(n, r)| json!({ "n": n, "critical_ratio": r })).collect();
            let mut out = Output::new(command, inputs, json!({ "rows": json_rows }));
            out.table = Some(t);
            out
        }
        TableName::Jeffreys1938t => {
            let rows = jeffreys1938_table(&TABLE3_SIZES)?;
            let mut t = Table::new(["n (Fisher's n+1)", "K"]);
            for r in &rows {
                t.push(vec![Cell::Int(r.n), Cell::num(r.k, 3)]);
            }
            let mut out = Output::new(command, inputs, json!({ "rows": rows }));
            out.table = Some(t);
            out
        }
        TableName::Jeffreys1938chi2 => {
            let rows = uniformity_table(&TABLE4_SIZES, UNIFORMITY_C_FIRST, UNIFORMITY_C_SECOND)?;
            let mut t = Table::new(["n", "K", "K", "a0 n^1/2", "a0 n^1/2", "χ²", "χ²"]);
            for r in &rows {
                t.push(vec![
                    Cell::Int(r.n),
                    Cell::num(r.k_first, 2),
                    Cell::num(r.k_second, 2),
                    Cell::num(r.root_first, 2),
                    Cell::num(r.root_second, 2),
                    Cell::num(r.chi2_first, 2),
                    Cell::num(r.chi2_second, 2),
                ]);
            }
            let results = json!({ "c_first": UNIFORMITY_C_FIRST, "c_second": UNIFORMITY_C_SECOND, "rows": rows });
            let mut out = Output::new(command, inputs, results);
            out.table = Some(t);
            out
        }
    })
}

fn table_label(name: TableName) -> &'static str {
    match name {
        TableName::Jeffreys1935 => "jeffreys1935",
        TableName::Jeffreys1936 => "jeffreys1936",
        TableName::Jeffreys1938t => "jeffreys1938t",
        TableName::Jeffreys1938chi2 => "jeffreys1938chi2",
    }
}

fn evidence_output(subject: &str, inputs: Value, ev: &EvidenceRatio, extra: Value) -> Output {
    let mut results = json!({
        "bf": ev.value(),
        "orientation": ev.orientation,
        "label": ev.orientation.label(),
        "warnings": ev.warnings,
    });
    if let (Value::Object(r), Value::Object(e)) = (&mut results, extra) {
        r.extend(e);
    }
    let mut out = Output::new(format!("bf {subject}"), inputs, results);
    out.log_bf = Some(ev.log_value);
    out
}

pub fn bf(subject: BfSubject, budget: &Budget) -> Result<Output> {
    Ok(match subject {
        BfSubject::TwoProp { x, y, x2, y2, approx, min_sample } => {
            let counts = TwoProportionCounts::new(x, y, x2, y2)?;
            let ev = if approx {
                approx_two_proportion_odds_with_guard(&counts, min_sample)?
            } else {
                exact_two_proportion_odds(&counts)
            };
            let inputs = json!({ "x": x, "y": y, "x2": x2, "y2": y2, "approx": approx, "min_sample": min_sample });
            evidence_output("two-prop", inputs, &ev, json!({}))
        }
        BfSubject::Z { a, s, n, m } => {
            let ev = point_null_gaussian_bf(&GaussianTestSpec::new(a, s, n, m)?);
            evidence_output("z", json!({ "a": a, "s": s, "n": n, "m": m }), &ev, json!({}))
        }
        BfSubject::TJeffreys { t, n } => {
            let ev = jeffreys1938_t_bf(&TTestSpec::new(t, n)?);
            evidence_output("t-jeffreys", json!({ "t": t, "n": n }), &ev, json!({}))
        }
        BfSubject::TCauchy { t, n, scale } => {
            let spec = TTestSpec::new(t, n)?;
            let prior = CauchyPrior::new(scale)?;
            let ev = cauchy_t_bf10_with_budget(&spec, &prior, budget)?;
            let dir = posterior_direction_masses_with_budget(&spec, &prior, budget)?;
            let extra = json!({ "mass_negative": dir.mass_negative, "bf_plus_minus": dir.bf_plus_minus });
            evidence_output("t-cauchy", json!({ "t": t, "n": n, "scale": scale }), &ev, extra)
        }
        BfSubject::Perinull { z, n, g0, g1 } => {
            let ev = perinull_bf(&PeriNullSpec::new(z, n, g0, g1)?);
            let extra = json!({ "bound": (g1 / g0).sqrt() });
            evidence_output("perinull", json!({ "z": z, "n": n, "g0": g0, "g1": g1 }), &ev, extra)
        }
        BfSubject::Uniformity { n, a0, c } => {
            let outcome = uniformity_bf(&UniformitySpec::new(n, a0, c)?);
            let extra = json!({ "chi_square": outcome.chi_square });
            evidence_output("uniformity", json!({ "n": n, "a0": a0, "c": c }), &outcome.evidence, extra)
        }
    })
}

pub fn construct(kind: ConstructKind, budget: &Budget) -> Result<Output> {
    Ok(match kind {
        ConstructKind::Figure1 { mass_neg, bf10, scale } => {
            let prior = CauchyPrior::new(scale)?;
            let triple = paradox_triple_construct_with_budget(mass_neg, bf10, &prior, budget)?;
            let inputs = json!({ "mass_neg": mass_neg, "bf10": bf10, "scale": scale });
            let mut out = Output::new("construct figure1", inputs, triple);
            out.log_bf = Some(triple.bf10.ln());
            out
        }
        ConstructKind::Lindley { alpha, posterior, i, sigma, prior_h0 } => {
            let r = lindley_construct(alpha, posterior, i, sigma, prior_h0)?;
            let inputs =
                json!({ "alpha": alpha, "posterior": posterior, "I": i, "sigma": sigma, "prior_h0": prior_h0 });
            let mut out = Output::new("construct lindley", inputs, r);
            out.log_bf = Some(r.k.ln());
            out
        }
        ConstructKind::Simplissimus { epsilon, p, any_n } => {
            let opts = SimplissimusOptions { perfect_only: !any_n, max_n: budget.search_steps as u64 };
            let r = simplissimus_construct_with(epsilon, p, &opts)?;
            let inputs = json!({ "epsilon": epsilon, "p": p, "any_n": any_n });
            let results = json!({
                "n": r.n,
                "s": r.s,
                "p_value": r.p_value,
                "sample_proportion": r.sample_proportion,
                "ln_likelihood_ratio": r.ln_likelihood_ratio,
                "favours_null": r.ln_likelihood_ratio > 0.0,
            });
            Output::new("construct simplissimus", inputs, results)
        }
    })
}

/// A parsed `--rule` value.
#[derive(Debug, Clone, Copy)]
pub enum RuleArg {
    Alpha(f64),
    Bf(f64),
    Weighted(f64),
}

pub fn parse_rule(s: &str) -> std::result::Result<RuleArg, String> {
    let (kind, value) = s.split_once(':').ok_or_else(|| format!("expected KIND:VALUE, got {s:?}"))?;
    let value: f64 = value.parse().map_err(|_| format!("not a number: {value:?}"))?;
    match kind {
        "alpha" => Ok(RuleArg::Alpha(value)),
        "bf" => Ok(RuleArg::Bf(value)),
        "weighted" => Ok(RuleArg::Weighted(value)),
        other => Err(format!("unknown rule {other:?}; use alpha, bf or weighted")),
    }
}

pub fn decision(action: DecisionAction, budget: &Budget) -> Result<Output> {
    Ok(match action {
        DecisionAction::Sweep { lambda, g, n } => {
            if n.is_empty() {
                return Err(CliError::Usage("--n needs at least one sample size".into()));
            }
            let prior = EffectPrior::Normal { variance: g };
            let rows = n
                .iter()
                .map(|&n| {
                    let opt = minimize_weighted_errors_with_prior(lambda, n, &prior, budget)?;
                    Ok(ScheduleRow { n, critical_value: opt.critical_value, alpha: opt.alpha, beta: opt.beta })
                })
                .collect::<std::result::Result<Vec<_>, jlp_core::Error>>()?;
            let mut t = Table::new(["n", "c*", "alpha*", "beta*"]);
            for r in &rows {
                t.push(vec![Cell::Int(r.n), Cell::full(r.critical_value), Cell::full(r.alpha), Cell::full(r.beta)]);
            }
            let mut out =
                Output::new("decision sweep", json!({ "lambda": lambda, "g": g, "n": n }), json!({ "rows": rows }));
            out.table = Some(t);
            out
        }
        DecisionAction::Mc { n, g, prior_h0, trials, seed, rule, g_model, uniform_half_width } => {
            let prior = match uniform_half_width {
                Some(h) => EffectPrior::Uniform { half_width: h },
                None => EffectPrior::Normal { variance: g },
            };
            let config = TrialConfig { n, prior, prior_prob_h0: prior_h0, trials, seed };
            let rule = match rule {
                RuleArg::Alpha(alpha) => DecisionRule::FixedAlpha { alpha },
                RuleArg::Bf(k_crit) => DecisionRule::BfThreshold { k_crit, g_model: g_model.unwrap_or(g) },
                RuleArg::Weighted(lambda) => DecisionRule::Weighted { lambda },
            };
            let c = rule_critical_value(&rule, &config)?;
            let tally = run_mistake_count(&config, &rule)?;
            let rate = |k: u64, m: u64| if m == 0 { None } else { Some(k as f64 / m as f64) };
            let results = json!({
                "rule": rule,
                "critical_value": c,
                "type1": tally.type1,
                "type2": tally.type2,
                "total": tally.total,
                "h0_trials": tally.h0_trials,
                "h1_trials": tally.h1_trials,
                "type1_rate": rate(tally.type1, tally.h0_trials),
                "type2_rate": rate(tally.type2, tally.h1_trials),
                "total_rate": rate(tally.total, trials),
            });
            let inputs = json!({
                "n": n,
                "g": g,
                "prior_h0": prior_h0,
                "trials": trials,
                "prior": prior,
                "g_model": g_model,
            });
            let mut out = Output::new("decision mc", inputs, results);
            out.seed = Some(seed);
            out
        }
    })
}

pub fn reproduce(mutate: Option<MutateArg>) -> Result<(Output, ReproReport)> {
    let mutation = mutate.map(|MutateArg::TExponent| Mutation::TExponent);
    let report = run_reproduce(mutation)?;
    let mut t = Table::new(["table", "key", "paper", "computed", "delta", "tolerance", "mode", "status", "note"]);
    for r in &report.rows {
        t.push(vec![
            Cell::Text(r.table_id.clone()),
            Cell::Text(r.row_key.clone()),
            Cell::full(r.paper_value),
            Cell::full(r.computed_value),
            Cell::full(r.delta()),
            Cell::full(r.tolerance),
            Cell::Text(format!("{:?}", r.mode).to_lowercase()),
            Cell::Text(format!("{:?}", r.status).to_lowercase()),
            Cell::Text(r.note.clone().unwrap_or_default()),
        ]);
    }
    let inputs = json!({ "mutate": mutation });
    let mut out = Output::new("report reproduce", inputs, &report);
    out.table = Some(t);
    out.footer.push(format!(
        "{} passed, {} failed, {} flagged ({} rows)",
        report.passed,
        report.failed,
        report.flagged,
        report.rows.len()
    ));
    Ok((out, report))
}
