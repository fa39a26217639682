//! Regenerates published values and checks them against the fixture file
//! `data/paper_values.toml`.
//!
//! Fixture rows name a `(table, key)` pair; this module knows how to compute
//! every pair it supports. Tolerances, modes and flags live in the data file
//! only.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    jeffreys1936_table, perinull_ln_bf, uniformity_table, z_for_alpha, Sidedness, TABLE4_SIZES, UNIFORMITY_C_FIRST,
    UNIFORMITY_C_SECOND,
};
use crate::numcore::{normal_quantile, student_t_quantile};
use crate::proportions::{
    binomial_two_sided_p, jeffreys1935_table, simplissimus_construct, BinomialOutcome, TABLE1_SIZES,
};
use crate::student::{
    cauchy_t_bf10, critical_t_for_unit_bf, jeffreys1938_ln_k, one_sided_p, posterior_direction_masses, CauchyPrior,
    TTestSpec, TABLE3_SIZES,
};

/// The bundled fixture file.
pub const PAPER_VALUES: &str = include_str!("../data/paper_values.toml");

/// Deliberate formula changes used to check that the report notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Use `n - 2` instead of `n - 3` as the t-test power.
    TExponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToleranceMode {
    Abs,
    Rel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Flagged,
}

#[derive(Debug, Clone, Deserialize)]
struct FixtureFile {
    schema: u32,
    rows: Vec<FixtureRow>,
}

#[derive(Debug, Clone, Deserialize)]
struct FixtureRow {
    table: String,
    key: String,
    paper: f64,
    tol: f64,
    mode: ToleranceMode,
    #[serde(default)]
    flag: Option<String>,
    #[serde(default)]
    note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproRow {
    pub table_id: String,
    pub row_key: String,
    pub paper_value: f64,
    pub computed_value: f64,
    pub tolerance: f64,
    pub mode: ToleranceMode,
    pub status: Status,
    /// Whether the value is inside the tolerance, reported for flagged rows too.
    pub within_tolerance: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ReproRow {
    pub fn delta(&self) -> f64 {
        self.computed_value - self.paper_value
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproReport {
    pub rows: Vec<ReproRow>,
    pub passed: usize,
    pub failed: usize,
    pub flagged: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation: Option<Mutation>,
}

impl ReproReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReproRow> {
        self.rows.iter().filter(|r| r.status == Status::Fail)
    }
}

fn within(computed: f64, paper: f64, tol: f64, mode: ToleranceMode) -> bool {
    let diff = (computed - paper).abs();
    match mode {
        ToleranceMode::Abs => diff <= tol,
        ToleranceMode::Rel => diff <= tol * paper.abs(),
    }
}

/// Run the bundled fixture file.
pub fn reproduce(mutation: Option<Mutation>) -> Result<ReproReport> {
    reproduce_from(PAPER_VALUES, mutation)
}

pub fn reproduce_from(fixtures: &str, mutation: Option<Mutation>) -> Result<ReproReport> {
    let file: FixtureFile = toml::from_str(fixtures).map_err(|e| Error::Fixture(e.to_string()))?;
    if file.schema != 1 {
        return Err(Error::Fixture(format!("unsupported fixture schema {}", file.schema)));
    }
    let computed = computed_values(mutation)?;
    let mut rows = Vec::with_capacity(file.rows.len());
    for f in file.rows {
        let value = *computed
            .get(&(f.table.clone(), f.key.clone()))
            .ok_or_else(|| Error::Fixture(format!("no computation for {}/{}", f.table, f.key)))?;
        if !(f.tol >= 0.0) {
            return Err(Error::Fixture(format!("negative tolerance on {}/{}", f.table, f.key)));
        }
        let ok = within(value, f.paper, f.tol, f.mode);
        let status = match (&f.flag, ok) {
            (Some(_), _) => Status::Flagged,
            (None, true) => Status::Pass,
            (None, false) => Status::Fail,
        };
        rows.push(ReproRow {
            table_id: f.table,
            row_key: f.key,
            paper_value: f.paper,
            computed_value: value,
            tolerance: f.tol,
            mode: f.mode,
            status,
            within_tolerance: ok,
            note: f.flag.or(f.note),
        });
    }
    let count = |s| rows.iter().filter(|r| r.status == s).count();
    Ok(ReproReport {
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        flagged: count(Status::Flagged),
        rows,
        mutation,
    })
}

type Values = BTreeMap<(String, String), f64>;

fn put(values: &mut Values, table: &str, key: impl Into<String>, v: f64) {
    values.insert((table.to_owned(), key.into()), v);
}

/// Every value the fixture file may refer to.
pub fn computed_values(mutation: Option<Mutation>) -> Result<Values> {
    let mut v = Values::new();

    for row in jeffreys1935_table(&TABLE1_SIZES)? {
        let m = row.sample_size;
        put(&mut v, "jeffreys1935", format!("{m}/odds"), row.max_odds);
        put(&mut v, "jeffreys1935", format!("{m}/critical_d"), row.critical_d);
        put(&mut v, "jeffreys1935", format!("{m}/ratio"), row.ratio);
    }

    for (n, ratio) in jeffreys1936_table()? {
        put(&mut v, "jeffreys1936", n.to_string(), ratio);
    }

    for &n in &TABLE3_SIZES {
        let nf = n as f64;
        let t = student_t_quantile(0.975, nf - 1.0)?;
        let exponent = match mutation {
            Some(Mutation::TExponent) => nf - 2.0,
            None => nf - 3.0,
        };
        put(&mut v, "jeffreys1938t", n.to_string(), jeffreys1938_ln_k(t, nf, exponent).exp());
    }

    for row in uniformity_table(&TABLE4_SIZES, UNIFORMITY_C_FIRST, UNIFORMITY_C_SECOND)? {
        let n = row.n;
        for (col, val) in [
            ("k_first", row.k_first),
            ("k_second", row.k_second),
            ("root_first", row.root_first),
            ("root_second", row.root_second),
            ("chi2_first", row.chi2_first),
            ("chi2_second", row.chi2_second),
        ] {
            put(&mut v, "jeffreys1938chi2", format!("{n}/{col}"), val);
        }
    }

    let prior = CauchyPrior::default();
    for (t, n) in [(2.321, 20u64), (2.113, 82), (2.062, 332)] {
        let spec = TTestSpec::new(t, n)?;
        let key = format!("t={t},n={n}");
        put(&mut v, "cauchy_t", format!("{key}/bf10"), cauchy_t_bf10(&spec, &prior)?.bf10());
        let dir = posterior_direction_masses(&spec, &prior)?;
        put(&mut v, "cauchy_t", format!("{key}/mass_negative"), dir.mass_negative);
        put(&mut v, "cauchy_t", format!("{key}/bf_plus_minus"), dir.bf_plus_minus);
        put(&mut v, "cauchy_t", format!("{key}/p_one_sided"), one_sided_p(&spec)?);
    }
    put(&mut v, "cauchy_t", "prior_ordinate", prior.ordinate_at_zero());

    for (g0, g1) in [(0.1, 1.0), (0.05, 1.0)] {
        for alpha in [0.05, 0.01] {
            let z = z_for_alpha(alpha, Sidedness::One)?;
            let bound = perinull_ln_bf(z, 1e8, g0, g1).exp();
            put(&mut v, "perinull", format!("g0={g0},alpha={alpha}"), bound);
        }
    }

    let simp = simplissimus_construct(0.07, 0.01)?;
    put(&mut v, "good", "simplissimus/n", simp.n as f64);
    put(&mut v, "good", "simplissimus/s", simp.s as f64);
    put(&mut v, "good", "simplissimus/proportion", simp.sample_proportion);
    put(&mut v, "good", "simplissimus/p", simp.p_value);
    for (s, n) in [(120u64, 200u64), (429, 780), (9690, 19000)] {
        let p = binomial_two_sided_p(&BinomialOutcome::new(n, s, 0.5)?)?;
        put(&mut v, "good", format!("bag {s}/{n}/p"), p);
    }
    // Half the draws plus √N white, N a perfect square.
    let big_n = 10_000u64;
    let p = binomial_two_sided_p(&BinomialOutcome::new(big_n, big_n / 2 + 100, 0.5)?)?;
    put(&mut v, "good", format!("bag N={big_n}/p"), p);

    for n in [10u64, 100, 100_000] {
        let ratio = crate::gaussian::least_squares_critical_ratio(n)?;
        put(&mut v, "quoted", format!("least_squares n={n}"), ratio);
    }
    put(&mut v, "quoted", "t asymptote n=100000", critical_t_for_unit_bf(100_000)?.asymptotic);
    put(&mut v, "quoted", "z 0.975", normal_quantile(0.975)?);
    // One of fifteen independent deviations beyond the quoted single-test p.
    put(&mut v, "quoted", "one of 15", 1.0 - (1.0 - 0.00041f64).powi(15));

    Ok(v)
}
