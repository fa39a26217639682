use std::process::{Command, Output};

use serde_json::Value;

fn jlp(args: &[&str]) -> Output {
    jlp_env(args, &[])
}

fn jlp_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_jlp"));
    cmd.args(args).env_remove("JLP_EVAL_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("jlp runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn least_squares_table_markdown() {
    let o = jlp(&["table", "jeffreys1936", "--format", "md"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("| n. | b/σ_b. |"));
    for row in ["| 10 | 1.36 |", "| 100 | 2.04 |", "| 1000 | 2.54 |", "| 100000 | 3.33 |"] {
        assert!(text.contains(row), "missing {row}");
    }
    assert_eq!(text.lines().count(), 2 + 14);
}

#[test]
fn t_table_csv() {
    let o = jlp(&["table", "jeffreys1938t", "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "10,0.522"), "{text}");
    assert!(text.lines().any(|l| l == "8,0.520"));
}

#[test]
fn table_json_and_unknown_name() {
    let v = json(&jlp(&["table", "jeffreys1935"]));
    assert_eq!(v["command"], "table");
    assert_eq!(v["results"]["rows"].as_array().unwrap().len(), 7);
    assert!((f(&v["results"]["rows"][0]["max_odds"]) - 3.57).abs() < 0.01);
    assert_eq!(jlp(&["table", "jeffreys1999"]).status.code(), Some(2));
}

#[test]
fn cauchy_t_bf() {
    let v = json(&jlp(&["bf", "t-cauchy", "--t", "2.321", "--n", "20", "--scale", "0.70710678"]));
    assert_eq!(v["results"]["orientation"], "10");
    assert!((f(&v["results"]["bf"]) - 2.0).abs() < 0.04);
    assert!((f(&v["log_bf"]) - f(&v["results"]["bf"]).ln()).abs() < 1e-9);
    assert_eq!(v["inputs"]["n"], 20);
}

#[test]
fn perinull_limit() {
    let v = json(&jlp(&["bf", "perinull", "--z", "1.6449", "--n", "100000000", "--g0", "0.1", "--g1", "1"]));
    assert!((f(&v["results"]["bf"]) - 3.162).abs() < 1e-3);
}

#[test]
fn two_proportions_large_sample() {
    let v = json(&jlp(&["bf", "two-prop", "--x", "20", "--y", "20", "--x2", "20", "--y2", "20", "--approx"]));
    assert!((f(&v["results"]["bf"]) - 3.57).abs() < 0.005);
    assert_eq!(v["results"]["label"], "BF01");
}

#[test]
fn usage_and_numeric_exit_codes() {
    assert_eq!(jlp(&["bf", "t-cauchy", "--t", "two", "--n", "20"]).status.code(), Some(2));
    assert_eq!(jlp(&["bf", "t-cauchy", "--t", "2", "--n", "1"]).status.code(), Some(2));
    let starved = jlp_env(&["bf", "t-cauchy", "--t", "2", "--n", "20"], &[("JLP_EVAL_BUDGET", "30")]);
    assert_eq!(starved.status.code(), Some(4));
    assert!(!starved.stderr.is_empty());
    let bad_env = jlp_env(&["table", "jeffreys1936"], &[("JLP_EVAL_BUDGET", "lots")]);
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn figure_one_middle_panel() {
    let v = json(&jlp(&["construct", "figure1", "--mass-neg", "0.02041783", "--bf10", "1"]));
    assert_eq!(v["results"]["n"], 82);
    assert!((f(&v["results"]["t"]) - 2.113).abs() < 0.005);
}

#[test]
fn unreachable_construction_is_numeric_failure() {
    let o = jlp_env(
        &["construct", "simplissimus", "--epsilon", "0.07", "--p", "0.01"],
        &[("JLP_EVAL_BUDGET", "search=1000")],
    );
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn simplissimus() {
    let v = json(&jlp(&["construct", "simplissimus", "--epsilon", "0.07", "--p", "0.01"]));
    assert_eq!(v["results"]["n"], 16700);
    assert_eq!(v["results"]["s"], 8517);
    assert_eq!(v["results"]["favours_null"], true);
}

#[test]
fn lindley_matches_rearranged_closed_form() {
    let v = json(&jlp(&[
        "construct",
        "lindley",
        "--alpha",
        ".05",
        "--posterior",
        ".95",
        "--I",
        "1",
        "--sigma",
        "1",
        "--prior-h0",
        ".5",
    ]));
    // ρK ≥ .95/.05 with K = I √n exp(-z²/2) / (σ √(2π)), ρ = 1.
    let z: f64 = 1.959963984540054;
    let oracle = (19.0 * (2.0 * std::f64::consts::PI).sqrt() * (0.5 * z * z).exp()).powi(2).ceil();
    assert_eq!(v["results"]["n"].as_u64().unwrap() as f64, oracle);
}

#[test]
fn sweep_alpha_nonincreasing() {
    let v = json(&jlp(&["decision", "sweep", "--lambda", "1", "--g", "1", "--n", "10,100,1000"]));
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let alphas: Vec<f64> = rows.iter().map(|r| f(&r["alpha"])).collect();
    assert!(alphas.windows(2).all(|w| w[1] <= w[0]), "{alphas:?}");
    let csv = stdout(&jlp(&["decision", "sweep", "--g", "1", "--n", "10,100", "--format", "csv"]));
    assert!(csv.starts_with("n,c*,alpha*,beta*\n10,"));
}

#[test]
fn monte_carlo_rules_and_replay() {
    let base = ["decision", "mc", "--n", "1000", "--g", "1", "--prior-h0", ".5", "--trials", "1000000", "--seed", "42"];
    let run = |rule: &str| jlp(&[&base[..], &["--rule", rule]].concat());
    let bf = run("bf:1");
    let alpha = run("alpha:.05");
    let (vb, va) = (json(&bf), json(&alpha));
    assert_eq!(vb["seed"], 42);
    let tb = vb["results"]["total"].as_u64().unwrap();
    let ta = va["results"]["total"].as_u64().unwrap();
    assert!(tb < ta, "bf {tb} vs alpha {ta}");
    assert_eq!(run("bf:1").stdout, bf.stdout);
    assert_eq!(jlp(&[&base[..], &["--rule", "median:1"]].concat()).status.code(), Some(2));
}

#[test]
fn report_reproduce_clean_and_mutated() {
    let clean = jlp(&["report", "reproduce"]);
    assert_eq!(clean.status.code(), Some(0), "{}", String::from_utf8_lossy(&clean.stderr));
    let text = stdout(&clean);
    assert!(text.starts_with("| table | key |"));
    let mutated = jlp(&["report", "reproduce", "--mutate", "t-exponent"]);
    assert_eq!(mutated.status.code(), Some(1));
    let err = String::from_utf8_lossy(&mutated.stderr);
    assert!(err.lines().all(|l| l.starts_with("FAIL jeffreys1938t ")), "{err}");
}

#[test]
fn report_json_schema() {
    let v = json(&jlp(&["report", "reproduce", "--format", "json"]));
    assert_eq!(v["command"], "report reproduce");
    assert!(v["inputs"].is_object());
    let results = &v["results"];
    let rows = results["rows"].as_array().unwrap();
    assert!(results["passed"].as_u64().unwrap() >= 40);
    assert_eq!(results["failed"], 0);
    for row in rows {
        for key in ["table_id", "row_key", "paper_value", "computed_value", "tolerance", "mode", "status"] {
            assert!(row.get(key).is_some(), "row lacks {key}: {row}");
        }
        assert!(["pass", "fail", "flagged"].contains(&row["status"].as_str().unwrap()));
        assert!(["abs", "rel"].contains(&row["mode"].as_str().unwrap()));
    }
    assert!(rows
        .iter()
        .any(|r| r["table_id"] == "jeffreys1938chi2" && r["row_key"] == "5000/root_first" && r["status"] == "flagged"));
}

#[test]
fn json_numbers_have_twelve_significant_digits() {
    let text = stdout(&jlp(&["bf", "z", "--a", "0.3", "--s", "0.1", "--n", "7", "--m", "1"]));
    for token in text.split(|c: char| !(c.is_ascii_digit() || c == '.' || c == 'e' || c == '-')) {
        let mantissa = token.split('e').next().unwrap().trim_start_matches('-');
        let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
        let significant = digits.trim_start_matches('0');
        assert!(significant.len() <= 12, "{token}");
    }
}

#[test]
fn out_flag_and_io_failure() {
    let dir = std::env::temp_dir().join(format!("jlp-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t2.csv");
    let o = jlp(&["table", "jeffreys1936", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("100000,3.33"));
    let missing = dir.join("no/such/dir/x.csv");
    assert_eq!(jlp(&["table", "jeffreys1936", "--out", missing.to_str().unwrap()]).status.code(), Some(3));
    std::fs::remove_dir_all(&dir).unwrap();
}
