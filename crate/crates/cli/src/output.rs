//! Rendering of command results as JSON, CSV or Markdown.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Md,
}

/// One table cell. `decimals` fixes the printed precision for CSV and
/// Markdown; JSON always carries the full value.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(u64),
    Num { value: f64, decimals: Option<usize> },
    Text(String),
}

impl Cell {
    pub fn num(value: f64, decimals: usize) -> Cell {
        Cell::Num { value, decimals: Some(decimals) }
    }

    pub fn full(value: f64) -> Cell {
        Cell::Num { value, decimals: None }
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num { value, decimals: Some(d) } => format!("{value:.d$}"),
            Cell::Num { value, decimals: None } => format_sig12(*value),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Table {
        Table { headers: headers.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// Two-column table from the leaves of a JSON object.
    fn from_object(value: &Value) -> Table {
        let mut t = Table::new(["field", "value"]);
        flatten(value, String::new(), &mut t);
        t
    }

    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory csv write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory csv write");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv output is utf-8")
    }

    fn to_markdown(&self) -> String {
        let mut out = format!("| {} |\n", self.headers.join(" | "));
        out.push_str(&format!("|{}\n", "---|".repeat(self.headers.len())));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.render().replace('|', "\\|")).collect();
            out.push_str(&format!("| {} |\n", cells.join(" | ")));
        }
        out
    }
}

fn flatten(value: &Value, prefix: String, table: &mut Table) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(v, key, table);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(v, format!("{prefix}[{i}]"), table);
            }
        }
        Value::Number(n) => match n.as_u64() {
            Some(u) => table.push(vec![Cell::Text(prefix), Cell::Int(u)]),
            None => table.push(vec![Cell::Text(prefix), Cell::full(n.as_f64().unwrap_or(f64::NAN))]),
        },
        Value::String(s) => table.push(vec![Cell::Text(prefix), Cell::Text(s.clone())]),
        Value::Bool(b) => table.push(vec![Cell::Text(prefix), Cell::Text(b.to_string())]),
        Value::Null => table.push(vec![Cell::Text(prefix), Cell::Text(String::new())]),
    }
}

/// Shortest decimal that round-trips the value rounded to 12 significant
/// digits.
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn format_sig12(x: f64) -> String {
    round_sig12(x).to_string()
}

fn round_numbers(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig12).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

/// Everything a command produces.
pub struct Output {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub log_bf: Option<f64>,
    pub seed: Option<u64>,
    /// Tabular view for CSV and Markdown; the results object is flattened
    /// when absent.
    pub table: Option<Table>,
    /// Lines appended after a Markdown table.
    pub footer: Vec<String>,
}

impl Output {
    pub fn new(command: impl Into<String>, inputs: Value, results: impl Serialize) -> Output {
        Output {
            command: command.into(),
            inputs,
            results: serde_json::to_value(results).expect("results serialize to JSON"),
            log_bf: None,
            seed: None,
            table: None,
            footer: Vec::new(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut doc = Map::new();
                doc.insert("command".into(), json!(self.command));
                doc.insert("inputs".into(), self.inputs.clone());
                doc.insert("results".into(), self.results.clone());
                if let Some(l) = self.log_bf {
                    doc.insert("log_bf".into(), json!(l));
                }
                if let Some(s) = self.seed {
                    doc.insert("seed".into(), json!(s));
                }
                let mut doc = Value::Object(doc);
                round_numbers(&mut doc);
                let mut s = serde_json::to_string_pretty(&doc).expect("JSON value serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.table_view().to_csv(),
            Format::Md => {
                let mut s = self.table_view().to_markdown();
                for line in &self.footer {
                    s.push('\n');
                    s.push_str(line);
                    s.push('\n');
                }
                s
            }
        }
    }

    fn table_view(&self) -> Table {
        self.table.clone().unwrap_or_else(|| Table::from_object(&self.results))
    }
}
