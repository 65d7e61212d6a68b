//! Command output: every command builds a text rendering and a JSON value
//! side by side, and the caller picks one.

use std::fmt::Write;

use serde_json::{json, Value as Json};

use geu::plausibility::subset_value;
use geu::{DecisionProblem, PlausibilityMeasure, PreferenceRelation, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct Report {
    /// `false` when a checked property failed.
    pub ok: bool,
    pub text: String,
    pub json: Json,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// Accumulates text lines.
#[derive(Default)]
pub struct Text(String);

impl Text {
    pub fn line(&mut self, s: impl AsRef<str>) -> &mut Self {
        self.0.push_str(s.as_ref());
        self.0.push('\n');
        self
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        writeln!(self.0, "{key}: {value}").expect("writing to a String");
        self
    }

    pub fn finish(self) -> String {
        self.0
    }
}

/// `<`, `>`, `~` or `incomparable` for the pair `(i, j)`.
pub fn verdict(rel: &PreferenceRelation, i: usize, j: usize) -> &'static str {
    match (rel.holds(i, j), rel.holds(j, i)) {
        (true, false) => "<",
        (false, true) => ">",
        (true, true) => "~",
        (false, false) => "incomparable",
    }
}

fn verdict_symbol(v: &str) -> &str {
    match v {
        "<" => "≺",
        ">" => "≻",
        "~" => "~",
        _ => "∥",
    }
}

/// Matrix of the relation (row ≼ column) and the pairwise comparisons.
pub fn relation_text(out: &mut Text, rel: &PreferenceRelation) {
    let names = rel.universe();
    let width = names.iter().map(|n| n.chars().count()).max().unwrap_or(1);
    out.line("relation (row ≼ column):");
    let mut header = format!("  {:width$}", "");
    for n in names {
        header.push_str(&format!("  {n:>width$}"));
    }
    out.line(header.trim_end());
    for (i, n) in names.iter().enumerate() {
        let mut row = format!("  {n:width$}");
        for j in 0..names.len() {
            row.push_str(&format!("  {:>width$}", if rel.holds(i, j) { 1 } else { 0 }));
        }
        out.line(row);
    }
    out.line("comparisons:");
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            out.line(format!("  {} {} {}", names[i], verdict_symbol(verdict(rel, i, j)), names[j]));
        }
    }
}

pub fn relation_json(rel: &PreferenceRelation) -> Json {
    let names = rel.universe();
    let matrix: Vec<Vec<bool>> = (0..names.len()).map(|i| (0..names.len()).map(|j| rel.holds(i, j)).collect()).collect();
    let mut comparisons = Vec::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            comparisons.push(json!({"left": names[i], "right": names[j], "verdict": verdict(rel, i, j)}));
        }
    }
    json!({"acts": names, "matrix": matrix, "comparisons": comparisons})
}

/// Values keyed by name, in the given order.
pub fn values_text(out: &mut Text, title: &str, names: &[String], values: &[Value]) {
    out.line(format!("{title}:"));
    for (n, v) in names.iter().zip(values) {
        out.line(format!("  {n}: {v}"));
    }
}

pub fn values_json(names: &[String], values: &[Value]) -> Json {
    Json::Array(names.iter().zip(values).map(|(n, v)| json!({"name": n, "value": v.to_string()})).collect())
}

/// Every subset with its plausibility, by increasing mask.
pub fn measure_entries(pl: &PlausibilityMeasure) -> Vec<(String, String)> {
    pl.values()
        .iter()
        .enumerate()
        .map(|(m, v)| (subset_value(pl.states(), m as u64).to_string(), v.to_string()))
        .collect()
}

pub fn measure_text(out: &mut Text, title: &str, pl: &PlausibilityMeasure) {
    out.line(format!("{title}:"));
    for (subset, v) in measure_entries(pl) {
        out.line(format!("  {subset}: {v}"));
    }
}

pub fn measure_json(pl: &PlausibilityMeasure) -> Json {
    Json::Array(measure_entries(pl).into_iter().map(|(s, v)| json!({"subset": s, "value": v})).collect())
}

/// States, consequences, acts and utilities of an act problem.
pub fn problem_text(out: &mut Text, d: &DecisionProblem) {
    let s = d.situation();
    out.kv("states", s.states().join(", "));
    out.kv("consequences", s.consequences().join(", "));
    out.line("acts:");
    for a in s.acts() {
        let outcomes: Vec<&str> = a.outcomes.iter().map(|&c| s.consequences()[c].as_str()).collect();
        out.line(format!("  {}: {}", a.name, outcomes.join(", ")));
    }
    values_text(out, "utility", s.consequences(), d.utility());
}

pub fn problem_json(d: &DecisionProblem) -> Json {
    let s = d.situation();
    let acts: Vec<Json> = s
        .acts()
        .iter()
        .map(|a| {
            let outcomes: Vec<&str> = a.outcomes.iter().map(|&c| s.consequences()[c].as_str()).collect();
            json!({"name": a.name, "outcomes": outcomes})
        })
        .collect();
    json!({
        "states": s.states(),
        "consequences": s.consequences(),
        "acts": acts,
        "utility": values_json(s.consequences(), d.utility()),
    })
}
