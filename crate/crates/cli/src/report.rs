//! Report types and their table, JSON and CSV renderings.

use anyhow::Result;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "kech/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Tabular view shared by the table and CSV renderers.
pub trait Report: Serialize + DeserializeOwned {
    fn columns(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;

    /// Scalar facts shown above the table.
    fn summary(&self) -> Vec<(&'static str, String)> {
        Vec::new()
    }
}

pub fn render<R: Report>(report: &R, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(report.columns())?;
            for row in report.rows() {
                w.write_record(row)?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        Format::Table => Ok(table(report)),
    }
}

fn table<R: Report>(report: &R) -> String {
    let mut out = String::new();
    for (k, v) in report.summary() {
        out.push_str(&format!("{k}: {v}\n"));
    }
    let cols = report.columns();
    let rows = report.rows();
    let mut widths: Vec<usize> = cols.iter().map(|c| c.chars().count()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    out.push_str(&line(cols.clone()));
    out.push_str(&line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect()));
    for row in &rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(String::new, T::to_string)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub schema: String,
    pub spec: String,
    pub canonical: String,
    #[serde(rename = "type")]
    pub path_type: String,
}

impl Report for ValidateReport {
    fn columns(&self) -> Vec<&'static str> {
        vec!["spec", "canonical", "type"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![self.spec.clone(), self.canonical.clone(), self.path_type.clone()]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Class {
    pub n: i64,
    pub a: u8,
    pub b: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradeReport {
    pub schema: String,
    pub spec: String,
    pub grading: i64,
    pub grading_lattice: i64,
    pub action: f64,
    #[serde(rename = "type")]
    pub path_type: String,
    pub class: Class,
}

impl Report for GradeReport {
    fn columns(&self) -> Vec<&'static str> {
        vec!["spec", "grading", "grading_lattice", "action", "type", "class_n", "class_a", "class_b"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.spec.clone(),
            self.grading.to_string(),
            self.grading_lattice.to_string(),
            self.action.to_string(),
            self.path_type.clone(),
            self.class.n.to_string(),
            self.class.a.to_string(),
            self.class.b.to_string(),
        ]]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub spec: String,
    pub grading: i64,
    pub action: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffReport {
    pub schema: String,
    pub spec: String,
    pub grading: i64,
    pub action: f64,
    pub terms: Vec<Term>,
}

impl Report for DiffReport {
    fn columns(&self) -> Vec<&'static str> {
        vec!["term", "grading", "action"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.terms
            .iter()
            .map(|t| vec![t.spec.clone(), t.grading.to_string(), t.action.to_string()])
            .collect()
    }

    fn summary(&self) -> Vec<(&'static str, String)> {
        let chain: Vec<&str> = self.terms.iter().map(|t| t.spec.as_str()).collect();
        let chain = if chain.is_empty() { "0".to_string() } else { chain.join(" + ") };
        vec![("d", format!("{} = {chain}", self.spec))]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub spec: String,
    pub grading: i64,
    pub action: f64,
    #[serde(rename = "type")]
    pub path_type: String,
    pub h_count: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerateReport {
    pub schema: String,
    pub max_action: f64,
    pub grading: Option<i64>,
    pub count: usize,
    pub generators: Vec<Generator>,
}

impl Report for EnumerateReport {
    fn columns(&self) -> Vec<&'static str> {
        vec!["spec", "grading", "action", "type", "h_count"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.generators
            .iter()
            .map(|g| {
                vec![
                    g.spec.clone(),
                    g.grading.to_string(),
                    g.action.to_string(),
                    g.path_type.clone(),
                    g.h_count.to_string(),
                ]
            })
            .collect()
    }

    fn summary(&self) -> Vec<(&'static str, String)> {
        vec![("max_action", self.max_action.to_string()), ("count", self.count.to_string())]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct D2Report {
    pub schema: String,
    pub max_action: f64,
    pub generators: usize,
    pub violations: Vec<Violation>,
}

impl Report for D2Report {
    fn columns(&self) -> Vec<&'static str> {
        vec!["source", "target"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.violations.iter().map(|v| vec![v.source.clone(), v.target.clone()]).collect()
    }

    fn summary(&self) -> Vec<(&'static str, String)> {
        vec![
            ("max_action", self.max_action.to_string()),
            ("generators", self.generators.to_string()),
            ("violations", self.violations.len().to_string()),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Degree {
    pub degree: i64,
    pub generators: usize,
    pub betti: usize,
    pub stabilized: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub schema: String,
    pub max_action: f64,
    pub degrees: Vec<Degree>,
}

impl Report for HomologyReport {
    fn columns(&self) -> Vec<&'static str> {
        vec!["degree", "generators", "betti", "stabilized"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.degrees
            .iter()
            .map(|d| vec![d.degree.to_string(), d.generators.to_string(), d.betti.to_string(), d.stabilized.to_string()])
            .collect()
    }

    fn summary(&self) -> Vec<(&'static str, String)> {
        vec![("max_action", self.max_action.to_string())]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityRow {
    pub k: u32,
    pub value: f64,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub schema: String,
    pub capacities: Vec<CapacityRow>,
}

impl Report for CapacityReport {
    fn columns(&self) -> Vec<&'static str> {
        vec!["k", "value", "witness"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.capacities
            .iter()
            .map(|r| vec![r.k.to_string(), r.value.to_string(), r.witness.clone()])
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylRow {
    pub k: u32,
    pub c_k: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylReport {
    pub schema: String,
    pub contact_volume: f64,
    pub limit: f64,
    pub rows: Vec<WeylRow>,
}

impl Report for WeylReport {
    fn columns(&self) -> Vec<&'static str> {
        vec!["k", "c_k", "ratio"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| vec![r.k.to_string(), r.c_k.to_string(), r.ratio.to_string()])
            .collect()
    }

    fn summary(&self) -> Vec<(&'static str, String)> {
        vec![("contact_volume", self.contact_volume.to_string()), ("limit", self.limit.to_string())]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapToricReport {
    pub schema: String,
    pub domain: String,
    pub k: u32,
    pub value: f64,
}

impl Report for CapToricReport {
    fn columns(&self) -> Vec<&'static str> {
        vec!["domain", "k", "value"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![self.domain.clone(), self.k.to_string(), self.value.to_string()]]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GromovRow {
    pub k: u32,
    pub lambda_prime: String,
    pub unique_factorization: bool,
    pub rhs_action: f64,
    pub min_lhs_action: f64,
    pub witness: String,
    pub bound: f64,
    pub axis_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GromovReport {
    pub schema: String,
    pub running_inf: f64,
    pub records: Vec<GromovRow>,
}

impl Report for GromovReport {
    fn columns(&self) -> Vec<&'static str> {
        vec!["k", "lambda_prime", "unique_factorization", "rhs_action", "min_lhs_action", "witness", "bound", "axis_bound"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.records
            .iter()
            .map(|r| {
                vec![
                    r.k.to_string(),
                    r.lambda_prime.clone(),
                    r.unique_factorization.to_string(),
                    r.rhs_action.to_string(),
                    r.min_lhs_action.to_string(),
                    r.witness.clone(),
                    r.bound.to_string(),
                    r.axis_bound.to_string(),
                ]
            })
            .collect()
    }

    fn summary(&self) -> Vec<(&'static str, String)> {
        vec![("running_inf", self.running_inf.to_string())]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartRow {
    pub part: String,
    pub grading: i64,
    pub action: f64,
    pub min_lhs_action: Option<f64>,
    pub witness: Option<String>,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstructReport {
    pub schema: String,
    pub domain: String,
    pub lambda_prime: String,
    pub obstructed: bool,
    pub factorizations: Vec<Vec<PartRow>>,
}

impl Report for ObstructReport {
    fn columns(&self) -> Vec<&'static str> {
        vec!["factorization", "part", "grading", "action", "min_lhs_action", "witness", "feasible"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows = Vec::new();
        for (i, parts) in self.factorizations.iter().enumerate() {
            for p in parts {
                rows.push(vec![
                    i.to_string(),
                    p.part.clone(),
                    p.grading.to_string(),
                    p.action.to_string(),
                    opt(&p.min_lhs_action),
                    opt(&p.witness),
                    p.feasible.to_string(),
                ]);
            }
        }
        rows
    }

    fn summary(&self) -> Vec<(&'static str, String)> {
        vec![
            ("domain", self.domain.clone()),
            ("lambda_prime", self.lambda_prime.clone()),
            ("obstructed", self.obstructed.to_string()),
        ]
    }
}
