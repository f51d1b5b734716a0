//! On-disk formats: `unit,variable,value` microdata, histogram JSON tables
//! and the fitted-model report files.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::distribution::{histogram_from_samples, Bin, Histogram};
use crate::error::{Error, Result};
use crate::mfa::{MfaModel, MomentAxisDiagnostics, Moment};
use crate::quantile::{ColumnRole, GapReport};
use crate::simulate::MicroRecord;

/// Tolerance on the weight sum of a histogram read from JSON.
pub const JSON_WEIGHT_TOLERANCE: f64 = 1e-9;

/// Units x variables grid of histograms, one cell per pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionalTable {
    units: Vec<String>,
    variables: Vec<String>,
    cells: Vec<Vec<Histogram<f64>>>,
}

impl DistributionalTable {
    /// `cells[i][j]` is unit `i` on variable `j`.
    pub fn new(units: Vec<String>, variables: Vec<String>, cells: Vec<Vec<Histogram<f64>>>) -> Result<Self> {
        if units.is_empty() || variables.is_empty() {
            return Err(Error::domain("a table needs at least one unit and one variable"));
        }
        ensure_unique("unit", &units)?;
        ensure_unique("variable", &variables)?;
        if cells.len() != units.len() || cells.iter().any(|row| row.len() != variables.len()) {
            return Err(Error::domain("table cells do not form a complete units x variables grid"));
        }
        Ok(DistributionalTable { units, variables, cells })
    }

    pub fn units(&self) -> &[String] {
        &self.units
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn cell(&self, unit: usize, variable: usize) -> &Histogram<f64> {
        &self.cells[unit][variable]
    }

    pub fn unit_index(&self, id: &str) -> Result<usize> {
        self.units
            .iter()
            .position(|u| u == id)
            .ok_or_else(|| Error::UnknownId { kind: "unit", id: id.to_string() })
    }

    pub fn variable_index(&self, id: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == id)
            .ok_or_else(|| Error::UnknownId { kind: "variable", id: id.to_string() })
    }

    /// All units' histograms for one variable.
    pub fn variable_column(&self, variable: usize) -> Vec<&Histogram<f64>> {
        self.cells.iter().map(|row| &row[variable]).collect()
    }

    pub fn cell_count(&self) -> usize {
        self.units.len() * self.variables.len()
    }
}

fn ensure_unique(kind: &'static str, ids: &[String]) -> Result<()> {
    let mut seen = HashMap::new();
    for id in ids {
        if seen.insert(id.as_str(), ()).is_some() {
            return Err(Error::domain(format!("duplicate {kind} id `{id}`")));
        }
    }
    Ok(())
}

/// Quantile count `K` per variable: a default plus per-variable overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileSpec {
    pub default: usize,
    pub overrides: BTreeMap<String, usize>,
}

impl Default for QuantileSpec {
    fn default() -> Self {
        QuantileSpec { default: 20, overrides: BTreeMap::new() }
    }
}

impl QuantileSpec {
    pub fn uniform(k: usize) -> Self {
        QuantileSpec { default: k, overrides: BTreeMap::new() }
    }

    pub fn for_variable(&self, variable: &str) -> usize {
        self.overrides.get(variable).copied().unwrap_or(self.default)
    }

    pub fn validate(&self) -> Result<()> {
        if self.default < 1 || self.overrides.values().any(|&k| k < 1) {
            return Err(Error::domain("quantile counts must be at least 1"));
        }
        Ok(())
    }
}

/// Reads `unit,variable,value` rows (header required, any column order) and
/// builds one equi-depth histogram per cell from type-7 sample quantiles.
/// Units and variables keep their order of first appearance.
pub fn parse_microdata_csv(text: &str, quantiles: &QuantileSpec) -> Result<DistributionalTable> {
    quantiles.validate()?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse { line: 1, message: e.to_string() })?
        .clone();
    let mut position = HashMap::new();
    for (idx, name) in headers.iter().enumerate() {
        if position.insert(name.to_string(), idx).is_some() {
            return Err(Error::Parse { line: 1, message: format!("duplicate column `{name}`") });
        }
    }
    let column = |name: &str| {
        position
            .get(name)
            .copied()
            .ok_or_else(|| Error::Parse { line: 1, message: format!("missing column `{name}`") })
    };
    let (unit_col, var_col, value_col) = (column("unit")?, column("variable")?, column("value")?);

    let mut units: Vec<String> = Vec::new();
    let mut variables: Vec<String> = Vec::new();
    let mut unit_pos: HashMap<String, usize> = HashMap::new();
    let mut var_pos: HashMap<String, usize> = HashMap::new();
    let mut samples: HashMap<(usize, usize), Vec<f64>> = HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |idx: usize, name: &str| {
            record
                .get(idx)
                .filter(|s| !s.is_empty())
                .ok_or_else(|| Error::Parse { line, message: format!("empty `{name}` field") })
        };
        let unit = field(unit_col, "unit")?;
        let variable = field(var_col, "variable")?;
        let raw = field(value_col, "value")?;
        let value: f64 = raw
            .parse()
            .map_err(|_| Error::Parse { line, message: format!("value `{raw}` is not a number") })?;
        if !value.is_finite() {
            return Err(Error::Parse { line, message: format!("value `{raw}` is not finite") });
        }
        let u = *unit_pos.entry(unit.to_string()).or_insert_with(|| {
            units.push(unit.to_string());
            units.len() - 1
        });
        let v = *var_pos.entry(variable.to_string()).or_insert_with(|| {
            variables.push(variable.to_string());
            variables.len() - 1
        });
        samples.entry((u, v)).or_default().push(value);
    }
    if units.is_empty() {
        return Err(Error::domain("microdata contains no rows"));
    }

    let mut cells = Vec::with_capacity(units.len());
    for (u, unit) in units.iter().enumerate() {
        let mut row = Vec::with_capacity(variables.len());
        for (v, variable) in variables.iter().enumerate() {
            let values = samples.get(&(u, v)).ok_or_else(|| Error::Validation {
                unit: unit.clone(),
                variable: variable.clone(),
                message: "no samples for this cell".into(),
            })?;
            let h = histogram_from_samples(values, quantiles.for_variable(variable))?;
            row.push(h.to_histogram());
        }
        cells.push(row);
    }
    DistributionalTable::new(units, variables, cells)
}

/// Writes microdata rows with a `unit,variable,value` header.
pub fn emit_microdata_csv(records: &[MicroRecord]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["unit", "variable", "value"])
        .map_err(|e| Error::domain(e.to_string()))?;
    for r in records {
        writer
            .write_record([r.unit.as_str(), r.variable.as_str(), &r.value.to_string()])
            .map_err(|e| Error::domain(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::domain(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, Serialize, Deserialize)]
struct TableDoc {
    units: Vec<UnitDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct UnitDoc {
    id: String,
    cells: IndexMap<String, CellDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CellDoc {
    bounds: Vec<f64>,
    weights: Vec<f64>,
}

/// Parses `{"units": [{"id", "cells": {var: {"bounds", "weights"}}}]}`.
/// Weights must sum to one within `1e-9`; they are rescaled when off by more
/// than `1e-12`. Variable order follows the first unit.
pub fn parse_histogram_json(text: &str) -> Result<DistributionalTable> {
    let doc: TableDoc = serde_json::from_str(text)?;
    let first = doc.units.first().ok_or_else(|| Error::domain("table has no units"))?;
    let variables: Vec<String> = first.cells.keys().cloned().collect();
    let mut units = Vec::with_capacity(doc.units.len());
    let mut cells = Vec::with_capacity(doc.units.len());
    for unit in doc.units {
        if unit.cells.len() != variables.len() || variables.iter().any(|v| !unit.cells.contains_key(v)) {
            return Err(Error::Validation {
                unit: unit.id.clone(),
                variable: String::new(),
                message: "unit does not have exactly the variables of the first unit".into(),
            });
        }
        let mut row = Vec::with_capacity(variables.len());
        for variable in &variables {
            let cell = &unit.cells[variable];
            let invalid = |message: String| Error::Validation {
                unit: unit.id.clone(),
                variable: variable.clone(),
                message,
            };
            if cell.bounds.len() != cell.weights.len() + 1 || cell.weights.is_empty() {
                return Err(invalid(format!(
                    "{} bounds do not match {} weights",
                    cell.bounds.len(),
                    cell.weights.len()
                )));
            }
            if cell.bounds.iter().chain(&cell.weights).any(|v| !v.is_finite()) {
                return Err(invalid("non-finite number".into()));
            }
            let total: f64 = cell.weights.iter().sum();
            if (total - 1.0).abs() > JSON_WEIGHT_TOLERANCE {
                return Err(invalid(format!("weights sum to {total}, expected 1")));
            }
            let bins = cell
                .bounds
                .windows(2)
                .zip(&cell.weights)
                .map(|(b, &w)| Bin::new(b[0], b[1], w))
                .collect();
            row.push(Histogram::normalized(bins).map_err(|e| invalid(e.to_string()))?);
        }
        units.push(unit.id);
        cells.push(row);
    }
    DistributionalTable::new(units, variables, cells)
}

/// Serializes a table; every histogram must be contiguous.
pub fn emit_histogram_json(table: &DistributionalTable) -> Result<String> {
    let mut units = Vec::with_capacity(table.units.len());
    for (u, id) in table.units.iter().enumerate() {
        let mut cells = IndexMap::new();
        for (v, variable) in table.variables.iter().enumerate() {
            let h = &table.cells[u][v];
            let bounds = h.bounds().ok_or_else(|| Error::Validation {
                unit: id.clone(),
                variable: variable.clone(),
                message: "histogram has gaps between bins and cannot be written as bounds".into(),
            })?;
            let weights = h.bins().iter().map(|b| b.weight).collect();
            cells.insert(variable.clone(), CellDoc { bounds, weights });
        }
        units.push(UnitDoc { id: id.clone(), cells });
    }
    let mut text = serde_json::to_string_pretty(&TableDoc { units })?;
    text.push('\n');
    Ok(text)
}

/// Report file flavours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

/// Everything reported alongside a fitted model.
pub struct ReportInput<'a> {
    pub model: &'a MfaModel<f64>,
    pub units: &'a [String],
    /// Probability level of every global column.
    pub column_levels: &'a [f64],
    pub gaps: &'a [GapReport<f64>],
    pub moments: Option<&'a MomentAxisDiagnostics<f64>>,
    /// `summaries[j][i]`: unit `i` on variable `j`.
    pub summaries: &'a [Vec<crate::distribution::DistributionSummary<f64>>],
}

fn column_label(model: &MfaModel<f64>, column: usize) -> (String, String) {
    let offsets = model.offsets();
    let block = offsets.partition_point(|&o| o <= column) - 1;
    (model.variables()[block].clone(), format!("q{}", column - offsets[block]))
}

fn role_name(role: &ColumnRole<f64>) -> String {
    match role {
        ColumnRole::Active => "active".into(),
        ColumnRole::Weighted(w) => format!("weighted:{w}"),
        ColumnRole::Supplementary => "supplementary".into(),
    }
}

fn dims_header(prefix: &str, rank: usize) -> String {
    let mut h = prefix.to_string();
    for a in 1..=rank {
        let _ = write!(h, ",dim{a}");
    }
    h
}

fn push_values(line: &mut String, values: impl IntoIterator<Item = f64>) {
    for v in values {
        let _ = write!(line, ",{v}");
    }
}

/// Eigenvalue table: component, eigenvalue, % of variance, cumulative %.
pub fn eigenvalues_csv(model: &MfaModel<f64>) -> String {
    let mut out = String::from("component,eigenvalue,percent_variance,cumulative_percent\n");
    for (a, ((e, p), c)) in model
        .eigenvalues()
        .iter()
        .zip(model.percent_inertia())
        .zip(model.cumulative_percent())
        .enumerate()
    {
        let _ = writeln!(out, "comp {},{e},{p:.2},{c:.2}", a + 1);
    }
    out
}

pub fn variable_scores_csv(model: &MfaModel<f64>, column_levels: &[f64]) -> String {
    let scores = model.all_variable_scores();
    let mut out = dims_header("variable,column,level,role", model.rank());
    out.push('\n');
    for k in 0..scores.nrows() {
        let (variable, label) = column_label(model, k);
        let mut line = format!("{variable},{label},{},{}", column_levels[k], role_name(&model.column_roles()[k]));
        push_values(&mut line, scores.row(k).iter().copied());
        out.push_str(&line);
        out.push('\n');
    }
    if let Some(compromise) = model.compromise_scores() {
        let width = compromise.nrows();
        for k in 0..width {
            let mut line = format!("compromise,q{k},{},", column_levels[k]);
            line.push_str("active");
            push_values(&mut line, compromise.row(k).iter().copied());
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

pub fn individual_scores_csv(model: &MfaModel<f64>, units: &[String]) -> String {
    let mut out = dims_header("unit,scope", model.rank());
    out.push('\n');
    for (i, unit) in units.iter().enumerate() {
        let mut line = format!("{unit},global");
        push_values(&mut line, model.row_coordinates().row(i).iter().copied());
        out.push_str(&line);
        out.push('\n');
    }
    for (j, variable) in model.variables().iter().enumerate() {
        if let Some(coords) = model.partial_coordinates(j) {
            for (i, unit) in units.iter().enumerate() {
                let mut line = format!("{unit},{variable}");
                push_values(&mut line, coords.row(i).iter().copied());
                out.push_str(&line);
                out.push('\n');
            }
        }
    }
    out
}

pub fn contributions_csv(model: &MfaModel<f64>, units: &[String]) -> String {
    let mut out = String::from("kind,id,block,axis,cr,ca\n");
    let uc = model.unit_contributions();
    for (i, unit) in units.iter().enumerate() {
        for a in 0..model.rank() {
            let _ = writeln!(out, "unit,{unit},,{},{},{}", a + 1, uc.cr[[i, a]], uc.ca[[i, a]]);
        }
    }
    let cc = model.column_contributions();
    for k in 0..cc.cr.nrows() {
        let (variable, label) = column_label(model, k);
        for a in 0..model.rank() {
            let _ = writeln!(out, "column,{label},{variable},{},{},{}", a + 1, cc.cr[[k, a]], cc.ca[[k, a]]);
        }
    }
    out
}

pub fn rv_matrix_csv(model: &MfaModel<f64>) -> String {
    let mut out = String::from("variable");
    for v in model.variables() {
        let _ = write!(out, ",{v}");
    }
    out.push('\n');
    for (j, v) in model.variables().iter().enumerate() {
        let mut line = v.clone();
        push_values(&mut line, model.rv_matrix().row(j).iter().copied());
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn trace_gap_csv(model: &MfaModel<f64>, gaps: &[GapReport<f64>]) -> String {
    let mut out = String::from("variable,trace,trace_per_bin,trace_averaged,wasserstein_variance,gap,gap_explicit\n");
    for (v, g) in model.variables().iter().zip(gaps) {
        let _ = writeln!(
            out,
            "{v},{},{},{},{},{},{}",
            g.trace, g.trace_per_bin, g.trace_averaged, g.variance, g.gap, g.gap_explicit
        );
    }
    out
}

/// Per-cell moments (`mean, std, skewness, kurtosis, degenerate`).
pub fn moments_csv(model: &MfaModel<f64>, units: &[String], summaries: &[Vec<crate::distribution::DistributionSummary<f64>>]) -> String {
    let mut out = String::from("unit,variable,mean,std,skewness,kurtosis,degenerate\n");
    for (i, unit) in units.iter().enumerate() {
        for (j, variable) in model.variables().iter().enumerate() {
            let s = &summaries[j][i];
            let _ = writeln!(
                out,
                "{unit},{variable},{},{},{},{},{}",
                s.mean, s.std, s.skewness, s.kurtosis, s.degenerate
            );
        }
    }
    out
}

pub fn moment_axes_csv(diag: &MomentAxisDiagnostics<f64>) -> String {
    let mut out = String::from("variable,axis,moment,correlation,degenerate\n");
    for (j, variable) in diag.variables.iter().enumerate() {
        for axis in 0..diag.table[j].len() {
            for m in Moment::ALL {
                let c = diag.get(j, axis, m);
                let _ = writeln!(out, "{variable},{},{},{},{}", axis + 1, m.name(), c.value, c.degenerate);
            }
        }
    }
    out
}

fn rows_of(m: &ndarray::Array2<f64>) -> Vec<Vec<f64>> {
    m.rows().into_iter().map(|r| r.to_vec()).collect()
}

/// Full-precision JSON view of the model.
pub fn model_json(input: &ReportInput<'_>) -> Result<String> {
    let model = input.model;
    let mut partial = serde_json::Map::new();
    let mut partial_axes = serde_json::Map::new();
    let mut partial_pcas = serde_json::Map::new();
    for (j, variable) in model.variables().iter().enumerate() {
        if let Some(c) = model.partial_coordinates(j) {
            partial.insert(variable.clone(), json!(rows_of(c)));
        }
        if let Some(c) = model.partial_axis_correlations(j) {
            partial_axes.insert(variable.clone(), json!(rows_of(c)));
        }
        if let Some(p) = &model.partials()[j] {
            partial_pcas.insert(
                variable.clone(),
                json!({
                    "first_eigenvalue": p.first_eigenvalue,
                    "block_weight": p.weight,
                    "eigenvalues": p.eigen.eigenvalues(),
                    "percent_inertia": p.percent_inertia(),
                }),
            );
        }
    }
    let gaps: Vec<_> = model
        .variables()
        .iter()
        .zip(input.gaps)
        .map(|(v, g)| {
            json!({
                "variable": v,
                "trace": g.trace,
                "trace_per_bin": g.trace_per_bin,
                "trace_averaged": g.trace_averaged,
                "wasserstein_variance": g.variance,
                "gap": g.gap,
                "gap_explicit": g.gap_explicit,
            })
        })
        .collect();
    let doc = json!({
        "units": input.units,
        "variables": model.variables(),
        "degenerate_blocks": model.degenerate_blocks(),
        "block_weights": model.block_weights(),
        "total_inertia": model.total_inertia(),
        "eigenvalues": model.eigenvalues(),
        "percent_variance": model.percent_inertia(),
        "cumulative_percent": model.cumulative_percent(),
        "partial_pca": partial_pcas,
        "individual_coordinates": rows_of(model.row_coordinates()),
        "partial_individual_coordinates": partial,
        "variable_scores": rows_of(model.all_variable_scores()),
        "compromise_scores": model.compromise_scores().map(rows_of),
        "unit_contributions": {
            "cr": rows_of(&model.unit_contributions().cr),
            "ca": rows_of(&model.unit_contributions().ca),
        },
        "column_contributions": {
            "cr": rows_of(&model.column_contributions().cr),
            "ca": rows_of(&model.column_contributions().ca),
        },
        "partial_axis_correlations": partial_axes,
        "rv_matrix": rows_of(model.rv_matrix()),
        "trace_gap": gaps,
    });
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    Ok(text)
}

/// Writes the report files into `dir` and returns their paths in write order.
pub fn emit_model_report(input: &ReportInput<'_>, dir: &Path, formats: &[ReportFormat]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let model = input.model;
    let mut files: Vec<(&str, String)> = Vec::new();
    if formats.contains(&ReportFormat::Csv) {
        files.push(("eigenvalues.csv", eigenvalues_csv(model)));
        files.push(("variable_scores.csv", variable_scores_csv(model, input.column_levels)));
        files.push(("individual_scores.csv", individual_scores_csv(model, input.units)));
        files.push(("contributions.csv", contributions_csv(model, input.units)));
        files.push(("rv_matrix.csv", rv_matrix_csv(model)));
        files.push(("trace_gap.csv", trace_gap_csv(model, input.gaps)));
        files.push(("moments.csv", moments_csv(model, input.units, input.summaries)));
        if let Some(diag) = input.moments {
            files.push(("moment_axes.csv", moment_axes_csv(diag)));
        }
    }
    if formats.contains(&ReportFormat::Json) {
        files.push(("model.json", model_json(input)?));
    }
    let mut written = Vec::with_capacity(files.len());
    for (name, content) in files {
        let path = dir.join(name);
        fs::write(&path, content)?;
        written.push(path);
    }
    Ok(written)
}
