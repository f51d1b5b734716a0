//! Table in, fitted model, reports and figures out.

use std::fs;
use std::path::{Path, PathBuf};

use crate::distribution::{DistributionSummary, EquiDepthHistogram};
use crate::error::{Error, Result};
use crate::io::{emit_model_report, DistributionalTable, QuantileSpec, ReportFormat, ReportInput};
use crate::mfa::{global_mfa, moment_axis_diagnostics, MfaModel, MomentAxisDiagnostics};
use crate::plots::{individual_plane, partial_axes_circle, scree, spanish_fan, GlyphLabel, GlyphOptions, Plane, PlotKind};
use crate::quantile::{build_quantile_table, center_columns, trace_variance_gap, BlockSet, ExtremePolicy, GapReport, UnitWeights};

#[derive(Debug, Clone, PartialEq)]
pub struct MfaOptions {
    pub quantiles: QuantileSpec,
    pub extremes: ExtremePolicy<f64>,
}

impl Default for MfaOptions {
    fn default() -> Self {
        MfaOptions { quantiles: QuantileSpec::default(), extremes: ExtremePolicy::Active }
    }
}

/// Everything computed by [`run_mfa`].
#[derive(Debug, Clone)]
pub struct Analysis {
    pub table: DistributionalTable,
    /// `homogenized[j][i]`: unit `i` on variable `j`.
    pub homogenized: Vec<Vec<EquiDepthHistogram<f64>>>,
    pub blocks: BlockSet<f64>,
    pub gaps: Vec<GapReport<f64>>,
    /// Exact moments of the source histograms, `summaries[j][i]`.
    pub summaries: Vec<Vec<DistributionSummary<f64>>>,
    pub moments: MomentAxisDiagnostics<f64>,
    pub model: MfaModel<f64>,
    /// Probability level of every global column.
    pub column_levels: Vec<f64>,
}

impl Analysis {
    /// Non-fatal findings worth reporting to the user.
    pub fn warnings(&self) -> Vec<String> {
        self.model
            .degenerate_blocks()
            .into_iter()
            .map(|v| format!("variable `{v}` is degenerate (identical distributions); excluded from the fit"))
            .collect()
    }
}

pub fn run_mfa(table: DistributionalTable, options: &MfaOptions) -> Result<Analysis> {
    options.quantiles.validate()?;
    if let ExtremePolicy::Weight(w) = options.extremes {
        if !(w > 0.0 && w <= 1.0) {
            return Err(Error::domain(format!("extreme weight {w} outside (0, 1]")));
        }
    }
    let mut homogenized = Vec::with_capacity(table.variables().len());
    let mut tables = Vec::with_capacity(table.variables().len());
    let mut gaps = Vec::with_capacity(table.variables().len());
    let mut summaries = Vec::with_capacity(table.variables().len());
    let mut column_levels = Vec::new();
    for (j, variable) in table.variables().iter().enumerate() {
        let k = options.quantiles.for_variable(variable);
        let hists = table
            .variable_column(j)
            .into_iter()
            .map(|h| h.homogenize(k))
            .collect::<Result<Vec<_>>>()?;
        let q = center_columns(build_quantile_table(variable.clone(), &hists, k)?)?;
        gaps.push(trace_variance_gap(&q, &hists)?);
        column_levels.extend(q.column_levels());
        summaries.push(table.variable_column(j).iter().map(|h| h.summarize()).collect());
        tables.push(q);
        homogenized.push(hists);
    }
    let blocks = BlockSet::with_extremes(tables, options.extremes)?;
    let model = global_mfa(&blocks, &UnitWeights::uniform(table.units().len()))?;
    let moments = moment_axis_diagnostics(&model, &summaries)?;
    Ok(Analysis { table, homogenized, blocks, gaps, summaries, moments, model, column_levels })
}

fn file_safe(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

/// Writes the report files and the requested figures; returns the paths.
/// Figures other than the scree chart need `plane`.
pub fn write_outputs(analysis: &Analysis, dir: &Path, plots: &[PlotKind], plane: Option<Plane>) -> Result<Vec<PathBuf>> {
    let input = ReportInput {
        model: &analysis.model,
        units: analysis.table.units(),
        column_levels: &analysis.column_levels,
        gaps: &analysis.gaps,
        moments: Some(&analysis.moments),
        summaries: &analysis.summaries,
    };
    let mut written = emit_model_report(&input, dir, &[ReportFormat::Csv, ReportFormat::Json])?;
    let model = &analysis.model;
    let mut kinds = plots.to_vec();
    kinds.sort();
    kinds.dedup();
    for kind in kinds {
        let mut files: Vec<(String, String)> = Vec::new();
        if kind == PlotKind::Scree {
            files.push((kind.file_name(None), scree(model)));
        } else {
            let plane = match plane {
                Some(p) => Plane::new(p.alpha(), p.beta(), model.rank())?,
                None => Plane::new(0, 1, model.rank())?,
            };
            match kind {
                PlotKind::Fan => files.push((kind.file_name(Some(plane)), spanish_fan(model, plane)?)),
                PlotKind::Circle => files.push((kind.file_name(Some(plane)), partial_axes_circle(model, plane)?)),
                PlotKind::Plane => {
                    let variables: Vec<&str> = analysis.table.variables().iter().take(2).map(String::as_str).collect();
                    let options = GlyphOptions { partial: false, label: GlyphLabel::Unit, mean_shading: true };
                    files.push((
                        kind.file_name(Some(plane)),
                        individual_plane(model, &analysis.table, &variables, plane, &options)?,
                    ));
                    let partial = GlyphOptions { partial: true, label: GlyphLabel::Mean, mean_shading: true };
                    for (j, variable) in model.variables().iter().enumerate() {
                        if model.partial_coordinates(j).is_none() {
                            continue;
                        }
                        files.push((
                            format!("plane_{}_{}.svg", file_safe(variable), plane.suffix()),
                            individual_plane(model, &analysis.table, &[variable.as_str()], plane, &partial)?,
                        ));
                    }
                }
                PlotKind::Scree => unreachable!(),
            }
        }
        for (name, content) in files {
            let path = dir.join(name);
            fs::write(&path, content)?;
            written.push(path);
        }
    }
    Ok(written)
}
