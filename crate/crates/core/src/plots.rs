//! SVG figures: Spanish fans, partial-axes circles, individual planes with
//! distribution glyphs and the scree chart. Output depends only on the inputs.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::io::DistributionalTable;
use crate::mfa::MfaModel;

pub const WIDTH: f64 = 960.0;
pub const HEIGHT: f64 = 720.0;

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

/// Pair of distinct axes, zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Plane {
    alpha: usize,
    beta: usize,
}

impl Plane {
    pub fn new(alpha: usize, beta: usize, rank: usize) -> Result<Self> {
        if alpha == beta {
            return Err(Error::domain(format!("plane axes must differ (got {} twice)", alpha + 1)));
        }
        for axis in [alpha, beta] {
            if axis >= rank {
                return Err(Error::AxisOutOfRange { axis, available: rank });
            }
        }
        Ok(Plane { alpha, beta })
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    /// `"<α>_<β>"` with one-based axis numbers.
    pub fn suffix(&self) -> String {
        format!("{}_{}", self.alpha + 1, self.beta + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlotKind {
    Fan,
    Circle,
    Plane,
    Scree,
}

impl PlotKind {
    pub const ALL: [PlotKind; 4] = [PlotKind::Fan, PlotKind::Circle, PlotKind::Plane, PlotKind::Scree];

    pub fn name(&self) -> &'static str {
        match self {
            PlotKind::Fan => "fan",
            PlotKind::Circle => "circle",
            PlotKind::Plane => "plane",
            PlotKind::Scree => "scree",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        PlotKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown plot kind `{s}` (expected fan, circle, plane or scree)")))
    }

    /// `<kind>_<α>_<β>.svg`; the scree chart has no plane.
    pub fn file_name(&self, plane: Option<Plane>) -> String {
        match (self, plane) {
            (PlotKind::Scree, _) | (_, None) => format!("{}.svg", self.name()),
            (_, Some(p)) => format!("{}_{}.svg", self.name(), p.suffix()),
        }
    }
}

pub fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

struct Svg {
    title: String,
    body: String,
    warnings: Vec<String>,
}

impl Svg {
    fn new(title: &str) -> Self {
        Svg { title: title.to_string(), body: String::new(), warnings: Vec::new() }
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, style: &str) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {style}/>"#,
            num(x1),
            num(y1),
            num(x2),
            num(y2)
        );
    }

    fn circle(&mut self, cx: f64, cy: f64, r: f64, style: &str) {
        let _ = writeln!(self.body, r#"<circle cx="{}" cy="{}" r="{}" {style}/>"#, num(cx), num(cy), num(r));
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, style: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{}" y="{}" width="{}" height="{}" {style}/>"#,
            num(x),
            num(y),
            num(w),
            num(h)
        );
    }

    fn text(&mut self, x: f64, y: f64, content: &str, style: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" {style}>{}</text>"#,
            num(x),
            num(y),
            escape_xml(content)
        );
    }

    fn points(points: &[(f64, f64)]) -> String {
        points.iter().map(|&(x, y)| format!("{},{}", num(x), num(y))).collect::<Vec<_>>().join(" ")
    }

    fn polyline(&mut self, points: &[(f64, f64)], style: &str) {
        let _ = writeln!(self.body, r#"<polyline points="{}" {style}/>"#, Self::points(points));
    }

    fn polygon(&mut self, points: &[(f64, f64)], style: &str) {
        let _ = writeln!(self.body, r#"<polygon points="{}" {style}/>"#, Self::points(points));
    }

    fn finish(self) -> String {
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
            w = WIDTH,
            h = HEIGHT
        );
        let _ = writeln!(out, "<title>{}</title>", escape_xml(&self.title));
        let _ = writeln!(out, r#"<metadata><warnings count="{}">"#, self.warnings.len());
        for w in &self.warnings {
            let _ = writeln!(out, "<warning>{}</warning>", escape_xml(w));
        }
        out.push_str("</warnings></metadata>\n");
        let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

fn axis_label(model: &MfaModel<f64>, axis: usize) -> String {
    format!("Dim {} ({:.2}%)", axis + 1, model.percent_inertia()[axis])
}

/// Unit circle panel: data (x, y) in [-1, 1]² to pixels.
struct CirclePanel {
    cx: f64,
    cy: f64,
    r: f64,
}

impl CirclePanel {
    fn standard() -> Self {
        CirclePanel { cx: 400.0, cy: 380.0, r: 290.0 }
    }

    fn px(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (self.cx + x * self.r, self.cy - y * self.r)
    }

    fn draw_frame(&self, svg: &mut Svg, model: &MfaModel<f64>, plane: Plane) {
        svg.circle(self.cx, self.cy, self.r, r##"fill="none" stroke="#444444" stroke-width="1""##);
        let grid = r##"stroke="#999999" stroke-width="0.8" stroke-dasharray="4 3""##;
        svg.line(self.cx - self.r - 10.0, self.cy, self.cx + self.r + 10.0, self.cy, grid);
        svg.line(self.cx, self.cy - self.r - 10.0, self.cx, self.cy + self.r + 10.0, grid);
        svg.text(
            self.cx + self.r,
            self.cy + 18.0,
            &axis_label(model, plane.alpha),
            r#"text-anchor="end""#,
        );
        svg.text(self.cx + 6.0, self.cy - self.r - 14.0, &axis_label(model, plane.beta), "");
    }
}

fn legend(svg: &mut Svg, entries: &[(String, &str)]) {
    for (i, (label, color)) in entries.iter().enumerate() {
        let y = 70.0 + 22.0 * i as f64;
        svg.rect(760.0, y - 10.0, 14.0, 14.0, &format!(r#"fill="{color}" fill-opacity="0.5" stroke="{color}""#));
        svg.text(782.0, y + 2.0, label, "");
    }
}

/// Fan of one block: one vertex per quantile column, `None` for a column
/// without variance.
#[derive(Debug, Clone, PartialEq)]
pub struct FanBlock {
    pub variable: String,
    pub vertices: Vec<Option<(f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FanGeometry {
    pub blocks: Vec<FanBlock>,
    pub warnings: Vec<String>,
}

/// Correlations of every quantile column with the row scores of the plane.
pub fn fan_geometry(model: &MfaModel<f64>, plane: Plane) -> Result<FanGeometry> {
    Plane::new(plane.alpha, plane.beta, model.rank())?;
    let offsets = model.offsets();
    let mut blocks = Vec::with_capacity(model.variables().len());
    let mut warnings = Vec::new();
    for (j, variable) in model.variables().iter().enumerate() {
        let mut vertices = Vec::with_capacity(offsets[j + 1] - offsets[j]);
        for k in offsets[j]..offsets[j + 1] {
            let x = model.column_axis_correlation(k, plane.alpha);
            let y = model.column_axis_correlation(k, plane.beta);
            match x.zip(y) {
                Some(v) => vertices.push(Some(v)),
                None => {
                    warnings.push(format!(
                        "variable `{variable}` column q{}: zero variance, point omitted",
                        k - offsets[j]
                    ));
                    vertices.push(None);
                }
            }
        }
        blocks.push(FanBlock { variable: variable.clone(), vertices });
    }
    Ok(FanGeometry { blocks, warnings })
}

/// Smallest angle (degrees) of a sector at the origin containing every
/// vertex direction. Vertices at the origin are ignored.
pub fn opening_angle(vertices: &[(f64, f64)]) -> f64 {
    let mut angles: Vec<f64> = vertices
        .iter()
        .filter(|(x, y)| x.hypot(*y) > 1e-12)
        .map(|(x, y)| y.atan2(*x).to_degrees())
        .collect();
    if angles.len() < 2 {
        return 0.0;
    }
    angles.sort_by(f64::total_cmp);
    let mut largest_gap = angles[0] + 360.0 - angles[angles.len() - 1];
    for w in angles.windows(2) {
        largest_gap = largest_gap.max(w[1] - w[0]);
    }
    360.0 - largest_gap
}

/// Quantile columns of every block on the correlation circle, consecutive
/// columns joined and closed through the origin.
pub fn spanish_fan(model: &MfaModel<f64>, plane: Plane) -> Result<String> {
    let geometry = fan_geometry(model, plane)?;
    let panel = CirclePanel::standard();
    let mut svg = Svg::new(&format!("Spanish fan, axes {} and {}", plane.alpha + 1, plane.beta + 1));
    svg.warnings = geometry.warnings.clone();
    panel.draw_frame(&mut svg, model, plane);
    let mut entries = Vec::new();
    for (j, block) in geometry.blocks.iter().enumerate() {
        let color = PALETTE[j % PALETTE.len()];
        entries.push((block.variable.clone(), color));
        let present: Vec<(f64, f64)> = block.vertices.iter().flatten().copied().collect();
        if present.is_empty() {
            continue;
        }
        let mut outline = vec![panel.px((0.0, 0.0))];
        outline.extend(present.iter().map(|&v| panel.px(v)));
        svg.polygon(
            &outline,
            &format!(r#"fill="{color}" fill-opacity="0.15" stroke="{color}" stroke-width="1.2" stroke-linejoin="round""#),
        );
        for (l, v) in block.vertices.iter().enumerate() {
            let Some(v) = v else { continue };
            let (x, y) = panel.px(*v);
            svg.circle(x, y, 2.5, &format!(r#"fill="{color}""#));
            if l == 0 || l + 1 == block.vertices.len() {
                let tag = if l == 0 { "min" } else { "max" };
                svg.text(x + 5.0, y - 5.0, &format!("{}.{tag}", block.variable), &format!(r#"fill="{color}""#));
            }
        }
    }
    legend(&mut svg, &entries);
    Ok(svg.finish())
}

/// One partial PCA dimension seen on the global plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialAxisArrow {
    pub variable: String,
    /// Zero-based partial dimension.
    pub dimension: usize,
    pub x: f64,
    pub y: f64,
}

/// Arrows for the first (up to three) partial dimensions of every fitted block.
pub fn partial_axes_arrows(model: &MfaModel<f64>, plane: Plane) -> Result<Vec<PartialAxisArrow>> {
    Plane::new(plane.alpha, plane.beta, model.rank())?;
    let mut arrows = Vec::new();
    for (j, variable) in model.variables().iter().enumerate() {
        let Some(corr) = model.partial_axis_correlations(j) else { continue };
        for d in 0..corr.nrows().min(3) {
            arrows.push(PartialAxisArrow {
                variable: variable.clone(),
                dimension: d,
                x: corr[[d, plane.alpha]],
                y: corr[[d, plane.beta]],
            });
        }
    }
    Ok(arrows)
}

pub fn partial_axes_circle(model: &MfaModel<f64>, plane: Plane) -> Result<String> {
    let arrows = partial_axes_arrows(model, plane)?;
    let panel = CirclePanel::standard();
    let mut svg = Svg::new(&format!("Partial axes, axes {} and {}", plane.alpha + 1, plane.beta + 1));
    svg.warnings = model
        .degenerate_blocks()
        .iter()
        .map(|v| format!("variable `{v}` is degenerate and has no partial axes"))
        .collect();
    panel.draw_frame(&mut svg, model, plane);
    for a in &arrows {
        let j = model.block_index(&a.variable)?;
        let color = PALETTE[j % PALETTE.len()];
        let (x0, y0) = panel.px((0.0, 0.0));
        let (x1, y1) = panel.px((a.x, a.y));
        svg.line(x0, y0, x1, y1, &format!(r#"stroke="{color}" stroke-width="1.5""#));
        let len = (x1 - x0).hypot(y1 - y0);
        if len > 1e-9 {
            let (ux, uy) = ((x1 - x0) / len, (y1 - y0) / len);
            let head = [
                (x1, y1),
                (x1 - 10.0 * ux - 4.0 * uy, y1 - 10.0 * uy + 4.0 * ux),
                (x1 - 10.0 * ux + 4.0 * uy, y1 - 10.0 * uy - 4.0 * ux),
            ];
            svg.polygon(&head, &format!(r#"fill="{color}""#));
        }
        svg.text(
            x1 + 6.0,
            y1 - 6.0,
            &format!("{}.{}", a.variable, a.dimension + 1),
            &format!(r#"fill="{color}""#),
        );
    }
    let entries: Vec<(String, &str)> = model
        .variables()
        .iter()
        .enumerate()
        .map(|(j, v)| (v.clone(), PALETTE[j % PALETTE.len()]))
        .collect();
    legend(&mut svg, &entries);
    Ok(svg.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GlyphLabel {
    #[default]
    Unit,
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GlyphOptions {
    /// Anchor at the partial coordinates of the (single) variable's block.
    pub partial: bool,
    pub label: GlyphLabel,
    /// Gray fill, darker for a higher mean.
    pub mean_shading: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlyphSide {
    Above,
    Below,
}

/// One unit's density drawn around its plane coordinate, in data units.
#[derive(Debug, Clone, PartialEq)]
pub struct Glyph {
    pub unit: String,
    pub variable: String,
    pub anchor: (f64, f64),
    pub side: GlyphSide,
    /// Frequency polygon from the minimum to the maximum, baseline at the anchor.
    pub points: Vec<(f64, f64)>,
    pub mean: f64,
    /// Gray level 0..=255 when shading is on.
    pub shade: Option<u8>,
    pub label: String,
}

const LIGHT: f64 = 208.0;
const DARK: f64 = 32.0;

/// Places one glyph per unit and variable. With two variables the first is
/// drawn above the anchor and the second below it.
pub fn glyph_layout(
    model: &MfaModel<f64>,
    table: &DistributionalTable,
    variables: &[&str],
    plane: Plane,
    options: &GlyphOptions,
) -> Result<Vec<Glyph>> {
    Plane::new(plane.alpha, plane.beta, model.rank())?;
    if variables.is_empty() || variables.len() > 2 {
        return Err(Error::domain("an individual plane shows one or two variables"));
    }
    if options.partial && variables.len() != 1 {
        return Err(Error::domain("partial anchors need exactly one variable"));
    }
    if table.units().len() != model.units() {
        return Err(Error::domain("table and model have different units"));
    }
    let coords = if options.partial {
        let block = model.block_index(variables[0])?;
        model
            .partial_coordinates(block)
            .ok_or_else(|| Error::DegenerateBlock(variables[0].to_string()))?
    } else {
        model.row_coordinates()
    };
    let anchors: Vec<(f64, f64)> = (0..model.units())
        .map(|i| (coords[[i, plane.alpha]], coords[[i, plane.beta]]))
        .collect();
    let spread = |f: fn(&(f64, f64)) -> f64| {
        let lo = anchors.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = anchors.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        if hi - lo > 0.0 {
            hi - lo
        } else {
            1.0
        }
    };
    let (x_spread, y_spread) = (spread(|a| a.0), spread(|a| a.1));

    let mut glyphs = Vec::new();
    for (position, name) in variables.iter().enumerate() {
        let v = table.variable_index(name)?;
        let side = if position == 0 { GlyphSide::Above } else { GlyphSide::Below };
        let hists = table.variable_column(v);
        let means: Vec<f64> = hists.iter().map(|h| h.summarize().mean).collect();
        let range = hists.iter().map(|h| h.max() - h.min()).fold(0.0, f64::max);
        let h_scale = if range > 0.0 { 0.12 * x_spread / range } else { 0.0 };
        let densities: Vec<Vec<Option<f64>>> = hists
            .iter()
            .map(|h| {
                h.bins()
                    .iter()
                    .map(|b| {
                        let w = b.upper - b.lower;
                        (w > 0.0).then(|| b.weight / w)
                    })
                    .collect()
            })
            .collect();
        let peak = densities.iter().flatten().flatten().copied().fold(0.0, f64::max);
        let v_scale = 0.08 * y_spread;
        let (lo_mean, hi_mean) = means
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &m| (lo.min(m), hi.max(m)));
        for (i, h) in hists.iter().enumerate() {
            let (ax, ay) = anchors[i];
            let sign = if side == GlyphSide::Above { 1.0 } else { -1.0 };
            let place = |value: f64, height: f64| (ax + (value - means[i]) * h_scale, ay + sign * height * v_scale);
            let mut points = vec![place(h.min(), 0.0)];
            for (b, d) in h.bins().iter().zip(&densities[i]) {
                let height = match d {
                    Some(d) if peak > 0.0 => d / peak,
                    _ => 1.0,
                };
                points.push(place(b.center(), height));
            }
            points.push(place(h.max(), 0.0));
            let shade = options.mean_shading.then(|| {
                let t = if hi_mean > lo_mean { (means[i] - lo_mean) / (hi_mean - lo_mean) } else { 0.5 };
                (LIGHT - t * (LIGHT - DARK)).round() as u8
            });
            let label = match options.label {
                GlyphLabel::Unit => table.units()[i].clone(),
                GlyphLabel::Mean => format!("{:.2}", means[i]),
            };
            glyphs.push(Glyph {
                unit: table.units()[i].clone(),
                variable: name.to_string(),
                anchor: (ax, ay),
                side,
                points,
                mean: means[i],
                shade,
                label,
            });
        }
    }
    Ok(glyphs)
}

/// Units on a factorial plane, each with its distribution glyph.
pub fn individual_plane(
    model: &MfaModel<f64>,
    table: &DistributionalTable,
    variables: &[&str],
    plane: Plane,
    options: &GlyphOptions,
) -> Result<String> {
    let glyphs = glyph_layout(model, table, variables, plane, options)?;
    let all = glyphs.iter().flat_map(|g| g.points.iter().chain(std::iter::once(&g.anchor)));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let pad = |lo: f64, hi: f64| {
        let d = if hi > lo { 0.06 * (hi - lo) } else { 1.0 };
        (lo - d, hi + d)
    };
    let ((x0, x1), (y0, y1)) = (pad(x0, x1), pad(y0, y1));
    let (left, right, top, bottom) = (70.0, 900.0, 60.0, 650.0);
    let px = |(x, y): (f64, f64)| {
        (
            left + (x - x0) / (x1 - x0) * (right - left),
            bottom - (y - y0) / (y1 - y0) * (bottom - top),
        )
    };

    let scope = if options.partial { format!("partial {}", variables[0]) } else { "global".into() };
    let mut svg = Svg::new(&format!(
        "Individuals ({scope}), axes {} and {}",
        plane.alpha + 1,
        plane.beta + 1
    ));
    svg.rect(left, top, right - left, bottom - top, r##"fill="none" stroke="#444444""##);
    let grid = r##"stroke="#999999" stroke-width="0.8" stroke-dasharray="4 3""##;
    if x0 < 0.0 && x1 > 0.0 {
        let (x, _) = px((0.0, 0.0));
        svg.line(x, top, x, bottom, grid);
    }
    if y0 < 0.0 && y1 > 0.0 {
        let (_, y) = px((0.0, 0.0));
        svg.line(left, y, right, y, grid);
    }
    svg.text((left + right) / 2.0, bottom + 34.0, &axis_label(model, plane.alpha), r#"text-anchor="middle""#);
    svg.text(
        20.0,
        (top + bottom) / 2.0,
        &axis_label(model, plane.beta),
        &format!(r#"text-anchor="middle" transform="rotate(-90 20 {})""#, num((top + bottom) / 2.0)),
    );
    for g in &glyphs {
        let pts: Vec<(f64, f64)> = g.points.iter().map(|&p| px(p)).collect();
        let fill = match g.shade {
            Some(s) => format!(r##"fill="#{s:02x}{s:02x}{s:02x}" fill-opacity="0.85""##),
            None => r#"fill="none""#.to_string(),
        };
        let j = variables.iter().position(|v| *v == g.variable).unwrap_or(0);
        let stroke = PALETTE[j % PALETTE.len()];
        svg.polygon(&pts, &format!(r#"{fill} stroke="{stroke}" stroke-width="1""#));
        let (ax, ay) = px(g.anchor);
        svg.circle(ax, ay, 2.5, r#"fill="black""#);
        let ly = match g.side {
            GlyphSide::Above => ay + 13.0,
            GlyphSide::Below => pts.iter().map(|p| p.1).fold(ay, f64::max) + 12.0,
        };
        if g.side == GlyphSide::Above || variables.len() == 1 || options.label == GlyphLabel::Mean {
            svg.text(ax, ly, &g.label, r#"text-anchor="middle" font-size="10""#);
        }
    }
    if variables.len() == 2 {
        let entries: Vec<(String, &str)> = vec![
            (format!("{} (above)", variables[0]), PALETTE[0]),
            (format!("{} (below)", variables[1]), PALETTE[1]),
        ];
        for (i, (label, color)) in entries.iter().enumerate() {
            svg.text(left + 8.0, top + 18.0 + 16.0 * i as f64, label, &format!(r#"fill="{color}""#));
        }
    }
    Ok(svg.finish())
}

/// Bars of the eigenvalue percentages with the cumulative line.
pub fn scree(model: &MfaModel<f64>) -> String {
    let percent = model.percent_inertia();
    let cumulative = model.cumulative_percent();
    let mut svg = Svg::new("Eigenvalue percentages");
    let (left, right, top, bottom) = (80.0, 900.0, 60.0, 640.0);
    let y = |p: f64| bottom - p / 100.0 * (bottom - top);
    svg.line(left, bottom, right, bottom, r##"stroke="#444444""##);
    svg.line(left, top, left, bottom, r##"stroke="#444444""##);
    for tick in (0..=100).step_by(20) {
        let t = tick as f64;
        svg.line(left - 5.0, y(t), left, y(t), r##"stroke="#444444""##);
        svg.text(left - 8.0, y(t) + 4.0, &format!("{tick}%"), r#"text-anchor="end""#);
    }
    let n = percent.len().max(1) as f64;
    let slot = (right - left) / n;
    let bar = slot * 0.7;
    let mut line = Vec::with_capacity(percent.len());
    for (a, (&p, &c)) in percent.iter().zip(cumulative).enumerate() {
        let x = left + slot * a as f64 + (slot - bar) / 2.0;
        svg.rect(x, y(p), bar, bottom - y(p), r##"fill="#1f77b4""##);
        if percent.len() <= 25 {
            svg.text(x + bar / 2.0, y(p) - 4.0, &format!("{p:.2}"), r#"text-anchor="middle" font-size="10""#);
            svg.text(x + bar / 2.0, bottom + 16.0, &format!("{}", a + 1), r#"text-anchor="middle""#);
        }
        line.push((x + bar / 2.0, y(c)));
    }
    svg.polyline(&line, r##"fill="none" stroke="#d62728" stroke-width="1.5""##);
    for &(x, yy) in &line {
        svg.circle(x, yy, 2.5, r##"fill="#d62728""##);
    }
    svg.text((left + right) / 2.0, bottom + 40.0, "component", r#"text-anchor="middle""#);
    svg.finish()
}
