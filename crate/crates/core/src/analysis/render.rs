//! Report serialization. Every format is a pure function of the report.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::Value;
use thiserror::Error;

use super::{ExtractionRecord, ScaleReport};

/// Version tag written into every artifact.
pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("unsupported format {0:?} (expected json, csv or svg)")]
    UnsupportedFormat(String),
    #[error("report has no scales")]
    EmptyReport,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("csv output is not utf-8")]
    Utf8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

impl FromStr for Format {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => Err(RenderError::UnsupportedFormat(other.to_string())),
        }
    }
}

pub fn render_report(report: &ScaleReport, format: Format) -> Result<String, RenderError> {
    if report.scales.is_empty() {
        return Err(RenderError::EmptyReport);
    }
    match format {
        Format::Json => render_json(report),
        Format::Csv => render_csv(report),
        Format::Svg => Ok(render_svg(report)),
    }
}

/// Extraction record as JSON, in the same style as the report.
pub fn render_extraction(record: &ExtractionRecord) -> Result<String, RenderError> {
    versioned_json(record)
}

fn render_json(report: &ScaleReport) -> Result<String, RenderError> {
    versioned_json(report)
}

/// Pretty JSON with sorted keys and a `schema` field.
fn versioned_json<T: serde::Serialize>(item: &T) -> Result<String, RenderError> {
    let mut value = serde_json::to_value(item)?;
    if let Value::Object(map) = &mut value {
        map.insert("schema".into(), Value::from(SCHEMA_VERSION));
    }
    let mut out = serde_json::to_string_pretty(&value)?;
    out.push('\n');
    Ok(out)
}

pub(crate) const CSV_COLUMNS: [&str; 17] = [
    "schema",
    "position",
    "scale",
    "edges",
    "triangles",
    "chain_connected",
    "generators",
    "relators",
    "simplified_generators",
    "simplified_relators",
    "free_rank",
    "torsion",
    "invariants",
    "trivial",
    "ball_vertices",
    "unknown_merges",
    "bonding_to_next",
];

fn render_csv(report: &ScaleReport) -> Result<String, RenderError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS)?;
    for s in &report.scales {
        let bonding = report
            .bonding
            .iter()
            .find(|b| b.position == s.position)
            .map(|b| serde_json::to_value(b.result).ok().and_then(|v| v.as_str().map(str::to_string)))
            .unwrap_or_default()
            .unwrap_or_default();
        w.write_record([
            SCHEMA_VERSION.to_string(),
            s.position.to_string(),
            s.scale.clone(),
            s.edges.to_string(),
            s.triangles.to_string(),
            s.chain_connected.to_string(),
            s.generators.to_string(),
            s.relators.to_string(),
            s.simplified_generators.to_string(),
            s.simplified_relators.to_string(),
            s.free_rank.to_string(),
            s.torsion.join(" "),
            s.invariants.clone(),
            s.trivial.label().to_string(),
            s.ball.vertices.to_string(),
            s.ball.unknown_merges.to_string(),
            bonding,
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| RenderError::Csv(e.into_error().into()))?;
    String::from_utf8(bytes).map_err(|_| RenderError::Utf8)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Step plot of free rank against ladder position.
fn render_svg(report: &ScaleReport) -> String {
    let k = report.scales.len();
    let max_rank = report.scales.iter().map(|s| s.free_rank).max().unwrap_or(0).max(1);
    let (left, top, step_w, plot_h) = (60usize, 30usize, 80usize, 160usize);
    let width = left + step_w * k + 30;
    let height = top + plot_h + 70;
    let y_of = |rank: usize| top + plot_h - rank * plot_h / max_rank;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" data-schema="{SCHEMA_VERSION}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="18" font-family="sans-serif" font-size="13" text-anchor="middle">free rank by ladder position</text>"#,
        width / 2
    );
    let axis_y = top + plot_h;
    let _ = writeln!(
        svg,
        r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{axis_y}" stroke="black"/><line x1="{left}" y1="{axis_y}" x2="{}" y2="{axis_y}" stroke="black"/>"#,
        left + step_w * k
    );
    for r in 0..=max_rank {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{r}</text>"#,
            left - 6,
            y_of(r) + 4
        );
    }
    let mut path = String::new();
    for (i, s) in report.scales.iter().enumerate() {
        let (x0, x1, y) = (left + step_w * i, left + step_w * (i + 1), y_of(s.free_rank));
        if i == 0 {
            let _ = write!(path, "M {x0} {y} ");
        } else {
            let _ = write!(path, "L {x0} {y} ");
        }
        let _ = write!(path, "L {x1} {y} ");
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2,
            axis_y + 16,
            escape(&s.scale)
        );
    }
    let _ = writeln!(svg, r#"<path d="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#, path.trim_end());
    for &c in &report.critical {
        let x = left + step_w * (c + 1);
        let _ = writeln!(
            svg,
            r#"<line x1="{x}" y1="{top}" x2="{x}" y2="{axis_y}" stroke="firebrick" stroke-dasharray="4 3"/>"#
        );
    }
    svg.push_str("</svg>\n");
    svg
}
