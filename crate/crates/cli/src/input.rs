//! Input files: points CSV, distance-table JSON and relation JSON.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use echain::decimal::parse_decimal;
use echain::space::{Entourage, FiniteSpace, MetricSource, OpenInterval, Point, PointId, Scale};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    PointsCsv,
    DistanceJson,
    RelationJson,
}

impl InputKind {
    /// Guess from the extension, then from the JSON keys.
    fn detect(path: &Path, text: &str) -> Result<Self> {
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            return Ok(InputKind::PointsCsv);
        }
        let value: Value = serde_json::from_str(text).with_context(|| format!("{} is neither CSV nor JSON", path.display()))?;
        if value.get("d").is_some() {
            Ok(InputKind::DistanceJson)
        } else if value.get("pairs").is_some() || value.get("diff_intervals").is_some() {
            Ok(InputKind::RelationJson)
        } else {
            bail!("{}: cannot tell the input kind; pass --kind", path.display())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn load_space(path: &Path, kind: Option<InputKind>, basepoint: PointId) -> Result<FiniteSpace> {
    let text = read(path)?;
    let kind = match kind {
        Some(k) => k,
        None => InputKind::detect(path, &text)?,
    };
    let space = match kind {
        InputKind::PointsCsv => points_csv(&text)?,
        InputKind::DistanceJson => distance_json(&text)?,
        InputKind::RelationJson => relation_space(&text)?,
    };
    let space = space(basepoint);
    space.with_context(|| format!("invalid space in {}", path.display()))
}

type Pending = Box<dyn FnOnce(PointId) -> Result<FiniteSpace, echain::space::SpaceError>>;

fn points_csv(text: &str) -> Result<Pending> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().context("points CSV needs a header")?.clone();
    if header.len() < 2 || &header[0] != "id" {
        bail!("points CSV header must be `id,x1[,x2,...]`, got `{}`", header.iter().collect::<Vec<_>>().join(","));
    }
    let mut points = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("points CSV row {}", line + 2))?;
        if record.len() != header.len() {
            bail!("points CSV row {} has {} fields, expected {}", line + 2, record.len(), header.len());
        }
        let id: PointId = record[0].parse().with_context(|| format!("bad id `{}` on row {}", &record[0], line + 2))?;
        let coords: Vec<&str> = record.iter().skip(1).collect();
        points.push(Point::parse(id, &coords).with_context(|| format!("row {}", line + 2))?);
    }
    Ok(Box::new(move |b| FiniteSpace::build(points, MetricSource::Euclidean, b)))
}

/// A JSON number or string read as an exact decimal.
fn decimal_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => bail!("expected a decimal, got {other}"),
    }
}

fn distance_json(text: &str) -> Result<Pending> {
    let value: Value = serde_json::from_str(text)?;
    let n = value.get("n").and_then(Value::as_u64).context("distance table needs an integer `n`")? as usize;
    let rows = value.get("d").and_then(Value::as_array).context("distance table needs an array `d`")?;
    let mut table = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().with_context(|| format!("row {i} of `d` is not an array"))?;
        let parsed = row
            .iter()
            .map(|v| Ok(parse_decimal(&decimal_text(v)?)?))
            .collect::<Result<Vec<_>>>()
            .with_context(|| format!("row {i} of `d`"))?;
        table.push(parsed);
    }
    let points = (0..n).map(Point::bare).collect();
    Ok(Box::new(move |b| FiniteSpace::build(points, MetricSource::DistanceTable(table), b)))
}

fn relation_space(text: &str) -> Result<Pending> {
    let value: Value = serde_json::from_str(text)?;
    let pairs = pair_list(&value)?;
    let n = match value.get("n").and_then(Value::as_u64) {
        Some(n) => n as usize,
        None => pairs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(1),
    };
    let points = (0..n).map(Point::bare).collect();
    Ok(Box::new(move |b| FiniteSpace::build(points, MetricSource::Relational, b)))
}

fn pair_list(value: &Value) -> Result<Vec<(PointId, PointId)>> {
    let list = value.get("pairs").and_then(Value::as_array).context("relation JSON needs `pairs`")?;
    list.iter()
        .map(|p| {
            let p = p.as_array().filter(|p| p.len() == 2).context("each pair must be `[i, j]`")?;
            let id = |v: &Value| v.as_u64().map(|x| x as usize).context("pair entries must be point ids");
            Ok((id(&p[0])?, id(&p[1])?))
        })
        .collect()
}

/// Reads a relation JSON file over `space`.
pub fn load_relation(space: &FiniteSpace, path: &Path) -> Result<Entourage> {
    let value: Value = serde_json::from_str(&read(path)?).with_context(|| format!("{} is not JSON", path.display()))?;
    if let Some(list) = value.get("diff_intervals") {
        let list = list.as_array().context("`diff_intervals` must be an array")?;
        let intervals = list
            .iter()
            .map(|iv| {
                let iv = iv.as_array().filter(|p| p.len() == 2).context("each interval must be `[a, b]`")?;
                Ok(OpenInterval::parse(&decimal_text(&iv[0])?, &decimal_text(&iv[1])?)?)
            })
            .collect::<Result<Vec<_>>>()?;
        return Entourage::from_diff_intervals(space, &intervals).with_context(|| format!("relation {}", path.display()));
    }
    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Entourage::from_pairs(space, pair_list(&value)?, label).with_context(|| format!("relation {}", path.display()))
}

/// One ladder item: a decimal threshold or `@path` to a relation JSON.
pub fn ladder_item(space: &FiniteSpace, item: &str) -> Result<Entourage> {
    let item = item.trim();
    if let Some(path) = item.strip_prefix('@') {
        return load_relation(space, &PathBuf::from(path));
    }
    let scale = Scale::parse(item).with_context(|| format!("bad scale `{item}`"))?;
    Ok(Entourage::from_scale(space, &scale)?)
}

pub fn ladder(space: &FiniteSpace, items: &[String]) -> Result<Vec<Entourage>> {
    items.iter().map(|s| ladder_item(space, s)).collect()
}
