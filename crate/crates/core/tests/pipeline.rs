use std::sync::Arc;

use echain::analysis::{analyze_ladder, render_extraction, render_report, AnalysisConfig, Format, RenderError, ScaleReport};
use echain::covering::{build_covering_ball, Aggregate, ScaleModel};
use echain::fixtures;
use echain::group::{abelianize, Verdict, DEFAULT_BUDGET};
use echain::rips::{rips_graph, spanning_tree};
use echain::space::{Entourage, FiniteSpace, Scale};
use serde_json::Value;

fn rel(space: &FiniteSpace, eps: &str) -> Entourage {
    Entourage::from_scale(space, &Scale::parse(eps).unwrap()).unwrap()
}

fn hex_report() -> ScaleReport {
    let hex = fixtures::hex();
    let ladder: Vec<Entourage> = ["2.1", "1.8", "1.2"].iter().map(|e| rel(&hex, e)).collect();
    analyze_ladder(&hex, &ladder, &AnalysisConfig::default()).unwrap()
}

fn grid_report() -> ScaleReport {
    let grid = fixtures::grid("0.25");
    let ladder = vec![fixtures::u_rel(&grid), rel(&grid, "0.3")];
    analyze_ladder(&grid, &ladder, &AnalysisConfig::default()).unwrap()
}

fn validator(root: &str) -> jsonschema::JSONSchema {
    let text = include_str!("../schema/report.schema.json");
    let mut schema: Value = serde_json::from_str(text).unwrap();
    if root != "#" {
        let defs = schema["$defs"].clone();
        schema = serde_json::json!({ "$ref": root, "$defs": defs });
    }
    jsonschema::JSONSchema::compile(&schema).unwrap()
}

fn assert_valid(schema: &jsonschema::JSONSchema, doc: &Value) {
    if let Err(errors) = schema.validate(doc) {
        let messages: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("schema violations: {messages:?}");
    }
}

#[test]
fn hexagon_presentation_sizes() {
    let hex = fixtures::hex();
    for (eps, gens, rels, rank) in [("2.1", 10, 20, 0), ("1.8", 7, 8, 0), ("1.2", 1, 0, 1)] {
        let model = ScaleModel::build(&hex, &rel(&hex, eps), DEFAULT_BUDGET).unwrap();
        let p = model.presentation();
        assert_eq!((p.generator_count(), p.relators().len()), (gens, rels), "scale {eps}");
        assert_eq!(abelianize(p).free_rank, rank);
    }
}

#[test]
fn hexagon_generators_match_euler_characteristic() {
    // for a connected graph the non-tree edges number |E| - |V| + 1
    let hex = fixtures::hex();
    for eps in ["2.1", "1.8", "1.2"] {
        let g = rips_graph(&hex, &rel(&hex, eps)).unwrap();
        let t = spanning_tree(&g, 0).unwrap();
        assert_eq!(t.non_tree_edges(&g).len(), g.edges().len() - 6 + 1);
    }
}

#[test]
fn grid_ladder_report() {
    let report = grid_report();
    assert_eq!(report.bonding.len(), 1);
    assert_eq!(report.bonding[0].result, Aggregate::Fails);
    assert_eq!(report.critical, vec![0]);
    assert_eq!(report.scales[0].free_rank, 1);
    assert_eq!(report.scales[1].free_rank, 0);
    let grid = fixtures::grid("0.25");
    let zero_three = [grid.point_at("0").unwrap(), grid.point_at("3").unwrap()];
    assert!(report.bonding[0].witnesses.iter().any(|w| w.chain == zero_three));

    let json: Value = serde_json::from_str(&render_report(&report, Format::Json).unwrap()).unwrap();
    let pairs: Vec<(u64, u64)> = json["extractions"][0]["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_u64().unwrap(), p[1].as_u64().unwrap()))
        .collect();
    let mut sorted = pairs.clone();
    sorted.sort();
    assert_eq!(pairs, sorted);
    let expected: Vec<(u64, u64)> = (0..49u64).flat_map(|i| (i + 1..49).filter(move |j| j - i <= 3).map(move |j| (i, j))).collect();
    assert_eq!(pairs, expected);
}

#[test]
fn hexagon_csv_rows() {
    let csv = render_report(&hex_report(), Format::Csv).unwrap();
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let headers: Vec<String> = reader.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(headers.first().map(String::as_str), Some("schema"));
    assert!(headers.iter().any(|h| h == "free_rank"));
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    let scales: Vec<&str> = rows.iter().map(|r| &r[2]).collect();
    assert_eq!(scales, ["2.1", "1.8", "1.2"]);
}

#[test]
fn reports_follow_the_schema() {
    let schema = validator("#");
    for report in [hex_report(), grid_report()] {
        let doc: Value = serde_json::from_str(&render_report(&report, Format::Json).unwrap()).unwrap();
        assert_valid(&schema, &doc);
    }
    let report = grid_report();
    let record = &report.extractions[0];
    let doc: Value = serde_json::from_str(&render_extraction(record).unwrap()).unwrap();
    assert_valid(&validator("#/$defs/extraction"), &doc);

    let mut broken: Value = serde_json::from_str(&render_report(&hex_report(), Format::Json).unwrap()).unwrap();
    broken["schema"] = Value::from(2);
    assert!(schema.validate(&broken).is_err());
    broken["schema"] = Value::from(1);
    broken["scales"][0]["trivial"] = serde_json::json!({ "verdict": "maybe" });
    assert!(schema.validate(&broken).is_err());
}

#[test]
fn json_keys_are_sorted() {
    let text = render_report(&hex_report(), Format::Json).unwrap();
    let top: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
    assert!(top.contains(&"schema"));
    assert!(text.ends_with("}\n"));
}

#[test]
fn empty_report_is_rejected() {
    let mut report = hex_report();
    report.scales.clear();
    assert!(matches!(render_report(&report, Format::Json), Err(RenderError::EmptyReport)));
    assert!(matches!("pdf".parse::<Format>(), Err(RenderError::UnsupportedFormat(_))));
}

#[test]
fn svg_is_a_step_plot() {
    let svg = render_report(&hex_report(), Format::Svg).unwrap();
    assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    assert_eq!(svg.matches("<path").count(), 1);
    // one dashed marker per critical position
    assert_eq!(svg.matches("stroke-dasharray").count(), 1);
}

#[test]
fn counts_do_not_grow_down_the_ladder() {
    for report in [hex_report(), grid_report()] {
        for w in report.scales.windows(2) {
            assert!(w[1].edges <= w[0].edges);
            assert!(w[1].triangles <= w[0].triangles);
        }
    }
}

#[test]
fn larger_budgets_never_flip_certified_verdicts() {
    let hex = fixtures::hex();
    let ladder: Vec<Entourage> = ["2.1", "1.8", "1.2"].iter().map(|e| rel(&hex, e)).collect();
    let mut previous: Option<Vec<Verdict>> = None;
    for budget in [1, 10, 100, 10_000, DEFAULT_BUDGET] {
        let config = AnalysisConfig {
            budget,
            ..AnalysisConfig::default()
        };
        let report = analyze_ladder(&hex, &ladder, &config).unwrap();
        let verdicts: Vec<Verdict> = report.scales.iter().map(|s| s.trivial.clone()).collect();
        if let Some(prev) = &previous {
            for (a, b) in prev.iter().zip(&verdicts) {
                if !a.is_unknown() {
                    assert_eq!(a.as_bool(), b.as_bool(), "budget {budget}");
                }
            }
        }
        previous = Some(verdicts);
    }
}

#[test]
fn ball_construction_is_deterministic() {
    let grid = fixtures::grid("0.5");
    let u = fixtures::u_rel(&grid);
    let model = Arc::new(ScaleModel::build(&grid, &u, DEFAULT_BUDGET).unwrap());
    let a = build_covering_ball(Arc::clone(&model), 10).unwrap();
    let b = build_covering_ball(model, 10).unwrap();
    assert_eq!(a.len(), b.len());
    assert_eq!(a.edges(), b.edges());
    for (x, y) in a.vertices().iter().zip(b.vertices()) {
        assert_eq!((x.endpoint, &x.chain), (y.endpoint, &y.chain));
    }
}
