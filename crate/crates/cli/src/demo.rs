//! Built-in reproduction of the interval example on a 1-D grid.

use std::sync::Arc;

use anyhow::{bail, Result};
use echain::covering::{build_covering_ball, extract_with_ladder, phi_image_check, Aggregate, ScaleModel};
use echain::decimal::{format_rational, parse_decimal};
use echain::fixtures;
use echain::analysis::default_radius;
use echain::space::{Entourage, Scale};
use num_rational::BigRational;
use num_traits::{One, Zero};

pub struct Outcome {
    pub lines: Vec<String>,
    pub warnings: Vec<String>,
    pub confirmed: bool,
    pub degenerate: bool,
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "CONFIRMED"
    } else {
        "NOT CONFIRMED"
    }
}

pub fn run(step_text: &str, budget: u64, radius: Option<usize>, radius_cap: usize) -> Result<Outcome> {
    let step = parse_decimal(step_text)?;
    if step <= BigRational::zero() {
        bail!("--step must be positive");
    }
    let grid = fixtures::grid(step_text);
    let u = fixtures::u_rel(&grid);
    let mut out = Outcome {
        lines: Vec::new(),
        warnings: Vec::new(),
        confirmed: false,
        degenerate: false,
    };
    out.lines.push(format!(
        "grid: {} points on [-6,6], step {}, basepoint 0",
        grid.len(),
        format_rational(&step)
    ));
    out.lines.push(format!("relation U: {}", u.descriptor()));
    if step >= BigRational::one() {
        out.degenerate = true;
        out.warnings.push(format!(
            "degenerate grid: step {} leaves no nonzero grid difference inside (-1,1)",
            format_rational(&step)
        ));
        return Ok(out);
    }
    let three = BigRational::from_integer(3.into());
    if !(&three / &step).is_integer() {
        bail!("--step {step_text} does not divide 3, so the chain {{0,3}} is not on the grid");
    }
    let at = |x: &str| grid.point_at(x).expect("grid point");
    let (zero, three_id) = (at("0"), at("3"));

    // inner ladder: two grid-step scales kept inside (-1,1)
    let cap = BigRational::one();
    let scale = |k: &str| {
        let v = (&step * parse_decimal(k).expect("literal")).min(cap.clone());
        Entourage::from_scale(&grid, &Scale::from_value(v).expect("positive"))
    };
    let inner = vec![scale("2.4")?, scale("1.2")?];
    let radius = match radius {
        Some(r) => r,
        None => default_radius(&grid, inner.last().unwrap(), radius_cap)?,
    };
    let model = Arc::new(ScaleModel::build(&grid, &u, budget)?);
    let ball = build_covering_ball(model, radius)?;
    out.lines.push(format!(
        "covering ball over U: radius {radius}, {} classes, {} undecided merges",
        ball.len(),
        ball.unknown_merges()
    ));

    let result = extract_with_ladder(&ball, &inner, &u)?;
    let s = &result.stability;
    out.lines.push(format!(
        "stabilized component A over {}: {} classes, stable from rung {}",
        s.rungs.join(" > "),
        result.component.len(),
        s.stable_from
    ));
    let v03 = ball.vertex_of_chain(&[zero, three_id])?;
    let outside = v03.is_some_and(|v| !result.component.contains(&v));
    out.lines.push(format!("class of {{0,3}} outside A: {}", mark(outside)));

    let v_grid = Entourage::from_scale(&grid, &Scale::parse("1")?)?;
    let extracted = result.extraction.relation == v_grid;
    out.lines.push(format!(
        "extracted V-grid relation: {} ({} pairs, all with |x-y| < 1)",
        mark(extracted),
        result.extraction.witnesses.len()
    ));

    let phi = phi_image_check(&ball, inner.last().unwrap())?;
    let not_onto = phi.aggregate == Aggregate::Fails && v03.is_some_and(|v| phi.witnesses.contains(&v));
    out.lines.push(format!(
        "bonding map from {}-chains not onto, witness {{0,3}}: {}",
        phi.inner,
        mark(not_onto)
    ));
    out.confirmed = outside && extracted && not_onto;
    Ok(out)
}
