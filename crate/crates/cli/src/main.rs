//! `echain`: multi-scale chain-homotopy reports from the command line.

mod demo;
mod input;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use echain::analysis::{
    analyze_ladder, default_radius, extraction_record, render_extraction, render_report, validate_ladder,
    AnalysisConfig, Format,
};
use echain::covering::{build_covering_ball, ScaleModel};
use echain::group::DEFAULT_BUDGET;
use echain::oracle::{enumerate_classes, OracleGuard};
use echain::space::{Entourage, FiniteSpace};

use input::InputKind;

const EXIT_ERROR: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "echain", version, about = "Chain homotopy classes and covering relations of finite spaces across scales")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full pipeline over a ladder of scales.
    Analyze(AnalyzeArgs),
    /// Extract a covering relation from one outer relation and an inner ladder.
    Extract(ExtractArgs),
    /// Reproduce the interval example on a 1-D grid.
    Exex(DemoArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Points CSV (`id,x1[,x2,...]`), distance table JSON or relation JSON.
    #[arg(long)]
    input: PathBuf,
    /// Input kind; guessed from the file when omitted.
    #[arg(long, value_enum)]
    kind: Option<InputKind>,
    #[arg(long, default_value_t = 0)]
    basepoint: usize,
    /// Step budget for each word-problem decision.
    #[arg(long, env = "ECOVER_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Covering-ball radius; defaults to twice the finest component's diameter.
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long, default_value_t = 32)]
    radius_cap: usize,
    /// Exit 2 on any undecided verdict instead of only when they dominate.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: Common,
    /// Decreasing ladder: comma-separated thresholds or `@relation.json` items;
    /// a single `@file` holding one item per line is also accepted.
    #[arg(long, required = true)]
    scales: String,
    /// Output directory for `report.<format>`; without it the first format goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "json")]
    format: Vec<String>,
    /// E-short triples of ladder positions, e.g. `0:0:2`.
    #[arg(long = "e-short")]
    e_short: Vec<String>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Record wall time in the report.
    #[arg(long)]
    timing: bool,
    /// Cross-check the finest rung against exhaustive search.
    #[arg(long, hide = true)]
    oracle: bool,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    #[command(flatten)]
    common: Common,
    /// Outer relation: a threshold or `@relation.json`.
    #[arg(long)]
    outer: String,
    /// Inner ladder used to stabilize the basepoint component; defaults to the outer relation.
    #[arg(long)]
    inner: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DemoArgs {
    /// Grid step; must divide 3.
    #[arg(long, default_value = "0.25")]
    step: String,
    #[arg(long, env = "ECOVER_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long, default_value_t = 32)]
    radius_cap: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Extract(args) => cmd_extract(args),
        Command::Exex(args) => cmd_demo(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

/// Splits `--scales`; `@file` with no comma is read as one item per line.
fn scale_items(list: &str) -> Result<Vec<String>> {
    let list = list.trim();
    if let Some(path) = list.strip_prefix('@').filter(|p| !p.contains(',') && !p.ends_with(".json")) {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
        return Ok(text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_string)
            .collect());
    }
    Ok(list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
}

fn parse_triple(text: &str) -> Result<[usize; 3]> {
    let parts: Vec<usize> = text
        .split(':')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad --e-short `{text}`"))?;
    <[usize; 3]>::try_from(parts).map_err(|_| anyhow::anyhow!("--e-short `{text}` needs three positions"))
}

fn exit_for_unknowns(unknown: usize, total: usize, strict: bool) -> u8 {
    let dominated = if strict { unknown > 0 } else { 2 * unknown > total };
    if dominated {
        eprintln!("warning: {unknown} of {total} verdicts undecided within budget");
        EXIT_UNKNOWN
    } else {
        0
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<u8> {
    let c = &args.common;
    let formats = args
        .format
        .iter()
        .map(|f| f.parse::<Format>())
        .collect::<Result<Vec<_>, _>>()?;
    let e_short = args.e_short.iter().map(|t| parse_triple(t)).collect::<Result<Vec<_>>>()?;
    let space = input::load_space(&c.input, c.kind, c.basepoint)?;
    let ladder = input::ladder(&space, &scale_items(&args.scales)?)?;
    validate_ladder(&ladder)?;
    let config = AnalysisConfig {
        budget: c.budget,
        radius: c.radius,
        radius_cap: c.radius_cap,
        e_short,
        jobs: args.jobs,
        timing: args.timing,
    };
    let report = analyze_ladder(&space, &ladder, &config)?;
    if args.oracle {
        oracle_check(&space, ladder.last().unwrap(), c.budget)?;
    }
    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
            for f in &formats {
                let path = dir.join(format!("report.{}", f.extension()));
                write_or_print(Some(&path), &render_report(&report, *f)?)?;
            }
        }
        None => write_or_print(None, &render_report(&report, formats[0])?)?,
    }
    for s in &report.scales {
        eprintln!("scale {}: {} ({})", s.scale, s.invariants, s.trivial.label());
    }
    Ok(exit_for_unknowns(report.unknown_count(), report.verdict_count(), c.strict))
}

/// Compares the finest rung's ball with exhaustive class enumeration.
fn oracle_check(space: &FiniteSpace, relation: &Entourage, budget: u64) -> Result<()> {
    let max_len = 3;
    let partition = enumerate_classes(space, relation, max_len, 3, OracleGuard::default())
        .context("oracle cross-check")?;
    let model = Arc::new(ScaleModel::build(space, relation, budget)?);
    let ball = build_covering_ball(model, max_len)?;
    let agree = partition.len() == ball.len();
    eprintln!(
        "oracle: {} classes at length {max_len}, ball has {} vertices ({} undecided merges): {}",
        partition.len(),
        ball.len(),
        ball.unknown_merges(),
        if agree { "agree" } else { "DISAGREE" }
    );
    if !agree && ball.unknown_merges() == 0 {
        anyhow::bail!("oracle disagrees with the covering ball");
    }
    Ok(())
}

fn cmd_extract(args: ExtractArgs) -> Result<u8> {
    let c = &args.common;
    let space = input::load_space(&c.input, c.kind, c.basepoint)?;
    let outer = input::ladder_item(&space, &args.outer)?;
    let inner = match &args.inner {
        Some(list) => input::ladder(&space, &scale_items(list)?)?,
        None => vec![outer.clone()],
    };
    validate_ladder(&inner)?;
    if outer.is_diagonal() {
        eprintln!("warning: outer relation is the diagonal; no motion possible");
    }
    let radius = match c.radius {
        Some(r) => r,
        None => default_radius(&space, inner.last().unwrap(), c.radius_cap)?,
    };
    let model = Arc::new(ScaleModel::build(&space, &outer, c.budget)?);
    let ball = build_covering_ball(model, radius)?;
    let record = extraction_record(&ball, 0, &inner, &outer)?;
    write_or_print(args.out.as_deref(), &render_extraction(&record)?)?;
    eprintln!(
        "extracted {} pairs from a {}-class component of a {}-class ball",
        record.pairs.len(),
        record.component_size,
        ball.len()
    );
    if record.stability.low_confidence {
        eprintln!("warning: fewer than two inner rungs agree; the component is not stabilized");
    }
    Ok(exit_for_unknowns(ball.unknown_merges(), ball.len(), c.strict))
}

fn cmd_demo(args: DemoArgs) -> Result<u8> {
    let outcome = demo::run(&args.step, args.budget, args.radius, args.radius_cap)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    for line in &outcome.lines {
        println!("{line}");
    }
    Ok(if outcome.degenerate {
        EXIT_UNKNOWN
    } else if outcome.confirmed {
        0
    } else {
        EXIT_ERROR
    })
}
