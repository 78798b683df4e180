//! Multi-scale driver: runs every per-scale and cross-scale computation over
//! a ladder of nested relations and collects the results.

mod render;

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::covering::{
    build_covering_ball, e_short_join_check, extract_with_ladder, phi_image_check, Aggregate, CoveringBall,
    CoveringError, ScaleModel, Stability,
};
use crate::group::{abelianize, ModelKind, Verdict, DEFAULT_BUDGET};
use crate::rips::rips_graph;
use crate::space::{chain_components, Entourage, FiniteSpace, PointId, SpaceError};

pub use render::{render_extraction, render_report, Format, RenderError, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("ladder is empty")]
    EmptyLadder,
    #[error("ladder not nested: rung {0} does not refine rung {1}")]
    NotNested(usize, usize),
    #[error("e-short triple {0:?} is out of range or not ordered")]
    BadTriple([usize; 3]),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Covering(#[from] CoveringError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub budget: u64,
    /// Fixed ball radius; when `None` it is twice the diameter of the
    /// finest rung's basepoint component, capped at `radius_cap`.
    pub radius: Option<usize>,
    pub radius_cap: usize,
    /// E-short checks as ladder positions `(E, F, D)`, each at or below the previous.
    pub e_short: Vec<[usize; 3]>,
    /// Worker threads; `None` lets the pool decide.
    pub jobs: Option<usize>,
    /// Record wall time in the report (makes output run-dependent).
    pub timing: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            radius: None,
            radius_cap: 32,
            e_short: Vec::new(),
            jobs: None,
            timing: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallSummary {
    pub radius: usize,
    pub vertices: usize,
    pub edges: usize,
    pub unknown_merges: usize,
    pub incomplete: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScaleRecord {
    pub position: usize,
    pub scale: String,
    pub edges: usize,
    pub triangles: usize,
    pub chain_connected: bool,
    pub component_size: usize,
    pub generators: usize,
    pub relators: usize,
    pub simplified_generators: usize,
    pub simplified_relators: usize,
    pub simplification_exhausted: bool,
    pub free_rank: usize,
    pub torsion: Vec<String>,
    pub invariants: String,
    pub model: ModelKind,
    pub trivial: Verdict,
    pub ball: BallSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessVertex {
    pub vertex: usize,
    pub endpoint: PointId,
    pub chain: Vec<PointId>,
}

/// Image check of the bonding map from rung `position + 1` into rung `position`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BondingRecord {
    pub position: usize,
    pub outer: String,
    pub inner: String,
    pub result: Aggregate,
    pub checked: usize,
    pub unknown: usize,
    pub witnesses: Vec<WitnessVertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EShortRecord {
    pub positions: [usize; 3],
    pub outer: String,
    pub middle: String,
    pub inner: String,
    pub result: Aggregate,
    pub checked: usize,
    pub unknown: usize,
    pub failures: Vec<(PointId, PointId)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub x: PointId,
    pub y: PointId,
    pub from: Vec<PointId>,
    pub to: Vec<PointId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtractionRecord {
    pub position: usize,
    pub outer: String,
    pub stability: Stability,
    pub component_size: usize,
    pub pairs: Vec<(PointId, PointId)>,
    pub witnesses: Vec<PairWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunMetadata {
    pub points: usize,
    pub basepoint: PointId,
    pub budget: u64,
    pub radius: usize,
    pub radius_cap: usize,
    /// Wall time in milliseconds, only when timing was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScaleReport {
    pub scales: Vec<ScaleRecord>,
    pub bonding: Vec<BondingRecord>,
    pub e_short: Vec<EShortRecord>,
    pub extractions: Vec<ExtractionRecord>,
    pub critical: Vec<usize>,
    pub metadata: RunMetadata,
}

impl ScaleReport {
    /// Verdicts in the report that ended undecided.
    pub fn unknown_count(&self) -> usize {
        self.scales.iter().filter(|s| s.trivial.is_unknown()).count()
            + self.bonding.iter().map(|b| b.unknown).sum::<usize>()
            + self.e_short.iter().map(|e| e.unknown).sum::<usize>()
            + self.scales.iter().map(|s| s.ball.unknown_merges).sum::<usize>()
    }

    /// Number of verdicts in the report, decided or not.
    pub fn verdict_count(&self) -> usize {
        self.scales.len()
            + self.bonding.iter().map(|b| b.checked).sum::<usize>()
            + self.e_short.iter().map(|e| e.checked).sum::<usize>()
    }
}

/// Checks that the ladder is nonempty and each rung refines the previous
/// one; thresholds, where present, must strictly decrease.
pub fn validate_ladder(ladder: &[Entourage]) -> Result<(), AnalysisError> {
    if ladder.is_empty() {
        return Err(AnalysisError::EmptyLadder);
    }
    for i in 1..ladder.len() {
        let (coarse, fine) = (&ladder[i - 1], &ladder[i]);
        let decreasing = match (coarse.threshold(), fine.threshold()) {
            (Some(a), Some(b)) => b.value() < a.value(),
            _ => true,
        };
        if !decreasing || !fine.is_refinement_of(coarse) {
            return Err(AnalysisError::NotNested(i, i - 1));
        }
    }
    Ok(())
}

/// Default radius: twice the graph diameter of the basepoint component at the
/// finest rung, capped.
pub fn default_radius(space: &FiniteSpace, finest: &Entourage, cap: usize) -> Result<usize, AnalysisError> {
    let graph = rips_graph(space, finest)?;
    Ok((2 * graph.component_diameter(space.basepoint())).min(cap))
}

struct Rung {
    ball: CoveringBall,
    record: ScaleRecord,
}

fn analyze_rung(
    space: &FiniteSpace,
    relation: &Entourage,
    position: usize,
    radius: usize,
    budget: u64,
) -> Result<Rung, AnalysisError> {
    let model = Arc::new(ScaleModel::build(space, relation, budget)?);
    let ball = build_covering_ball(Arc::clone(&model), radius)?;
    let solver = model.solver();
    let simple = solver.simplification().presentation();
    let invariants = abelianize(model.presentation());
    let components = chain_components(space, relation)?;
    let record = ScaleRecord {
        position,
        scale: relation.descriptor(),
        edges: model.graph().edges().len(),
        triangles: model.graph().triangle_count(),
        chain_connected: components.len() == 1,
        component_size: components.block_containing(space.basepoint()).len(),
        generators: model.presentation().generator_count(),
        relators: model.presentation().relators().len(),
        simplified_generators: simple.generator_count(),
        simplified_relators: simple.relators().len(),
        simplification_exhausted: solver.simplification().exhausted(),
        free_rank: invariants.free_rank,
        torsion: invariants.torsion.iter().map(ToString::to_string).collect(),
        invariants: invariants.to_string(),
        model: solver.model(),
        trivial: solver.is_trivial_group(),
        ball: BallSummary {
            radius,
            vertices: ball.len(),
            edges: ball.edges().len(),
            unknown_merges: ball.unknown_merges(),
            incomplete: ball.incomplete_count(),
        },
    };
    Ok(Rung { ball, record })
}

/// Runs the whole pipeline over the ladder.
pub fn analyze_ladder(space: &FiniteSpace, ladder: &[Entourage], config: &AnalysisConfig) -> Result<ScaleReport, AnalysisError> {
    validate_ladder(ladder)?;
    let k = ladder.len();
    for t in &config.e_short {
        if !(t[0] <= t[1] && t[1] <= t[2] && t[2] < k) {
            return Err(AnalysisError::BadTriple(*t));
        }
    }
    let started = Instant::now();
    let radius = match config.radius {
        Some(r) => r,
        None => default_radius(space, ladder.last().unwrap(), config.radius_cap)?,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = config.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build().map_err(|e| AnalysisError::Pool(e.to_string()))?;

    pool.install(|| {
        let rungs: Vec<Rung> = ladder
            .par_iter()
            .enumerate()
            .map(|(i, e)| analyze_rung(space, e, i, radius, config.budget))
            .collect::<Result<_, _>>()?;

        let bonding: Vec<BondingRecord> = (0..k.saturating_sub(1))
            .into_par_iter()
            .map(|i| {
                let ball = &rungs[i].ball;
                let check = phi_image_check(ball, &ladder[i + 1])?;
                Ok(BondingRecord {
                    position: i,
                    outer: check.outer.clone(),
                    inner: check.inner.clone(),
                    result: check.aggregate,
                    checked: check.vertices.len(),
                    unknown: check.unknown_count(),
                    witnesses: check
                        .witnesses
                        .iter()
                        .map(|&v| {
                            let vertex = ball.vertex(v);
                            WitnessVertex {
                                vertex: v,
                                endpoint: vertex.endpoint,
                                chain: vertex.chain.clone(),
                            }
                        })
                        .collect(),
                })
            })
            .collect::<Result<_, AnalysisError>>()?;

        let extractions: Vec<ExtractionRecord> = (0..k)
            .into_par_iter()
            .map(|i| {
                extraction_record(&rungs[i].ball, i, &ladder[i..], &ladder[i])
            })
            .collect::<Result<_, AnalysisError>>()?;

        let e_short: Vec<EShortRecord> = config
            .e_short
            .par_iter()
            .map(|&[a, b, c]| {
                let check = e_short_join_check(space, &ladder[a], &ladder[b], &ladder[c], config.budget)?;
                Ok(EShortRecord {
                    positions: [a, b, c],
                    outer: check.outer.clone(),
                    middle: check.middle.clone(),
                    inner: check.inner.clone(),
                    result: check.aggregate,
                    checked: check.pairs.len(),
                    unknown: check.pairs.iter().filter(|p| p.verdict.is_unknown()).count(),
                    failures: check.failures(),
                })
            })
            .collect::<Result<_, AnalysisError>>()?;

        let scales: Vec<ScaleRecord> = rungs.into_iter().map(|r| r.record).collect();
        let mut report = ScaleReport {
            scales,
            bonding,
            e_short,
            extractions,
            critical: Vec::new(),
            metadata: RunMetadata {
                points: space.len(),
                basepoint: space.basepoint(),
                budget: config.budget,
                radius,
                radius_cap: config.radius_cap,
                wall_ms: config.timing.then(|| started.elapsed().as_millis()),
            },
        };
        report.critical = critical_scales(&report);
        Ok(report)
    })
}

/// Extraction over `ball` with stabilization along `inner`, as a report record.
pub fn extraction_record(
    ball: &CoveringBall,
    position: usize,
    inner: &[Entourage],
    f: &Entourage,
) -> Result<ExtractionRecord, AnalysisError> {
    let result = extract_with_ladder(ball, inner, f)?;
    let pairs: Vec<(PointId, PointId)> = result.extraction.witnesses.keys().copied().collect();
    let witnesses = result
        .extraction
        .witnesses
        .iter()
        .map(|(&(x, y), &(a, b))| PairWitness {
            x,
            y,
            from: ball.vertex(a).chain.clone(),
            to: ball.vertex(b).chain.clone(),
        })
        .collect();
    Ok(ExtractionRecord {
        position,
        outer: ball.relation().descriptor(),
        component_size: result.component.len(),
        stability: result.stability,
        pairs,
        witnesses,
    })
}

/// Ladder positions `i` where rungs `i` and `i + 1` differ in abelian
/// invariants, or where the bonding map into rung `i` is not certified onto.
pub fn critical_scales(report: &ScaleReport) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..report.scales.len().saturating_sub(1) {
        let (a, b) = (&report.scales[i], &report.scales[i + 1]);
        let invariants_change = a.free_rank != b.free_rank || a.torsion != b.torsion;
        let not_onto = report
            .bonding
            .iter()
            .any(|r| r.position == i && r.result != Aggregate::Holds);
        if invariants_change || not_onto {
            out.push(i);
        }
    }
    out
}
