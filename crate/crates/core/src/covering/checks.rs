//! Image checks for bonding maps and the E-short joinability test.

use std::collections::HashMap;

use serde::Serialize;

use crate::group::{Certificate, Verdict, Word};
use crate::rips::{rips_graph, spanning_tree, RipsGraph, SpanningTree};
use crate::space::{chain_components, Entourage, FiniteSpace, PointId};

use super::ball::CoveringBall;
use super::model::ScaleModel;
use super::CoveringError;

/// Combined result of many per-item verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregate {
    /// Every item was proven.
    Holds,
    /// At least one item was refuted.
    Fails,
    /// Nothing refuted, but something undecided.
    Unknown,
}

impl Aggregate {
    fn of<'a>(verdicts: impl IntoIterator<Item = &'a Verdict>) -> Self {
        let mut unknown = false;
        for v in verdicts {
            match v {
                Verdict::Refuted { .. } => return Aggregate::Fails,
                Verdict::Unknown { .. } => unknown = true,
                Verdict::Proven { .. } => {}
            }
        }
        if unknown {
            Aggregate::Unknown
        } else {
            Aggregate::Holds
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexVerdict {
    pub vertex: usize,
    pub endpoint: PointId,
    pub verdict: Verdict,
}

/// Which ball vertices are classes of `F`-chains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageCheck {
    pub outer: String,
    pub inner: String,
    pub vertices: Vec<VertexVerdict>,
    pub aggregate: Aggregate,
    /// Vertices certified to lie outside the image.
    pub witnesses: Vec<usize>,
}

impl ImageCheck {
    pub fn is_surjective(&self) -> bool {
        self.aggregate == Aggregate::Holds
    }

    pub fn unknown_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.verdict.is_unknown()).count()
    }
}

/// Words of the fundamental loops of `graph` at the tree's root, read in the
/// model's encoding.
fn loop_words(model: &ScaleModel, graph: &RipsGraph, tree: &SpanningTree) -> Result<Vec<Word>, CoveringError> {
    let root = tree.root();
    let mut out = Vec::new();
    for (a, b) in tree.non_tree_edges(graph) {
        let mut chain = tree.path(root, a).expect("component vertex");
        chain.extend(tree.path(b, root).expect("component vertex"));
        let w = model.word(&chain)?;
        if !w.is_empty() {
            out.push(w);
        }
    }
    Ok(out)
}

/// Decides for every ball vertex whether some `F`-chain from the basepoint
/// represents its class.
///
/// The `F`-chains ending at `x` have words `H·t`, where `t` is the word of
/// one `F`-path to `x` and `H` is generated by the `F`-loops at the root.
pub fn phi_image_check(ball: &CoveringBall, f: &Entourage) -> Result<ImageCheck, CoveringError> {
    let model = ball.model();
    if !f.is_refinement_of(model.relation()) {
        return Err(CoveringError::NotRefinement {
            inner: f.descriptor(),
            outer: model.relation().descriptor(),
        });
    }
    let graph = rips_graph(model.space(), f)?;
    let tree = spanning_tree(&graph, model.root())?;
    let loops = loop_words(model, &graph, &tree)?;
    let mut path_words: HashMap<PointId, Word> = HashMap::new();
    let mut vertices = Vec::new();
    for v in ball.vertices() {
        let x = v.endpoint;
        let verdict = if !tree.contains(x) {
            Verdict::refuted(Certificate::Unreachable)
        } else {
            let t = match path_words.get(&x) {
                Some(t) => t.clone(),
                None => {
                    let t = model.word(&tree.path(model.root(), x).expect("component vertex"))?;
                    path_words.insert(x, t.clone());
                    t
                }
            };
            model.solver().in_subgroup(&loops, &v.word.mul(&t.inverse()))?
        };
        vertices.push(VertexVerdict {
            vertex: v.id,
            endpoint: x,
            verdict,
        });
    }
    let aggregate = Aggregate::of(vertices.iter().map(|v| &v.verdict));
    let witnesses = vertices.iter().filter(|v| v.verdict.is_refuted()).map(|v| v.vertex).collect();
    Ok(ImageCheck {
        outer: model.relation().descriptor(),
        inner: f.descriptor(),
        vertices,
        aggregate,
        witnesses,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub x: PointId,
    pub y: PointId,
    pub verdict: Verdict,
}

/// Per-pair E-short verdicts for all off-diagonal `F`-pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EShortCheck {
    pub outer: String,
    pub middle: String,
    pub inner: String,
    pub pairs: Vec<PairVerdict>,
    pub aggregate: Aggregate,
}

impl EShortCheck {
    pub fn verdict(&self, x: PointId, y: PointId) -> Option<&Verdict> {
        let (x, y) = (x.min(y), x.max(y));
        self.pairs.iter().find(|p| p.x == x && p.y == y).map(|p| &p.verdict)
    }

    pub fn failures(&self) -> Vec<(PointId, PointId)> {
        self.pairs.iter().filter(|p| p.verdict.is_refuted()).map(|p| (p.x, p.y)).collect()
    }
}

/// For each `F`-pair `(x, y)`, is there a `D`-chain from `x` to `y` whose
/// `E`-class equals that of the two-point chain `{x, y}`?
pub fn e_short_join_check(
    space: &FiniteSpace,
    e: &Entourage,
    f: &Entourage,
    d: &Entourage,
    budget: u64,
) -> Result<EShortCheck, CoveringError> {
    if !f.is_refinement_of(e) || !d.is_refinement_of(f) {
        return Err(CoveringError::NotNested);
    }
    let components = chain_components(space, e)?;
    let d_graph = rips_graph(space, d)?;
    let mut models: HashMap<usize, ScaleModel> = HashMap::new();
    let mut trees: HashMap<PointId, (SpanningTree, Vec<Word>)> = HashMap::new();
    let mut pairs = Vec::new();
    for (x, y) in f.pairs() {
        let block = components.block_of(x);
        if !models.contains_key(&block) {
            let members = components.block_containing(x);
            let root = if members.contains(&space.basepoint()) {
                space.basepoint()
            } else {
                members[0]
            };
            models.insert(block, ScaleModel::build_rooted(space, e, root, budget)?);
        }
        let model = &models[&block];
        if !trees.contains_key(&x) {
            let tree = spanning_tree(&d_graph, x)?;
            let loops = loop_words(model, &d_graph, &tree)?;
            trees.insert(x, (tree, loops));
        }
        let (tree, loops) = &trees[&x];
        let verdict = if !tree.contains(y) {
            Verdict::refuted(Certificate::Unreachable)
        } else {
            let t = model.word(&tree.path(x, y).expect("component vertex"))?;
            let s = model.word(&[x, y])?;
            model.solver().in_subgroup(loops, &s.mul(&t.inverse()))?
        };
        pairs.push(PairVerdict { x, y, verdict });
    }
    let aggregate = Aggregate::of(pairs.iter().map(|p| &p.verdict));
    Ok(EShortCheck {
        outer: e.descriptor(),
        middle: f.descriptor(),
        inner: d.descriptor(),
        pairs,
        aggregate,
    })
}
