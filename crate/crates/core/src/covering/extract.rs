//! F* relations on a ball, basepoint components and relation extraction.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::space::{Entourage, PointId};

use super::ball::{CoveringBall, Lookup};
use super::CoveringError;

pub type VertexSet = BTreeSet<usize>;

fn check_refines(ball: &CoveringBall, inner: &Entourage) -> Result<(), CoveringError> {
    if !inner.is_refinement_of(ball.relation()) {
        return Err(CoveringError::NotRefinement {
            inner: inner.descriptor(),
            outer: ball.relation().descriptor(),
        });
    }
    Ok(())
}

/// Ordered pairs `(v, w)` of ball vertices where `w` is `v` with its last
/// point moved along an `F`-pair. Includes the loops `(v, v)`.
pub fn estar_pairs(ball: &CoveringBall, f: &Entourage) -> Result<BTreeSet<(usize, usize)>, CoveringError> {
    check_refines(ball, f)?;
    let mut out = BTreeSet::new();
    for v in ball.vertices() {
        let x = v.endpoint;
        out.insert((v.id, v.id));
        for &y in f.neighbors(x) {
            let word = ball.extend_word(v.id, x, y);
            if let Lookup::Found(w, _) = ball.lookup(y, &word) {
                out.insert((v.id, w));
            }
        }
    }
    Ok(out)
}

/// F*-reachable vertices from the basepoint class.
pub fn basepoint_component(ball: &CoveringBall, f: &Entourage) -> Result<VertexSet, CoveringError> {
    let pairs = estar_pairs(ball, f)?;
    Ok(component_from(&pairs, ball.base_vertex()))
}

fn component_from(pairs: &BTreeSet<(usize, usize)>, start: usize) -> VertexSet {
    let mut adjacency: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in pairs {
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    }
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in adjacency.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Whether no F*-pair crosses the boundary of `set`.
pub fn is_saturated(pairs: &BTreeSet<(usize, usize)>, set: &VertexSet) -> bool {
    pairs.iter().all(|(a, b)| set.contains(a) == set.contains(b))
}

/// Basepoint components along an inner ladder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stability {
    /// Descriptor of each rung.
    pub rungs: Vec<String>,
    /// Size of the basepoint component at each rung.
    pub sizes: Vec<usize>,
    /// First rung from which all components agree.
    pub stable_from: usize,
    /// Number of rungs agreeing at the end of the ladder.
    pub agreeing: usize,
    /// Set when fewer than two rungs agree.
    pub low_confidence: bool,
    #[serde(skip)]
    pub components: Vec<VertexSet>,
}

impl Stability {
    /// The stabilized component: the component at the last rung.
    pub fn candidate(&self) -> &VertexSet {
        self.components.last().expect("nonempty ladder")
    }
}

/// Components of the basepoint class for `F_1 ⊇ F_2 ⊇ ... ⊇ F_k`.
pub fn stabilized_component(ball: &CoveringBall, ladder: &[Entourage]) -> Result<Stability, CoveringError> {
    if ladder.is_empty() {
        return Err(CoveringError::EmptyLadder);
    }
    for w in ladder.windows(2) {
        if !w[1].is_refinement_of(&w[0]) {
            return Err(CoveringError::NotNested);
        }
    }
    let components = ladder
        .iter()
        .map(|f| basepoint_component(ball, f))
        .collect::<Result<Vec<_>, _>>()?;
    let k = components.len();
    let mut stable_from = k - 1;
    while stable_from > 0 && components[stable_from - 1] == components[k - 1] {
        stable_from -= 1;
    }
    let agreeing = k - stable_from;
    Ok(Stability {
        rungs: ladder.iter().map(Entourage::descriptor).collect(),
        sizes: components.iter().map(BTreeSet::len).collect(),
        stable_from,
        agreeing,
        low_confidence: agreeing < 2,
        components,
    })
}

/// A relation on the space extracted from a saturated set of classes.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub relation: Entourage,
    /// For each extracted pair `x < y`, the vertex pair projecting to it.
    pub witnesses: BTreeMap<(PointId, PointId), (usize, usize)>,
}

/// Endpoint projection of the F*-pairs inside `set`, plus the diagonal.
///
/// `set` must be W*-saturated for the relation `w` that cut it out.
pub fn extract_covering_relation(
    ball: &CoveringBall,
    set: &VertexSet,
    f: &Entourage,
    w: &Entourage,
) -> Result<Extraction, CoveringError> {
    let boundary = estar_pairs(ball, w)?;
    if let Some(&(a, b)) = boundary.iter().find(|(a, b)| set.contains(a) != set.contains(b)) {
        let outside = if set.contains(&a) { b } else { a };
        return Err(CoveringError::NotSaturated { vertex: outside });
    }
    let pairs = estar_pairs(ball, f)?;
    let mut witnesses = BTreeMap::new();
    for &(a, b) in &pairs {
        if !set.contains(&a) || !set.contains(&b) {
            continue;
        }
        let (x, y) = (ball.vertex(a).endpoint, ball.vertex(b).endpoint);
        if x < y {
            witnesses.entry((x, y)).or_insert((a, b));
        }
    }
    let label = format!("extracted from {} over {}", ball.relation().descriptor(), f.descriptor());
    let relation = Entourage::from_pairs(ball.model().space(), witnesses.keys().copied(), &label)?;
    Ok(Extraction { relation, witnesses })
}

/// Stabilized component, extraction and stability report in one go.
#[derive(Clone, Debug)]
pub struct ExtractionResult {
    pub component: VertexSet,
    pub extraction: Extraction,
    pub stability: Stability,
}

pub fn extract_with_ladder(
    ball: &CoveringBall,
    inner: &[Entourage],
    f: &Entourage,
) -> Result<ExtractionResult, CoveringError> {
    let stability = stabilized_component(ball, inner)?;
    let component = stability.candidate().clone();
    let extraction = extract_covering_relation(ball, &component, f, inner.last().unwrap())?;
    Ok(ExtractionResult {
        component,
        extraction,
        stability,
    })
}
