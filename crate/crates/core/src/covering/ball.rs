//! Truncated covering balls: classes of based chains up to a step radius.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::group::{Certificate, Verdict, Word};
use crate::space::{Entourage, PointId};

use super::model::ScaleModel;
use super::CoveringError;

/// One class of based chains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringVertex {
    pub id: usize,
    pub endpoint: PointId,
    /// Word of `chain` over the presentation's generators.
    pub word: Word,
    /// Normal form of the class when the group model is exact.
    pub canonical: Option<Word>,
    /// A shortest representative chain found by the search.
    pub chain: Vec<PointId>,
    pub depth: usize,
    /// `false` if some comparison involving this vertex was undecided.
    pub complete: bool,
}

/// A certified identification made while building the ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MergeEvent {
    /// The chain that turned out to represent an existing class.
    pub chain: Vec<PointId>,
    pub into: usize,
    pub certificate: Certificate,
}

/// Outcome of looking up a class among the ball's vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lookup {
    Found(usize, Certificate),
    /// Not present; `undecided` lists vertices whose comparison was unknown.
    Absent { undecided: Vec<usize> },
}

#[derive(Clone, Debug)]
pub struct CoveringBall {
    model: Arc<ScaleModel>,
    radius: usize,
    vertices: Vec<CoveringVertex>,
    edges: BTreeSet<(usize, usize)>,
    merges: Vec<MergeEvent>,
    unknown_merges: usize,
    by_class: HashMap<(PointId, Word), usize>,
    by_endpoint: Vec<Vec<usize>>,
}

/// Breadth-first construction to `radius` steps from the basepoint class.
pub fn build_covering_ball(model: Arc<ScaleModel>, radius: usize) -> Result<CoveringBall, CoveringError> {
    let root = model.root();
    let n = model.space().len();
    let mut ball = CoveringBall {
        radius,
        vertices: Vec::new(),
        edges: BTreeSet::new(),
        merges: Vec::new(),
        unknown_merges: 0,
        by_class: HashMap::new(),
        by_endpoint: vec![Vec::new(); n],
        model,
    };
    ball.insert(vec![root], Word::empty(), 0);

    let mut frontier = vec![0usize];
    for depth in 0..=radius {
        let mut next = Vec::new();
        for &v in &frontier {
            let x = ball.vertices[v].endpoint;
            let neighbors = ball.model.graph().neighbors(x).to_vec();
            for y in neighbors {
                let word = ball.extend_word(v, x, y);
                let mut chain = ball.vertices[v].chain.clone();
                chain.push(y);
                match ball.lookup(y, &word) {
                    Lookup::Found(u, certificate) => {
                        ball.edges.insert((v.min(u), v.max(u)));
                        if depth < radius {
                            ball.merges.push(MergeEvent {
                                chain,
                                into: u,
                                certificate,
                            });
                        }
                    }
                    Lookup::Absent { undecided } => {
                        if depth == radius {
                            continue;
                        }
                        let complete = undecided.is_empty();
                        ball.unknown_merges += undecided.len();
                        for &u in &undecided {
                            ball.vertices[u].complete = false;
                        }
                        let u = ball.insert(chain, word, depth + 1);
                        ball.vertices[u].complete = complete;
                        ball.edges.insert((v, u));
                        next.push(u);
                    }
                }
            }
        }
        frontier = next;
    }
    ball.reorder();
    Ok(ball)
}

impl CoveringBall {
    pub fn model(&self) -> &ScaleModel {
        &self.model
    }

    pub fn shared_model(&self) -> Arc<ScaleModel> {
        Arc::clone(&self.model)
    }

    pub fn relation(&self) -> &Entourage {
        self.model.relation()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn vertices(&self) -> &[CoveringVertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &CoveringVertex {
        &self.vertices[id]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Off-diagonal E*-steps `(v, w)`, `v < w`.
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn merges(&self) -> &[MergeEvent] {
        &self.merges
    }

    /// Number of comparisons that ended undecided.
    pub fn unknown_merges(&self) -> usize {
        self.unknown_merges
    }

    pub fn incomplete_count(&self) -> usize {
        self.vertices.iter().filter(|v| !v.complete).count()
    }

    /// The basepoint class (the empty chain's class) is always vertex 0.
    pub fn base_vertex(&self) -> usize {
        0
    }

    /// Vertices whose class is represented by the given chain.
    pub fn vertex_of_chain(&self, points: &[PointId]) -> Result<Option<usize>, CoveringError> {
        if points.first() != Some(&self.model.root()) {
            return Ok(None);
        }
        let word = self.model.word(points)?;
        Ok(match self.lookup(*points.last().unwrap(), &word) {
            Lookup::Found(v, _) => Some(v),
            Lookup::Absent { .. } => None,
        })
    }

    pub fn vertices_at(&self, endpoint: PointId) -> &[usize] {
        &self.by_endpoint[endpoint]
    }

    /// Word of `v`'s chain extended by one step to `y`.
    pub(crate) fn extend_word(&self, v: usize, x: PointId, y: PointId) -> Word {
        let mut word = self.vertices[v].word.clone();
        if let Some(l) = self.model.encoding().step_letter(x, y) {
            word.push(l);
        }
        word
    }

    /// Finds the vertex with this endpoint whose class equals `word`.
    pub fn lookup(&self, endpoint: PointId, word: &Word) -> Lookup {
        let solver = self.model.solver();
        if let Some(key) = solver.canonical(word) {
            return match self.by_class.get(&(endpoint, key)) {
                Some(&u) => Lookup::Found(u, exact_certificate(self.model.as_ref(), word, &self.vertices[u].word)),
                None => Lookup::Absent { undecided: Vec::new() },
            };
        }
        let mut undecided = Vec::new();
        for &u in &self.by_endpoint[endpoint] {
            match solver.equal(&self.vertices[u].word, word) {
                Ok(Verdict::Proven { certificate }) => return Lookup::Found(u, certificate),
                Ok(Verdict::Refuted { .. }) => {}
                Ok(Verdict::Unknown { .. }) | Err(_) => undecided.push(u),
            }
        }
        Lookup::Absent { undecided }
    }

    fn insert(&mut self, chain: Vec<PointId>, word: Word, depth: usize) -> usize {
        let id = self.vertices.len();
        let endpoint = *chain.last().unwrap();
        let canonical = self.model.solver().canonical(&word);
        if let Some(key) = &canonical {
            self.by_class.insert((endpoint, key.clone()), id);
        }
        self.by_endpoint[endpoint].push(id);
        self.vertices.push(CoveringVertex {
            id,
            endpoint,
            word,
            canonical,
            chain,
            depth,
            complete: true,
        });
        id
    }

    /// Sorts vertices by (endpoint, class word) with the basepoint class
    /// first, and renumbers everything.
    fn reorder(&mut self) {
        let key = |v: &CoveringVertex| {
            (
                v.id != 0,
                v.endpoint,
                v.canonical.clone().unwrap_or_else(|| v.word.clone()),
                v.id,
            )
        };
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by_key(|&i| key(&self.vertices[i]));
        let mut new_id = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_id[old] = new;
        }
        let mut vertices: Vec<CoveringVertex> = order.iter().map(|&i| self.vertices[i].clone()).collect();
        for (i, v) in vertices.iter_mut().enumerate() {
            v.id = i;
        }
        self.vertices = vertices;
        self.edges = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (new_id[a], new_id[b]);
                (a.min(b), a.max(b))
            })
            .collect();
        for m in &mut self.merges {
            m.into = new_id[m.into];
        }
        for (_, v) in self.by_class.iter_mut() {
            *v = new_id[*v];
        }
        for list in &mut self.by_endpoint {
            for v in list.iter_mut() {
                *v = new_id[*v];
            }
            list.sort_unstable();
        }
    }
}

fn exact_certificate(model: &ScaleModel, a: &Word, b: &Word) -> Certificate {
    if a.free_reduce() == b.free_reduce() {
        return Certificate::FreeReduction;
    }
    match model.solver().equal(a, b) {
        Ok(Verdict::Proven { certificate }) => certificate,
        other => unreachable!("canonical forms agree but equality gave {other:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::group::DEFAULT_BUDGET;
    use crate::space::Scale;

    fn ball(eps: &str, radius: usize) -> CoveringBall {
        let hex = fixtures::hex();
        let e = Entourage::from_scale(&hex, &Scale::parse(eps).unwrap()).unwrap();
        let model = Arc::new(ScaleModel::build(&hex, &e, DEFAULT_BUDGET).unwrap());
        build_covering_ball(model, radius).unwrap()
    }

    #[test]
    fn hexagon_cycle_ball() {
        let b = ball("1.2", 3);
        assert_eq!(b.len(), 7);
        assert_eq!(b.unknown_merges(), 0);
        assert_eq!(b.incomplete_count(), 0);
        // the antipode is reached twice, with different winding
        assert_eq!(b.vertices_at(3).len(), 2);
    }

    #[test]
    fn complete_hexagon_ball() {
        let b = ball("2.1", 2);
        assert_eq!(b.len(), 6);
        let endpoints: Vec<_> = b.vertices().iter().map(|v| v.endpoint).collect();
        assert_eq!(endpoints, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn radius_zero() {
        let b = ball("1.2", 0);
        assert_eq!(b.len(), 1);
        assert_eq!(b.vertex(0).chain, vec![0]);
    }

    #[test]
    fn vertices_are_reachable_and_ordered() {
        let b = ball("1.2", 4);
        let mut seen = BTreeSet::from([0usize]);
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            for &(a, c) in b.edges() {
                let w = if a == v { c } else if c == v { a } else { continue };
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        assert_eq!(seen.len(), b.len());
        for &(a, c) in b.edges() {
            assert!(b.relation().contains(b.vertex(a).endpoint, b.vertex(c).endpoint));
        }
        for (i, v) in b.vertices().iter().enumerate() {
            assert_eq!(v.id, i);
            assert_eq!(b.vertex_of_chain(&v.chain).unwrap(), Some(i));
        }
    }
}
