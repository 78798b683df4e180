//! E-chains, elementary moves and the edge-path encoding of chains as words.

use std::collections::HashMap;

use thiserror::Error;

use crate::group::{Letter, Presentation, Word};
use crate::rips::{RipsGraph, SpanningTree};
use crate::space::{Entourage, PointId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomotopyError {
    #[error("a chain needs at least one point")]
    Empty,
    #[error("position {0} is an endpoint")]
    AtEndpoint(usize),
    #[error("position {0} is outside the chain")]
    OutOfRange(usize),
    #[error("step {0} -> {1} is not in the relation")]
    NotAChain(PointId, PointId),
    #[error("point {0} is outside the basepoint component")]
    LeavesComponent(PointId),
    #[error("unknown point {0}")]
    UnknownPoint(PointId),
    #[error("generator g{0} does not exist")]
    UnknownGenerator(u32),
}

/// A nonempty point sequence whose consecutive pairs lie in a relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EChain {
    points: Vec<PointId>,
}

impl EChain {
    /// Validates the chain against `relation`.
    pub fn new(points: Vec<PointId>, relation: &Entourage) -> Result<Self, HomotopyError> {
        check_chain(&points, relation)?;
        Ok(Self { points })
    }

    /// Wraps points already known to form a chain.
    pub(crate) fn from_trusted(points: Vec<PointId>) -> Self {
        Self { points }
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn into_points(self) -> Vec<PointId> {
        self.points
    }

    /// Number of steps.
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    pub fn start(&self) -> PointId {
        self.points[0]
    }

    pub fn end(&self) -> PointId {
        *self.points.last().unwrap()
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self { points }
    }

    /// `self` followed by `other`, sharing the junction point. `None` if
    /// `other` does not start where `self` ends.
    pub fn concat(&self, other: &EChain) -> Option<Self> {
        if self.end() != other.start() {
            return None;
        }
        let mut points = self.points.clone();
        points.extend(&other.points[1..]);
        Some(Self { points })
    }
}

fn check_chain(points: &[PointId], relation: &Entourage) -> Result<(), HomotopyError> {
    if points.is_empty() {
        return Err(HomotopyError::Empty);
    }
    if let Some(&x) = points.iter().find(|&&x| x >= relation.len()) {
        return Err(HomotopyError::UnknownPoint(x));
    }
    match points.windows(2).find(|w| !relation.contains(w[0], w[1])) {
        Some(w) => Err(HomotopyError::NotAChain(w[0], w[1])),
        None => Ok(()),
    }
}

/// Whether consecutive points are related. Unknown ids make it false.
pub fn is_echain(points: &[PointId], relation: &Entourage) -> bool {
    check_chain(points, relation).is_ok()
}

/// One elementary move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    /// Insert the point so that it ends up at the given position.
    Insert(PointId),
    /// Remove the point at the given position.
    Delete,
}

/// Applies a move at `position`.
///
/// Interior positions are always eligible. At the ends only a copy of the
/// endpoint may be added or removed, which leaves the endpoints unchanged;
/// this is what lets `{x}` and `{x, x}` be homotopic.
pub fn elementary_move(
    chain: &EChain,
    relation: &Entourage,
    position: usize,
    action: Move,
) -> Result<EChain, HomotopyError> {
    let p = &chain.points;
    let n = p.len();
    let mut out = p.clone();
    match action {
        Move::Insert(x) => {
            if position > n {
                return Err(HomotopyError::OutOfRange(position));
            }
            let at_end = (position == 0 && x != p[0]) || (position == n && x != p[n - 1]);
            if at_end {
                return Err(HomotopyError::AtEndpoint(position));
            }
            out.insert(position, x);
        }
        Move::Delete => {
            if position >= n {
                return Err(HomotopyError::OutOfRange(position));
            }
            let first_ok = position > 0 || (n > 1 && p[1] == p[0]);
            let last_ok = position + 1 < n || (n > 1 && p[n - 2] == p[n - 1]);
            if !first_ok || !last_ok {
                return Err(HomotopyError::AtEndpoint(position));
            }
            out.remove(position);
        }
    }
    check_chain(&out, relation)?;
    Ok(EChain { points: out })
}

/// Generators of the edge-path group: the non-tree edges `(u, v)`, `u < v`,
/// of the basepoint component, read positively from `u` to `v`.
#[derive(Clone, Debug)]
pub struct EdgeEncoding {
    tree: SpanningTree,
    edges: Vec<(PointId, PointId)>,
    index: HashMap<(PointId, PointId), u32>,
    adjacency: Vec<Vec<PointId>>,
}

impl EdgeEncoding {
    pub fn new(graph: &RipsGraph, tree: &SpanningTree) -> Self {
        let edges = tree.non_tree_edges(graph);
        let index = edges.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
        let adjacency = (0..graph.vertex_count()).map(|x| graph.neighbors(x).to_vec()).collect();
        Self {
            tree: tree.clone(),
            edges,
            index,
            adjacency,
        }
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    pub fn root(&self) -> PointId {
        self.tree.root()
    }

    pub fn generator_count(&self) -> usize {
        self.edges.len()
    }

    pub fn generator_edge(&self, gen: u32) -> Option<(PointId, PointId)> {
        self.edges.get(gen as usize).copied()
    }

    fn has_edge(&self, x: PointId, y: PointId) -> bool {
        self.adjacency.get(x).is_some_and(|a| a.binary_search(&y).is_ok())
    }

    /// Letter of the step `x → y`; `None` for tree edges and repeated points.
    pub fn step_letter(&self, x: PointId, y: PointId) -> Option<Letter> {
        if x < y {
            self.index.get(&(x, y)).map(|&g| Letter::new(g, false))
        } else {
            self.index.get(&(y, x)).map(|&g| Letter::new(g, true))
        }
    }

    /// Word of a chain inside the basepoint component, freely reduced. Tree
    /// paths carry the trivial word, so the chain's word is also the word of
    /// the loop obtained by closing it up with tree paths at both ends.
    pub fn chain_word(&self, points: &[PointId]) -> Result<Word, HomotopyError> {
        if points.is_empty() {
            return Err(HomotopyError::Empty);
        }
        if let Some(&x) = points.iter().find(|&&x| !self.tree.contains(x)) {
            return Err(HomotopyError::LeavesComponent(x));
        }
        let mut w = Word::empty();
        for s in points.windows(2) {
            let (x, y) = (s[0], s[1]);
            if x == y {
                continue;
            }
            if !self.has_edge(x, y) {
                return Err(HomotopyError::NotAChain(x, y));
            }
            if let Some(l) = self.step_letter(x, y) {
                w.push(l);
            }
        }
        Ok(w)
    }

    /// A based loop whose word is `word`: for each letter, walk the tree to
    /// the edge, cross it, and finally return along the tree.
    pub fn word_to_chain(&self, word: &Word) -> Result<Vec<PointId>, HomotopyError> {
        let root = self.root();
        let mut out = vec![root];
        for l in word.letters() {
            let (u, v) = self
                .generator_edge(l.gen())
                .ok_or(HomotopyError::UnknownGenerator(l.gen()))?;
            let (a, b) = if l.is_inverse() { (v, u) } else { (u, v) };
            let here = *out.last().unwrap();
            out.extend(&self.tree.path(here, a).expect("component vertex")[1..]);
            out.push(b);
        }
        let here = *out.last().unwrap();
        out.extend(&self.tree.path(here, root).expect("component vertex")[1..]);
        Ok(out)
    }

    /// One relator per triangle of the component: the word of its boundary.
    pub fn presentation(&self, graph: &RipsGraph) -> Presentation {
        let mut relators = Vec::new();
        for [u, v, w] in graph.triangles() {
            if !self.tree.contains(u) {
                continue;
            }
            let r = self
                .chain_word(&[u, v, w, u])
                .expect("triangle edges lie in the component");
            relators.push(r);
        }
        let labels = self.edges.iter().map(|(u, v)| format!("e{u}_{v}")).collect();
        Presentation::with_labels(labels, relators)
            .expect("relators use declared generators")
            .with_provenance(format!("scale {} root {}", graph.scale(), self.root()))
    }
}

/// Word of a chain relative to the tree's edge encoding.
pub fn chain_to_word(graph: &RipsGraph, tree: &SpanningTree, chain: &EChain) -> Result<Word, HomotopyError> {
    EdgeEncoding::new(graph, tree).chain_word(chain.points())
}

/// Edge-path presentation of the basepoint component.
pub fn presentation(graph: &RipsGraph, tree: &SpanningTree) -> Presentation {
    EdgeEncoding::new(graph, tree).presentation(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::group::{abelianize, is_trivial_group, AbelianInvariants, DEFAULT_BUDGET};
    use crate::rips::{rips_graph, spanning_tree};
    use crate::space::{FiniteSpace, Scale};
    use proptest::prelude::*;

    fn rel(space: &FiniteSpace, eps: &str) -> Entourage {
        Entourage::from_scale(space, &Scale::parse(eps).unwrap()).unwrap()
    }

    fn encoding(space: &FiniteSpace, eps: &str) -> (RipsGraph, EdgeEncoding) {
        let g = rips_graph(space, &rel(space, eps)).unwrap();
        let t = spanning_tree(&g, space.basepoint()).unwrap();
        let e = EdgeEncoding::new(&g, &t);
        (g, e)
    }

    #[test]
    fn grid_chain_membership() {
        let grid = fixtures::grid("0.25");
        let u = fixtures::u_rel(&grid);
        let at = |s: &str| grid.point_at(s).unwrap();
        assert!(is_echain(&[at("0"), at("3"), at("3.25")], &u));
        assert!(!is_echain(&[at("0"), at("1")], &u));
        assert!(is_echain(&[at("2")], &u));
    }

    #[test]
    fn moves() {
        let p5 = fixtures::p5();
        let e = rel(&p5, "1.5");
        let c = EChain::new(vec![0, 1, 2], &e).unwrap();
        assert_eq!(elementary_move(&c, &e, 1, Move::Delete).unwrap_err(), HomotopyError::NotAChain(0, 2));
        assert_eq!(elementary_move(&c, &e, 0, Move::Delete).unwrap_err(), HomotopyError::AtEndpoint(0));
        assert_eq!(elementary_move(&c, &e, 3, Move::Insert(3)).unwrap_err(), HomotopyError::AtEndpoint(3));
        assert_eq!(elementary_move(&c, &e, 2, Move::Insert(1)).unwrap().points(), &[0, 1, 1, 2]);
        let hex = fixtures::hex();
        let full = rel(&hex, "2.1");
        let d = EChain::new(vec![0, 3, 5], &full).unwrap();
        assert_eq!(elementary_move(&d, &full, 1, Move::Delete).unwrap().points(), &[0, 5]);
        let single = EChain::new(vec![4], &full).unwrap();
        let doubled = elementary_move(&single, &full, 1, Move::Insert(4)).unwrap();
        assert_eq!(doubled.points(), &[4, 4]);
        assert_eq!(elementary_move(&doubled, &full, 1, Move::Delete).unwrap(), single);
    }

    #[test]
    fn hexagon_cycle_word() {
        let hex = fixtures::hex();
        let (g, e) = encoding(&hex, "1.2");
        assert_eq!(e.generator_count(), 1);
        let cycle = e.chain_word(&[0, 1, 2, 3, 4, 5, 0]).unwrap();
        assert_eq!(cycle.len(), 1);
        assert_eq!(e.chain_word(&[0, 1, 2, 3]).unwrap(), Word::empty());
        assert_eq!(e.chain_word(&[0, 1, 2, 3, 2, 1, 0]).unwrap(), Word::empty());
        let p = e.presentation(&g);
        assert_eq!(p.generator_count(), 1);
        assert!(p.relators().is_empty());
        assert_eq!(
            abelianize(&p),
            AbelianInvariants {
                free_rank: 1,
                torsion: vec![]
            }
        );
    }

    #[test]
    fn hexagon_presentations() {
        let hex = fixtures::hex();
        let (g, e) = encoding(&hex, "1.8");
        let p = e.presentation(&g);
        assert_eq!(p.generator_count(), g.edges().len() - 5);
        assert!(is_trivial_group(&p, DEFAULT_BUDGET).is_proven());
        let (g, e) = encoding(&hex, "2.1");
        assert!(is_trivial_group(&e.presentation(&g), DEFAULT_BUDGET).is_proven());
        let (g, e) = encoding(&hex, "0.9");
        let p = e.presentation(&g);
        assert_eq!((p.generator_count(), p.relators().len()), (0, 0));
    }

    #[test]
    fn leaving_the_component_is_an_error() {
        let hex = fixtures::hex();
        let (_, e) = encoding(&hex, "0.9");
        assert_eq!(e.chain_word(&[0, 1]).unwrap_err(), HomotopyError::LeavesComponent(1));
    }

    fn arb_loop() -> impl Strategy<Value = Vec<usize>> {
        // random walks on the hexagon at scale 1.8 (neighbours at index distance 1 or 2)
        proptest::collection::vec(prop_oneof![Just(0i64), Just(1), Just(2), Just(-1), Just(-2)], 0..12).prop_map(|steps| {
            let mut out = vec![0usize];
            let mut x = 0i64;
            for s in steps {
                x = (x + s).rem_euclid(6);
                out.push(x as usize);
            }
            out
        })
    }

    proptest! {
        #[test]
        fn word_roundtrip_and_homomorphism(a in arb_loop(), b in arb_loop()) {
            let hex = fixtures::hex();
            let (_, e) = encoding(&hex, "1.8");
            let wa = e.chain_word(&a).unwrap();
            let wb = e.chain_word(&b).unwrap();
            // a ends anywhere; close it with the tree path to compose
            let mut closed = a.clone();
            closed.extend(&e.tree().path(*a.last().unwrap(), 0).unwrap()[1..]);
            let mut joined = closed.clone();
            joined.extend(&b[1..]);
            prop_assert_eq!(e.chain_word(&joined).unwrap(), wa.mul(&wb));
            let rev: Vec<usize> = closed.iter().rev().copied().collect();
            prop_assert_eq!(e.chain_word(&rev).unwrap(), wa.inverse());
            let back = e.word_to_chain(&wa).unwrap();
            prop_assert_eq!(e.chain_word(&back).unwrap(), wa);
        }
    }
}
