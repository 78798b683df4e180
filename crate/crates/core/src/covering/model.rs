use crate::group::{GroupSolver, Presentation, Word};
use crate::homotopy::EdgeEncoding;
use crate::rips::{rips_graph, spanning_tree, RipsGraph};
use crate::space::{Entourage, FiniteSpace, PointId};

use super::CoveringError;

/// Everything computed once per scale: Rips graph, tree encoding,
/// presentation and a prepared group solver.
#[derive(Debug)]
pub struct ScaleModel {
    space: FiniteSpace,
    relation: Entourage,
    graph: RipsGraph,
    encoding: EdgeEncoding,
    presentation: Presentation,
    solver: GroupSolver,
}

impl ScaleModel {
    /// Model rooted at the space's basepoint.
    pub fn build(space: &FiniteSpace, relation: &Entourage, budget: u64) -> Result<Self, CoveringError> {
        Self::build_rooted(space, relation, space.basepoint(), budget)
    }

    pub fn build_rooted(
        space: &FiniteSpace,
        relation: &Entourage,
        root: PointId,
        budget: u64,
    ) -> Result<Self, CoveringError> {
        let graph = rips_graph(space, relation)?;
        let tree = spanning_tree(&graph, root)?;
        let encoding = EdgeEncoding::new(&graph, &tree);
        let presentation = encoding.presentation(&graph);
        let solver = GroupSolver::new(&presentation, budget);
        Ok(Self {
            space: space.clone(),
            relation: relation.clone(),
            graph,
            encoding,
            presentation,
            solver,
        })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn relation(&self) -> &Entourage {
        &self.relation
    }

    pub fn graph(&self) -> &RipsGraph {
        &self.graph
    }

    pub fn encoding(&self) -> &EdgeEncoding {
        &self.encoding
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn solver(&self) -> &GroupSolver {
        &self.solver
    }

    pub fn root(&self) -> PointId {
        self.encoding.root()
    }

    /// Word of a chain in the root component.
    pub fn word(&self, points: &[PointId]) -> Result<Word, CoveringError> {
        Ok(self.encoding.chain_word(points)?)
    }
}
