//! Truncated models of the space of chain classes at one scale, and the
//! computations built on them.

mod ball;
mod checks;
mod extract;
mod model;

use thiserror::Error;

use crate::group::GroupError;
use crate::homotopy::HomotopyError;
use crate::space::SpaceError;

pub use ball::{build_covering_ball, CoveringBall, CoveringVertex, Lookup, MergeEvent};
pub use checks::{e_short_join_check, phi_image_check, Aggregate, EShortCheck, ImageCheck, PairVerdict, VertexVerdict};
pub use extract::{
    basepoint_component, estar_pairs, extract_covering_relation, extract_with_ladder, is_saturated,
    stabilized_component, Extraction, ExtractionResult, Stability, VertexSet,
};
pub use model::ScaleModel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoveringError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("relation {inner} does not refine {outer}")]
    NotRefinement { inner: String, outer: String },
    #[error("ladder not nested")]
    NotNested,
    #[error("ladder is empty")]
    EmptyLadder,
    #[error("set is not saturated: vertex {vertex} is related to it but outside")]
    NotSaturated { vertex: usize },
}
