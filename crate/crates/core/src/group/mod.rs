//! Finitely presented groups: words, presentations, simplification,
//! abelianization and budgeted decision procedures.

pub mod abelian;
pub mod coset;
pub mod presentation;
pub mod quotient;
pub mod rewrite;
pub mod solver;
pub mod tietze;
pub mod word;

use serde::Serialize;
use thiserror::Error;

pub use abelian::{abelianize, AbelianInvariants, AbelianMap};
pub use presentation::Presentation;
pub use solver::{equal_in_group, is_trivial_group, GroupSolver, ModelKind};
pub use tietze::{simplify, Simplification};
pub use word::{cyclic_canonical, cyclic_reduce, free_reduce, Letter, Word};

/// Default step budget for every budgeted procedure.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("unknown generator g{0}")]
    UnknownGenerator(u32),
}

/// Evidence attached to a decided [`Verdict`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// The two words agree after free reduction.
    FreeReduction,
    /// Tietze moves reduced the presentation to no generators.
    Tietze { steps: u64 },
    /// No relators survive simplification, so reduced words are normal forms.
    FreeNormalForm { rank: usize },
    /// A complete coset table of the given index decided the question.
    CosetTable { index: usize },
    /// Dehn-style relator rewriting reached the identity.
    Rewriting { steps: u64 },
    /// The abelianized classes differ; `invariants` describes the abelianization.
    Abelianization { invariants: String },
    /// A homomorphism to a symmetric group of this degree separates the words.
    FiniteQuotient { degree: usize },
    /// The folded graph of a subgroup of a free group decides membership.
    SubgroupGraph { vertices: usize },
    /// The subgroup was enumerated completely and does not contain the element.
    SubgroupEnumerated { size: usize },
    /// An explicit chain realizes the claim.
    Chain { points: Vec<usize> },
    /// The target endpoint cannot be reached at all.
    Unreachable,
}

/// Three-valued answer of a budgeted decision procedure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Proven { certificate: Certificate },
    Refuted { certificate: Certificate },
    Unknown { budget: u64 },
}

impl Verdict {
    pub fn proven(certificate: Certificate) -> Self {
        Verdict::Proven { certificate }
    }

    pub fn refuted(certificate: Certificate) -> Self {
        Verdict::Refuted { certificate }
    }

    pub fn is_proven(&self) -> bool {
        matches!(self, Verdict::Proven { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Proven { certificate } | Verdict::Refuted { certificate } => Some(certificate),
            Verdict::Unknown { .. } => None,
        }
    }

    /// `Some(true)`, `Some(false)` or `None` for unknown.
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Verdict::Proven { .. } => Some(true),
            Verdict::Refuted { .. } => Some(false),
            Verdict::Unknown { .. } => None,
        }
    }

    /// Short label used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Proven { .. } => "yes",
            Verdict::Refuted { .. } => "no",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}
