//! Finite spaces, entourages, balls, chain components and uniformly open sets.
//!
//! Every relation here is a finite reflexive symmetric relation over the
//! dense point ids `0..n`. Metric entourages use the strict convention
//! `d(x, y) < ε`, and difference-set entourages use open intervals, so
//! boundary behaviour is exact and reproducible.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::decimal::{format_rational, parse_decimal, DecimalError};
use crate::union_find::UnionFind;

pub type PointId = usize;
pub type IdSet = BTreeSet<PointId>;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("space has no points")]
    Empty,
    #[error("duplicate point id {0}")]
    DuplicateId(PointId),
    #[error("point ids must be dense in 0..{n}, found {id}")]
    SparseId { id: PointId, n: usize },
    #[error("basepoint {0} is not a point of the space")]
    MissingBasepoint(PointId),
    #[error("point {0} has no coordinates")]
    MissingCoordinates(PointId),
    #[error("point {id} has dimension {got}, expected {expected}")]
    DimensionMismatch { id: PointId, got: usize, expected: usize },
    #[error("distance table must be {n}x{n}")]
    TableShape { n: usize },
    #[error("distance table is asymmetric at ({0}, {1})")]
    Asymmetric(PointId, PointId),
    #[error("distance table has nonzero diagonal at {0}")]
    NonzeroDiagonal(PointId),
    #[error("distance table has a negative entry at ({0}, {1})")]
    NegativeDistance(PointId, PointId),
    #[error("scale must be positive, got {0}")]
    NonPositiveScale(String),
    #[error("space has no metric; only explicit relations are available")]
    NoMetric,
    #[error("difference intervals require 1-dimensional coordinates")]
    NotOneDimensional,
    #[error("interval list is empty")]
    EmptyIntervals,
    #[error("interval ({0}, {1}) is empty")]
    EmptyInterval(String, String),
    #[error("unknown point id {0}")]
    UnknownPoint(PointId),
    #[error("relation belongs to a different space")]
    SpaceMismatch,
    #[error("cannot saturate an empty set")]
    EmptySet,
    #[error(transparent)]
    Decimal(#[from] DecimalError),
}

/// Content fingerprint used to check that relations and spaces belong together.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SpaceId(pub u64);

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub id: PointId,
    pub coords: Option<Vec<BigRational>>,
}

impl Point {
    pub fn new(id: PointId, coords: Vec<BigRational>) -> Self {
        Self {
            id,
            coords: Some(coords),
        }
    }

    pub fn bare(id: PointId) -> Self {
        Self { id, coords: None }
    }

    /// Builds a point from decimal literals.
    pub fn parse(id: PointId, coords: &[&str]) -> Result<Self, SpaceError> {
        let coords = coords
            .iter()
            .map(|c| parse_decimal(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(id, coords))
    }
}

/// Where distances come from.
#[derive(Clone, Debug)]
pub enum MetricSource {
    /// Euclidean distance computed from the points' coordinates.
    Euclidean,
    /// Explicit symmetric table of distances.
    DistanceTable(Vec<Vec<BigRational>>),
    /// Explicit symmetric table of squared distances. Lets irrational
    /// distances such as `√3` be represented exactly.
    SquaredDistanceTable(Vec<Vec<BigRational>>),
    /// No metric: only explicit relations may be built over the space.
    Relational,
}

#[derive(Clone, Debug)]
pub struct FiniteSpace {
    id: SpaceId,
    points: Vec<Point>,
    dim: Option<usize>,
    // row-major n*n squared distances
    sq_dist: Option<Vec<BigRational>>,
    basepoint: PointId,
}

impl FiniteSpace {
    /// Validates the points and caches all pairwise squared distances exactly.
    ///
    /// A single-point space always uses that point as its basepoint.
    pub fn build(
        points: Vec<Point>,
        metric: MetricSource,
        basepoint: PointId,
    ) -> Result<Self, SpaceError> {
        let n = points.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        let mut slots: Vec<Option<Point>> = vec![None; n];
        for p in points {
            if p.id >= n {
                return Err(SpaceError::SparseId { id: p.id, n });
            }
            if slots[p.id].is_some() {
                return Err(SpaceError::DuplicateId(p.id));
            }
            let id = p.id;
            slots[id] = Some(p);
        }
        let points: Vec<Point> = slots.into_iter().map(|p| p.expect("dense ids")).collect();
        let basepoint = if n == 1 { 0 } else { basepoint };
        if basepoint >= n {
            return Err(SpaceError::MissingBasepoint(basepoint));
        }

        let dim = match points[0].coords.as_ref() {
            Some(c) => {
                let expected = c.len();
                let all_match = points
                    .iter()
                    .all(|p| p.coords.as_ref().map(Vec::len) == Some(expected));
                all_match.then_some(expected)
            }
            None => None,
        };

        let sq_dist = match metric {
            MetricSource::Euclidean => {
                let expected = points[0]
                    .coords
                    .as_ref()
                    .ok_or(SpaceError::MissingCoordinates(0))?
                    .len();
                for p in &points {
                    let c = p.coords.as_ref().ok_or(SpaceError::MissingCoordinates(p.id))?;
                    if c.len() != expected {
                        return Err(SpaceError::DimensionMismatch {
                            id: p.id,
                            got: c.len(),
                            expected,
                        });
                    }
                }
                let mut table = vec![BigRational::zero(); n * n];
                for i in 0..n {
                    for j in (i + 1)..n {
                        let a = points[i].coords.as_ref().unwrap();
                        let b = points[j].coords.as_ref().unwrap();
                        let s = a
                            .iter()
                            .zip(b)
                            .map(|(x, y)| {
                                let d = x - y;
                                &d * &d
                            })
                            .fold(BigRational::zero(), |acc, t| acc + t);
                        table[i * n + j] = s.clone();
                        table[j * n + i] = s;
                    }
                }
                Some(table)
            }
            MetricSource::DistanceTable(rows) => {
                let table = validate_table(&rows, n)?;
                Some(table.into_iter().map(|d| &d * &d).collect())
            }
            MetricSource::SquaredDistanceTable(rows) => Some(validate_table(&rows, n)?),
            MetricSource::Relational => None,
        };

        let mut hasher = DefaultHasher::new();
        n.hash(&mut hasher);
        for p in &points {
            if let Some(c) = &p.coords {
                for x in c {
                    x.hash(&mut hasher);
                }
            }
        }
        if let Some(t) = &sq_dist {
            t.hash(&mut hasher);
        }
        Ok(Self {
            id: SpaceId(hasher.finish()),
            points,
            dim,
            sq_dist,
            basepoint,
        })
    }

    pub fn id(&self) -> SpaceId {
        self.id
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn basepoint(&self) -> PointId {
        self.basepoint
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Common coordinate dimension, if every point has coordinates of equal length.
    pub fn dimension(&self) -> Option<usize> {
        self.dim
    }

    pub fn has_metric(&self) -> bool {
        self.sq_dist.is_some()
    }

    pub fn contains(&self, x: PointId) -> bool {
        x < self.points.len()
    }

    pub fn squared_distance(&self, x: PointId, y: PointId) -> Option<&BigRational> {
        let n = self.len();
        self.sq_dist.as_ref().map(|t| &t[x * n + y])
    }

    /// Exact distance when it is rational; `None` for irrational distances
    /// or relational spaces.
    pub fn distance(&self, x: PointId, y: PointId) -> Option<BigRational> {
        rational_sqrt(self.squared_distance(x, y)?)
    }

    /// The single coordinate of a 1-dimensional point.
    pub fn coordinate(&self, x: PointId) -> Option<&BigRational> {
        match self.points.get(x)?.coords.as_deref() {
            Some([c]) => Some(c),
            _ => None,
        }
    }

    /// Finds the point of a 1-dimensional space at the given decimal coordinate.
    pub fn point_at(&self, coordinate: &str) -> Option<PointId> {
        let target = parse_decimal(coordinate).ok()?;
        (0..self.len()).find(|&i| self.coordinate(i) == Some(&target))
    }

    pub fn with_basepoint(&self, basepoint: PointId) -> Result<Self, SpaceError> {
        if basepoint >= self.len() {
            return Err(SpaceError::MissingBasepoint(basepoint));
        }
        let mut out = self.clone();
        out.basepoint = basepoint;
        Ok(out)
    }
}

fn validate_table(rows: &[Vec<BigRational>], n: usize) -> Result<Vec<BigRational>, SpaceError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(SpaceError::TableShape { n });
    }
    for i in 0..n {
        if !rows[i][i].is_zero() {
            return Err(SpaceError::NonzeroDiagonal(i));
        }
        for j in 0..n {
            if rows[i][j].is_negative() {
                return Err(SpaceError::NegativeDistance(i, j));
            }
            if rows[i][j] != rows[j][i] {
                return Err(SpaceError::Asymmetric(i.min(j), i.max(j)));
            }
        }
    }
    Ok(rows.iter().flatten().cloned().collect())
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// A positive threshold ε, kept together with its literal text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scale {
    text: String,
    value: BigRational,
}

impl Scale {
    pub fn parse(text: &str) -> Result<Self, SpaceError> {
        let value = parse_decimal(text)?;
        if !value.is_positive() {
            return Err(SpaceError::NonPositiveScale(text.trim().to_string()));
        }
        Ok(Self {
            text: text.trim().to_string(),
            value,
        })
    }

    pub fn from_value(value: BigRational) -> Result<Self, SpaceError> {
        let text = format_rational(&value);
        if !value.is_positive() {
            return Err(SpaceError::NonPositiveScale(text));
        }
        Ok(Self { text, value })
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

/// An open interval `(lo, hi)` with exact endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl OpenInterval {
    pub fn parse(lo: &str, hi: &str) -> Result<Self, SpaceError> {
        let out = Self {
            lo: parse_decimal(lo)?,
            hi: parse_decimal(hi)?,
        };
        if out.lo >= out.hi {
            return Err(SpaceError::EmptyInterval(lo.to_string(), hi.to_string()));
        }
        Ok(out)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo < x && x < &self.hi
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", format_rational(&self.lo), format_rational(&self.hi))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Threshold(Scale),
    DiffIntervals(Vec<OpenInterval>),
    Explicit(String),
}

/// A reflexive symmetric relation over the points of one space.
///
/// Only off-diagonal neighbours are stored; the diagonal is implicit.
#[derive(Clone, Debug)]
pub struct Entourage {
    space: SpaceId,
    neighbors: Vec<Vec<PointId>>,
    provenance: Provenance,
}

impl PartialEq for Entourage {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.neighbors == other.neighbors
    }
}

impl Eq for Entourage {}

impl Entourage {
    fn from_predicate(
        space: &FiniteSpace,
        provenance: Provenance,
        mut related: impl FnMut(PointId, PointId) -> bool,
    ) -> Self {
        let n = space.len();
        let mut neighbors = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                if related(i, j) {
                    neighbors[i].push(j);
                    neighbors[j].push(i);
                }
            }
        }
        for row in &mut neighbors {
            row.sort_unstable();
        }
        Self {
            space: space.id(),
            neighbors,
            provenance,
        }
    }

    /// `{(x, y) : d(x, y) < ε}` plus the diagonal.
    pub fn from_scale(space: &FiniteSpace, scale: &Scale) -> Result<Self, SpaceError> {
        if !space.has_metric() {
            return Err(SpaceError::NoMetric);
        }
        let eps_sq = scale.value() * scale.value();
        Ok(Self::from_predicate(
            space,
            Provenance::Threshold(scale.clone()),
            |i, j| space.squared_distance(i, j).unwrap() < &eps_sq,
        ))
    }

    /// `{(x, y) : x - y ∈ U ∪ -U}` plus the diagonal, for 1-dimensional spaces.
    pub fn from_diff_intervals(
        space: &FiniteSpace,
        intervals: &[OpenInterval],
    ) -> Result<Self, SpaceError> {
        if intervals.is_empty() {
            return Err(SpaceError::EmptyIntervals);
        }
        if space.dimension() != Some(1) {
            return Err(SpaceError::NotOneDimensional);
        }
        Ok(Self::from_predicate(
            space,
            Provenance::DiffIntervals(intervals.to_vec()),
            |i, j| {
                let d = space.coordinate(i).unwrap() - space.coordinate(j).unwrap();
                let neg = -d.clone();
                intervals.iter().any(|u| u.contains(&d) || u.contains(&neg))
            },
        ))
    }

    /// Builds a relation from an explicit pair list; diagonal pairs are accepted
    /// and ignored.
    pub fn from_pairs(
        space: &FiniteSpace,
        pairs: impl IntoIterator<Item = (PointId, PointId)>,
        label: impl Into<String>,
    ) -> Result<Self, SpaceError> {
        let n = space.len();
        let mut sets = vec![BTreeSet::new(); n];
        for (a, b) in pairs {
            for x in [a, b] {
                if x >= n {
                    return Err(SpaceError::UnknownPoint(x));
                }
            }
            if a != b {
                sets[a].insert(b);
                sets[b].insert(a);
            }
        }
        Ok(Self {
            space: space.id(),
            neighbors: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            provenance: Provenance::Explicit(label.into()),
        })
    }

    pub fn diagonal(space: &FiniteSpace) -> Self {
        Self::from_predicate(space, Provenance::Explicit("diagonal".into()), |_, _| false)
    }

    pub fn complete(space: &FiniteSpace) -> Self {
        Self::from_predicate(space, Provenance::Explicit("complete".into()), |_, _| true)
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Replaces the provenance label, keeping the pairs.
    pub fn relabeled(mut self, label: impl Into<String>) -> Self {
        self.provenance = Provenance::Explicit(label.into());
        self
    }

    /// Exact textual description of where the relation came from.
    pub fn descriptor(&self) -> String {
        match &self.provenance {
            Provenance::Threshold(s) => s.text().to_string(),
            Provenance::DiffIntervals(list) => list
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("u"),
            Provenance::Explicit(label) => label.clone(),
        }
    }

    pub fn threshold(&self) -> Option<&Scale> {
        match &self.provenance {
            Provenance::Threshold(s) => Some(s),
            _ => None,
        }
    }

    pub fn contains(&self, x: PointId, y: PointId) -> bool {
        x == y
            || self
                .neighbors
                .get(x)
                .is_some_and(|row| row.binary_search(&y).is_ok())
    }

    /// Off-diagonal neighbours of `x`, ascending.
    pub fn neighbors(&self, x: PointId) -> &[PointId] {
        &self.neighbors[x]
    }

    /// Off-diagonal unordered pairs `(x, y)` with `x < y`, lexicographically.
    pub fn pairs(&self) -> impl Iterator<Item = (PointId, PointId)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.iter().filter(move |&&y| y > x).map(move |&y| (x, y)))
    }

    pub fn pair_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_diagonal(&self) -> bool {
        self.neighbors.iter().all(Vec::is_empty)
    }

    /// `true` when every pair of `self` is also a pair of `other`.
    pub fn is_refinement_of(&self, other: &Entourage) -> bool {
        self.space == other.space
            && self.len() == other.len()
            && self.pairs().all(|(x, y)| other.contains(x, y))
    }

    fn check_space(&self, space: &FiniteSpace) -> Result<(), SpaceError> {
        if self.space != space.id() || self.len() != space.len() {
            return Err(SpaceError::SpaceMismatch);
        }
        Ok(())
    }
}

/// `B(x, E) = {y : (x, y) ∈ E}`, including `x`.
pub fn ball(entourage: &Entourage, x: PointId) -> Result<IdSet, SpaceError> {
    if x >= entourage.len() {
        return Err(SpaceError::UnknownPoint(x));
    }
    let mut out: IdSet = entourage.neighbors(x).iter().copied().collect();
    out.insert(x);
    Ok(out)
}

/// Partition of the points into E-chain components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    blocks: Vec<Vec<PointId>>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn blocks(&self) -> &[Vec<PointId>] {
        &self.blocks
    }

    pub fn block_of(&self, x: PointId) -> usize {
        self.block_of[x]
    }

    pub fn block_containing(&self, x: PointId) -> &[PointId] {
        &self.blocks[self.block_of[x]]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Blocks are ordered by their smallest id, and ids within a block ascend.
pub fn chain_components(space: &FiniteSpace, entourage: &Entourage) -> Result<Partition, SpaceError> {
    entourage.check_space(space)?;
    let n = space.len();
    let mut uf = UnionFind::new(n);
    for (x, y) in entourage.pairs() {
        uf.union(x, y);
    }
    let mut root_block = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<PointId>> = Vec::new();
    let mut block_of = vec![0; n];
    for x in 0..n {
        let r = uf.find(x);
        if root_block[r] == usize::MAX {
            root_block[r] = blocks.len();
            blocks.push(Vec::new());
        }
        block_of[x] = root_block[r];
        blocks[root_block[r]].push(x);
    }
    Ok(Partition { blocks, block_of })
}

/// `true` iff `B(a, W) ⊆ S` for every `a ∈ S`.
pub fn is_uniformly_open(set: &IdSet, relation: &Entourage) -> bool {
    set.iter().all(|&a| {
        a < relation.len() && relation.neighbors(a).iter().all(|b| set.contains(b))
    })
}

/// Smallest W-uniformly-open superset of `set`: the union of W-components meeting it.
pub fn saturate(set: &IdSet, relation: &Entourage) -> Result<IdSet, SpaceError> {
    if set.is_empty() {
        return Err(SpaceError::EmptySet);
    }
    let mut out = set.clone();
    let mut queue: VecDeque<PointId> = set.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        if x >= relation.len() {
            return Err(SpaceError::UnknownPoint(x));
        }
        for &y in relation.neighbors(x) {
            if out.insert(y) {
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}
