//! Exhaustive search over elementary moves, for tiny instances.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::homotopy::{elementary_move, is_echain, EChain, HomotopyError, Move};
use crate::space::{Entourage, FiniteSpace, PointId};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("chains do not share both endpoints")]
    EndpointMismatch,
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error("instance exceeds the guard: {0}")]
    GuardExceeded(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    /// `moves` turns the first chain into the second.
    Equivalent { moves: Vec<(usize, Move)>, max_steps: usize },
    /// No move sequence through chains of at most `max_steps` steps exists.
    NotWithinSlack { max_steps: usize, explored: usize },
}

impl OracleVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, OracleVerdict::Equivalent { .. })
    }
}

/// Limits for [`enumerate_classes`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleGuard {
    pub max_points: usize,
    pub max_len: usize,
    pub max_chains: usize,
}

impl Default for OracleGuard {
    fn default() -> Self {
        Self {
            max_points: 8,
            max_len: 6,
            max_chains: 4_000_000,
        }
    }
}

/// All chains one move away, in a fixed order.
fn neighbours(chain: &[PointId], relation: &Entourage, max_points: usize) -> Vec<(usize, Move, Vec<PointId>)> {
    let n = chain.len();
    let mut out = Vec::new();
    for i in 0..n {
        let c = EChain::from_trusted(chain.to_vec());
        if let Ok(next) = elementary_move(&c, relation, i, Move::Delete) {
            out.push((i, Move::Delete, next.into_points()));
        }
    }
    if n < max_points {
        for i in 0..=n {
            let candidates: Vec<PointId> = match (i.checked_sub(1).map(|j| chain[j]), chain.get(i)) {
                (Some(a), Some(&b)) => closed(relation, a).into_iter().filter(|&x| relation.contains(x, b)).collect(),
                (None, Some(&b)) => vec![b],
                (Some(a), None) => vec![a],
                (None, None) => Vec::new(),
            };
            for x in candidates {
                let mut next = chain.to_vec();
                next.insert(i, x);
                out.push((i, Move::Insert(x), next));
            }
        }
    }
    out
}

fn closed(relation: &Entourage, x: PointId) -> Vec<PointId> {
    let mut v = relation.neighbors(x).to_vec();
    let at = v.binary_search(&x).unwrap_err();
    v.insert(at, x);
    v
}

/// Breadth-first search from `a` to `b` through chains with at most
/// `max(steps(a), steps(b)) + slack` steps.
pub fn oracle_homotopic(relation: &Entourage, a: &[PointId], b: &[PointId], slack: usize) -> Result<OracleVerdict, OracleError> {
    EChain::new(a.to_vec(), relation)?;
    EChain::new(b.to_vec(), relation)?;
    if a.first() != b.first() || a.last() != b.last() {
        return Err(OracleError::EndpointMismatch);
    }
    let max_points = a.len().max(b.len()) + slack;
    let max_steps = max_points - 1;
    let mut parent: HashMap<Vec<PointId>, Option<(Vec<PointId>, usize, Move)>> = HashMap::new();
    parent.insert(a.to_vec(), None);
    let mut queue = VecDeque::from([a.to_vec()]);
    while let Some(c) = queue.pop_front() {
        if c == b {
            let mut moves = Vec::new();
            let mut cur = c;
            while let Some(Some((prev, i, m))) = parent.get(&cur).cloned() {
                moves.push((i, m));
                cur = prev;
            }
            moves.reverse();
            return Ok(OracleVerdict::Equivalent { moves, max_steps });
        }
        for (i, m, next) in neighbours(&c, relation, max_points) {
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((c.clone(), i, m)));
                queue.push_back(next);
            }
        }
    }
    Ok(OracleVerdict::NotWithinSlack {
        max_steps,
        explored: parent.len(),
    })
}

/// Replays a move sequence, failing on the first illegal move.
pub fn replay(relation: &Entourage, start: &[PointId], moves: &[(usize, Move)]) -> Result<Vec<PointId>, OracleError> {
    let mut c = EChain::new(start.to_vec(), relation)?;
    for &(i, m) in moves {
        c = elementary_move(&c, relation, i, m)?;
    }
    Ok(c.into_points())
}

/// Classes of based chains with at most `max_len` steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPartition {
    classes: Vec<Vec<Vec<PointId>>>,
    class_of: HashMap<Vec<PointId>, usize>,
    bound: usize,
}

impl ClassPartition {
    /// Classes sorted by their least chain; chains sorted inside each class.
    pub fn classes(&self) -> &[Vec<Vec<PointId>>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, chain: &[PointId]) -> Option<usize> {
        self.class_of.get(chain).copied()
    }

    /// Step bound on intermediate chains.
    pub fn bound(&self) -> usize {
        self.bound
    }
}

/// Partitions based chains of at most `max_len` steps by connectivity of the
/// move graph on chains of at most `max_len + slack` steps.
pub fn enumerate_classes(
    space: &FiniteSpace,
    relation: &Entourage,
    max_len: usize,
    slack: usize,
    guard: OracleGuard,
) -> Result<ClassPartition, OracleError> {
    if space.len() > guard.max_points {
        return Err(OracleError::GuardExceeded(format!("{} points > {}", space.len(), guard.max_points)));
    }
    if max_len > guard.max_len {
        return Err(OracleError::GuardExceeded(format!("max_len {max_len} > {}", guard.max_len)));
    }
    let bound = max_len + slack;
    let root = space.basepoint();
    // count first so the guard trips before allocating
    let mut ends = vec![0usize; space.len()];
    ends[root] = 1;
    let mut total = 1usize;
    for _ in 0..bound {
        let mut next = vec![0usize; space.len()];
        for (x, &k) in ends.iter().enumerate() {
            for y in closed(relation, x) {
                next[y] = next[y].saturating_add(k);
            }
        }
        ends = next;
        total = total.saturating_add(ends.iter().fold(0usize, |s, &k| s.saturating_add(k)));
        if total > guard.max_chains {
            return Err(OracleError::GuardExceeded(format!("more than {} chains", guard.max_chains)));
        }
    }

    let mut chains: Vec<Vec<u8>> = vec![vec![root as u8]];
    let mut level_start = 0;
    for _ in 0..bound {
        let level_end = chains.len();
        for i in level_start..level_end {
            let last = *chains[i].last().unwrap() as PointId;
            for y in closed(relation, last) {
                let mut c = chains[i].clone();
                c.push(y as u8);
                chains.push(c);
            }
        }
        level_start = level_end;
    }
    let index: HashMap<&[u8], usize> = chains.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
    let mut uf = UnionFind::new(chains.len());
    for (i, c) in chains.iter().enumerate() {
        let n = c.len();
        for j in 0..n {
            let first_ok = j > 0 || (n > 1 && c[1] == c[0]);
            let last_ok = j + 1 < n || (n > 1 && c[n - 2] == c[n - 1]);
            if !first_ok || !last_ok {
                continue;
            }
            if j > 0 && j + 1 < n && !relation.contains(c[j - 1] as PointId, c[j + 1] as PointId) {
                continue;
            }
            let mut d = c.clone();
            d.remove(j);
            uf.union(i, index[d.as_slice()]);
        }
    }
    let mut groups: HashMap<usize, Vec<Vec<PointId>>> = HashMap::new();
    for (i, c) in chains.iter().enumerate() {
        if c.len() <= max_len + 1 {
            groups.entry(uf.find(i)).or_default().push(c.iter().map(|&x| x as PointId).collect());
        }
    }
    let mut classes: Vec<Vec<Vec<PointId>>> = groups.into_values().collect();
    for c in &mut classes {
        c.sort();
    }
    classes.sort();
    let class_of = classes
        .iter()
        .enumerate()
        .flat_map(|(k, cs)| cs.iter().map(move |c| (c.clone(), k)))
        .collect();
    Ok(ClassPartition {
        classes,
        class_of,
        bound,
    })
}

/// Whether the chain is a based chain of the partition's space.
pub fn is_based_chain(space: &FiniteSpace, relation: &Entourage, chain: &[PointId]) -> bool {
    chain.first() == Some(&space.basepoint()) && is_echain(chain, relation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::space::Scale;

    fn rel(space: &FiniteSpace, eps: &str) -> Entourage {
        Entourage::from_scale(space, &Scale::parse(eps).unwrap()).unwrap()
    }

    #[test]
    fn single_insertion() {
        let p5 = fixtures::p5();
        let e = rel(&p5, "1.5");
        let v = oracle_homotopic(&e, &[0, 1, 2], &[0, 1, 1, 2], 0).unwrap();
        match v {
            OracleVerdict::Equivalent { moves, .. } => {
                assert_eq!(moves.len(), 1);
                assert_eq!(replay(&e, &[0, 1, 2], &moves).unwrap(), vec![0, 1, 1, 2]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hexagon_cycle_is_not_contractible_within_slack() {
        let hex = fixtures::hex();
        let e = rel(&hex, "1.2");
        let v = oracle_homotopic(&e, &[0, 1, 2, 3, 4, 5, 0], &[0], 4).unwrap();
        assert!(!v.is_equivalent());
    }

    #[test]
    fn complete_hexagon_loops_collapse() {
        let hex = fixtures::hex();
        let e = rel(&hex, "2.1");
        let loops = [vec![0, 3, 0], vec![0, 2, 4, 0], vec![0], vec![0, 5, 0]];
        for a in &loops {
            for b in &loops {
                let v = oracle_homotopic(&e, a, b, 3).unwrap();
                if let OracleVerdict::Equivalent { moves, .. } = &v {
                    assert_eq!(&replay(&e, a, moves).unwrap(), b);
                } else {
                    panic!("{a:?} vs {b:?}");
                }
            }
        }
    }

    #[test]
    fn endpoint_mismatch() {
        let hex = fixtures::hex();
        let e = rel(&hex, "2.1");
        assert_eq!(oracle_homotopic(&e, &[0, 1], &[0, 2], 1).unwrap_err(), OracleError::EndpointMismatch);
    }

    #[test]
    fn class_counts() {
        let hex = fixtures::hex();
        let parts = enumerate_classes(&hex, &rel(&hex, "1.2"), 3, 3, OracleGuard::default()).unwrap();
        assert_eq!(parts.len(), 7);
        let parts = enumerate_classes(&hex, &rel(&hex, "0.9"), 2, 1, OracleGuard::default()).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts.classes()[0], vec![vec![0], vec![0, 0], vec![0, 0, 0]]);
        let one = FiniteSpace::build(vec![crate::space::Point::bare(0)], crate::space::MetricSource::Relational, 0).unwrap();
        let parts = enumerate_classes(&one, &Entourage::diagonal(&one), 3, 0, OracleGuard::default()).unwrap();
        assert_eq!(parts.len(), 1);
    }

    #[test]
    fn guard_trips() {
        let grid = fixtures::grid("1");
        let e = rel(&grid, "1.5");
        assert!(matches!(
            enumerate_classes(&grid, &e, 3, 0, OracleGuard::default()),
            Err(OracleError::GuardExceeded(_))
        ));
        let hex = fixtures::hex();
        assert!(enumerate_classes(&hex, &rel(&hex, "1.2"), 7, 0, OracleGuard::default()).is_err());
    }
}
