//! Rips 2-skeleta and breadth-first spanning trees.

use std::collections::VecDeque;

use crate::space::{Entourage, FiniteSpace, PointId, SpaceError, SpaceId};

/// The 1-skeleton of `R(X, E)`; triangles are enumerated on demand.
#[derive(Clone, Debug)]
pub struct RipsGraph {
    space: SpaceId,
    scale: String,
    adjacency: Vec<Vec<PointId>>,
    edges: Vec<(PointId, PointId)>,
}

pub fn rips_graph(space: &FiniteSpace, entourage: &Entourage) -> Result<RipsGraph, SpaceError> {
    if entourage.space() != space.id() || entourage.len() != space.len() {
        return Err(SpaceError::SpaceMismatch);
    }
    let adjacency: Vec<Vec<PointId>> = (0..space.len())
        .map(|x| entourage.neighbors(x).to_vec())
        .collect();
    Ok(RipsGraph {
        space: space.id(),
        scale: entourage.descriptor(),
        edges: entourage.pairs().collect(),
        adjacency,
    })
}

impl RipsGraph {
    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn scale(&self) -> &str {
        &self.scale
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edges(&self) -> &[(PointId, PointId)] {
        &self.edges
    }

    pub fn neighbors(&self, x: PointId) -> &[PointId] {
        &self.adjacency[x]
    }

    pub fn has_edge(&self, x: PointId, y: PointId) -> bool {
        self.adjacency[x].binary_search(&y).is_ok()
    }

    /// Triples `u < v < w` with all three edges present, in lexicographic order.
    ///
    /// Walks each edge `(u, v)` and merges the sorted neighbour lists to find
    /// common neighbours above `v`.
    pub fn triangles(&self) -> impl Iterator<Item = [PointId; 3]> + '_ {
        self.edges.iter().flat_map(move |&(u, v)| {
            let a = &self.adjacency[u];
            let b = &self.adjacency[v];
            let start_a = a.partition_point(|&w| w <= v);
            let start_b = b.partition_point(|&w| w <= v);
            SortedIntersection {
                a: &a[start_a..],
                b: &b[start_b..],
            }
            .map(move |w| [u, v, w])
        })
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles().count()
    }

    /// Eccentricity of `root` within its component, in edges.
    pub fn eccentricity(&self, root: PointId) -> usize {
        let dist = self.bfs_distances(root);
        dist.into_iter().flatten().max().unwrap_or(0)
    }

    /// Largest eccentricity over the component of `root`.
    pub fn component_diameter(&self, root: PointId) -> usize {
        let dist = self.bfs_distances(root);
        (0..self.vertex_count())
            .filter(|&v| dist[v].is_some())
            .map(|v| self.eccentricity(v))
            .max()
            .unwrap_or(0)
    }

    pub fn bfs_distances(&self, root: PointId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &y in &self.adjacency[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }
}

struct SortedIntersection<'a> {
    a: &'a [PointId],
    b: &'a [PointId],
}

impl Iterator for SortedIntersection<'_> {
    type Item = PointId;

    fn next(&mut self) -> Option<PointId> {
        while let (Some(&x), Some(&y)) = (self.a.first(), self.b.first()) {
            match x.cmp(&y) {
                std::cmp::Ordering::Less => self.a = &self.a[1..],
                std::cmp::Ordering::Greater => self.b = &self.b[1..],
                std::cmp::Ordering::Equal => {
                    self.a = &self.a[1..];
                    self.b = &self.b[1..];
                    return Some(x);
                }
            }
        }
        None
    }
}

/// BFS tree of the root's component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    root: PointId,
    parent: Vec<Option<PointId>>,
    depth: Vec<Option<usize>>,
    order: Vec<PointId>,
}

/// BFS tree with ascending-id tie-break.
pub fn spanning_tree(graph: &RipsGraph, root: PointId) -> Result<SpanningTree, SpaceError> {
    spanning_tree_by(graph, root, |x| x)
}

/// BFS tree where neighbours are visited in ascending `priority(x)` order.
/// `priority` must be injective.
pub fn spanning_tree_by(
    graph: &RipsGraph,
    root: PointId,
    priority: impl Fn(PointId) -> usize,
) -> Result<SpanningTree, SpaceError> {
    let n = graph.vertex_count();
    if root >= n {
        return Err(SpaceError::UnknownPoint(root));
    }
    let mut parent = vec![None; n];
    let mut depth = vec![None; n];
    let mut order = vec![root];
    depth[root] = Some(0);
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        let mut next: Vec<PointId> = graph
            .neighbors(x)
            .iter()
            .copied()
            .filter(|&y| depth[y].is_none())
            .collect();
        next.sort_by_key(|&y| priority(y));
        for y in next {
            if depth[y].is_none() {
                depth[y] = Some(depth[x].unwrap() + 1);
                parent[y] = Some(x);
                order.push(y);
            }
        }
    }
    Ok(SpanningTree {
        root,
        parent,
        depth,
        order,
    })
}

impl SpanningTree {
    pub fn root(&self) -> PointId {
        self.root
    }

    pub fn contains(&self, x: PointId) -> bool {
        self.depth.get(x).is_some_and(Option::is_some)
    }

    pub fn parent(&self, x: PointId) -> Option<PointId> {
        self.parent[x]
    }

    pub fn depth(&self, x: PointId) -> Option<usize> {
        self.depth[x]
    }

    /// Component vertices in BFS order.
    pub fn vertices(&self) -> &[PointId] {
        &self.order
    }

    pub fn is_tree_edge(&self, x: PointId, y: PointId) -> bool {
        self.parent[x] == Some(y) || self.parent[y] == Some(x)
    }

    /// Tree edges `(min, max)`, sorted.
    pub fn edges(&self) -> Vec<(PointId, PointId)> {
        let mut out: Vec<_> = self
            .order
            .iter()
            .filter_map(|&v| self.parent[v].map(|p| (p.min(v), p.max(v))))
            .collect();
        out.sort_unstable();
        out
    }

    /// Graph edges inside the component that are not tree edges, sorted.
    pub fn non_tree_edges(&self, graph: &RipsGraph) -> Vec<(PointId, PointId)> {
        graph
            .edges()
            .iter()
            .copied()
            .filter(|&(x, y)| self.contains(x) && self.contains(y) && !self.is_tree_edge(x, y))
            .collect()
    }

    /// Tree path from `from` to `to` through their lowest common ancestor.
    pub fn path(&self, from: PointId, to: PointId) -> Option<Vec<PointId>> {
        if !self.contains(from) || !self.contains(to) {
            return None;
        }
        let (mut a, mut b) = (from, to);
        let mut up = vec![a];
        let mut down = vec![b];
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].unwrap();
            up.push(a);
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].unwrap();
            down.push(b);
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
            up.push(a);
            down.push(b);
        }
        down.pop();
        up.extend(down.into_iter().rev());
        Some(up)
    }
}
