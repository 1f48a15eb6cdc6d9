//! Digital spaces: finite simple undirected graphs with labelled points.
//!
//! A [`DigitalSpace`] carries all of its topology in the edge set. The rim
//! `O(v)` of a point is the induced subspace on its neighbours and the ball
//! `U(v)` is the rim together with `v`. Every derived space (rim, ball, join,
//! component) keeps the labels of the space it came from.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Label of a point. Labels are positive and preserved verbatim through every
/// operation, so `PointId(10)` always means "point 10" of the original space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub u32);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for PointId {
    fn from(v: u32) -> Self {
        PointId(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("point label must be positive")]
    ZeroLabel,
    #[error("duplicate point label {0}")]
    DuplicatePoint(PointId),
    #[error("self-loop at point {0}")]
    SelfLoop(PointId),
    #[error("edge ({0}, {1}) references unknown point {2}")]
    DanglingEdge(PointId, PointId, PointId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(PointId, PointId),
    #[error("unknown point {0}")]
    UnknownPoint(PointId),
}

/// A finite simple undirected graph `G = (V, W)`.
///
/// Points are kept sorted by label and adjacency is stored as sorted neighbour
/// index lists, so iteration order is deterministic everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DigitalSpace {
    points: Vec<PointId>,
    adj: Vec<Vec<usize>>,
}

impl DigitalSpace {
    /// Builds a space, deduplicating edges and storing them canonically.
    pub fn new<P, E>(points: P, edges: E) -> Result<Self, SpaceError>
    where
        P: IntoIterator,
        P::Item: Into<PointId>,
        E: IntoIterator<Item = (u32, u32)>,
    {
        Self::build(points, edges, false)
    }

    /// Like [`DigitalSpace::new`] but a repeated edge is an error rather than
    /// being merged. Used for file input.
    pub fn new_strict<P, E>(points: P, edges: E) -> Result<Self, SpaceError>
    where
        P: IntoIterator,
        P::Item: Into<PointId>,
        E: IntoIterator<Item = (u32, u32)>,
    {
        Self::build(points, edges, true)
    }

    fn build<P, E>(points: P, edges: E, strict: bool) -> Result<Self, SpaceError>
    where
        P: IntoIterator,
        P::Item: Into<PointId>,
        E: IntoIterator<Item = (u32, u32)>,
    {
        let mut pts: Vec<PointId> = points.into_iter().map(Into::into).collect();
        if pts.iter().any(|p| p.0 == 0) {
            return Err(SpaceError::ZeroLabel);
        }
        pts.sort_unstable();
        if let Some(w) = pts.windows(2).find(|w| w[0] == w[1]) {
            return Err(SpaceError::DuplicatePoint(w[0]));
        }
        let mut space = DigitalSpace {
            adj: vec![Vec::new(); pts.len()],
            points: pts,
        };
        for (a, b) in edges {
            let (pa, pb) = (PointId(a), PointId(b));
            if a == b {
                return Err(SpaceError::SelfLoop(pa));
            }
            let ia = space.index_of(pa).ok_or(SpaceError::DanglingEdge(pa, pb, pa))?;
            let ib = space.index_of(pb).ok_or(SpaceError::DanglingEdge(pa, pb, pb))?;
            if space.adj[ia].contains(&ib) {
                if strict {
                    return Err(SpaceError::DuplicateEdge(pa.min(pb), pa.max(pb)));
                }
                continue;
            }
            space.adj[ia].push(ib);
            space.adj[ib].push(ia);
        }
        for list in &mut space.adj {
            list.sort_unstable();
        }
        Ok(space)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points in ascending label order.
    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn point(&self, index: usize) -> PointId {
        self.points[index]
    }

    pub fn index_of(&self, p: PointId) -> Option<usize> {
        self.points.binary_search(&p).ok()
    }

    pub fn contains(&self, p: PointId) -> bool {
        self.index_of(p).is_some()
    }

    fn require(&self, p: PointId) -> Result<usize, SpaceError> {
        self.index_of(p).ok_or(SpaceError::UnknownPoint(p))
    }

    /// Neighbour indices of the point at `index`, ascending.
    pub fn neighbor_indices(&self, index: usize) -> &[usize] {
        &self.adj[index]
    }

    pub fn neighbors(&self, p: PointId) -> Result<Vec<PointId>, SpaceError> {
        let i = self.require(p)?;
        Ok(self.adj[i].iter().map(|&j| self.points[j]).collect())
    }

    pub fn degree(&self, p: PointId) -> Result<usize, SpaceError> {
        Ok(self.adj[self.require(p)?].len())
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge_indices(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn has_edge(&self, a: PointId, b: PointId) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.has_edge_indices(i, j),
            _ => false,
        }
    }

    /// Edges as label pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(PointId, PointId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, list) in self.adj.iter().enumerate() {
            for &j in list.iter().filter(|&&j| j > i) {
                out.push((self.points[i], self.points[j]));
            }
        }
        out
    }

    /// Induced subspace on the given points: an edge survives iff both of its
    /// endpoints are kept.
    pub fn induced(&self, keep: &[PointId]) -> Result<DigitalSpace, SpaceError> {
        let mut idx = keep
            .iter()
            .map(|&p| self.require(p))
            .collect::<Result<Vec<_>, _>>()?;
        idx.sort_unstable();
        idx.dedup();
        Ok(self.induced_by_indices(&idx))
    }

    /// `indices` must be sorted and free of duplicates.
    pub(crate) fn induced_by_indices(&self, indices: &[usize]) -> DigitalSpace {
        let points: Vec<PointId> = indices.iter().map(|&i| self.points[i]).collect();
        let adj = indices
            .iter()
            .map(|&i| {
                // both lists sorted, so a merge keeps the result sorted
                let mut out = Vec::new();
                let (mut a, mut b) = (0, 0);
                let row = &self.adj[i];
                while a < row.len() && b < indices.len() {
                    match row[a].cmp(&indices[b]) {
                        std::cmp::Ordering::Less => a += 1,
                        std::cmp::Ordering::Greater => b += 1,
                        std::cmp::Ordering::Equal => {
                            out.push(b);
                            a += 1;
                            b += 1;
                        }
                    }
                }
                out
            })
            .collect();
        DigitalSpace { points, adj }
    }

    /// The rim `O(v)`: induced subspace on the neighbours of `v`, without `v`.
    pub fn rim(&self, v: PointId) -> Result<DigitalSpace, SpaceError> {
        let i = self.require(v)?;
        Ok(self.induced_by_indices(&self.adj[i]))
    }

    /// The ball `U(v) = O(v) ∪ {v}`.
    pub fn ball(&self, v: PointId) -> Result<DigitalSpace, SpaceError> {
        let i = self.require(v)?;
        let mut idx = self.adj[i].clone();
        idx.push(i);
        idx.sort_unstable();
        Ok(self.induced_by_indices(&idx))
    }

    pub(crate) fn rim_by_index(&self, i: usize) -> DigitalSpace {
        self.induced_by_indices(&self.adj[i])
    }

    /// Connected components, each an induced subspace, ordered by smallest label.
    pub fn connected_components(&self) -> Vec<DigitalSpace> {
        self.component_indices()
            .iter()
            .map(|c| self.induced_by_indices(c))
            .collect()
    }

    pub(crate) fn component_indices(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.component_indices().len() == 1
    }

    pub fn max_label(&self) -> u32 {
        self.points.last().map_or(0, |p| p.0)
    }

    /// Returns a copy with every label shifted by `offset`.
    pub fn shifted(&self, offset: u32) -> DigitalSpace {
        DigitalSpace {
            points: self.points.iter().map(|p| PointId(p.0 + offset)).collect(),
            adj: self.adj.clone(),
        }
    }
}

/// Offset that [`join`] adds to the labels of `h`: zero when the label sets of
/// `g` and `h` are disjoint, otherwise the largest label of `g`.
pub fn join_offset(g: &DigitalSpace, h: &DigitalSpace) -> u32 {
    if h.points().iter().any(|&p| g.contains(p)) {
        g.max_label()
    } else {
        0
    }
}

/// The join `G * H`: disjoint union plus every edge between `G` and `H`.
///
/// If the label sets collide, `H` is relabelled by [`join_offset`] first.
pub fn join(g: &DigitalSpace, h: &DigitalSpace) -> DigitalSpace {
    let h = h.shifted(join_offset(g, h));
    let points = g.points().iter().chain(h.points()).copied();
    let mut edges: Vec<(u32, u32)> = g
        .edges()
        .into_iter()
        .chain(h.edges())
        .map(|(a, b)| (a.0, b.0))
        .collect();
    for &a in g.points() {
        for &b in h.points() {
            edges.push((a.0, b.0));
        }
    }
    DigitalSpace::new(points, edges).expect("join of valid spaces with disjoint labels")
}
