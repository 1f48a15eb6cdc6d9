//! Triangles, Euler characteristic and orientability of digital 2-surfaces.

use std::collections::{BTreeMap, VecDeque};

use super::{PointClass, SurfaceChecker, TopologyError};
use crate::space::{DigitalSpace, PointId};

pub type Triangle = [PointId; 3];

/// All 3-cliques, each listed once with ascending labels, in sorted order.
pub fn triangles(g: &DigitalSpace) -> Vec<Triangle> {
    let mut out = Vec::new();
    for a in 0..g.len() {
        let na = g.neighbor_indices(a);
        for &b in na.iter().filter(|&&b| b > a) {
            for &c in g.neighbor_indices(b).iter().filter(|&&c| c > b) {
                if na.binary_search(&c).is_ok() {
                    out.push([g.point(a), g.point(b), g.point(c)]);
                }
            }
        }
    }
    out
}

/// `|V| − |E| + |T|` with `T` the graph triangles.
pub fn euler_characteristic(g: &DigitalSpace) -> i64 {
    g.len() as i64 - g.edge_count() as i64 + triangles(g).len() as i64
}

/// Alternating count of all cliques (the Euler characteristic of the clique
/// complex). Agrees with [`euler_characteristic`] on K4-free spaces.
pub fn clique_euler_characteristic(g: &DigitalSpace) -> i64 {
    fn extend(g: &DigitalSpace, clique_len: usize, candidates: &[usize], acc: &mut i64) {
        for (pos, &v) in candidates.iter().enumerate() {
            let sign = if clique_len % 2 == 0 { 1 } else { -1 };
            *acc += sign;
            let next: Vec<usize> = candidates[pos + 1..]
                .iter()
                .copied()
                .filter(|&w| g.has_edge_indices(v, w))
                .collect();
            extend(g, clique_len + 1, &next, acc);
        }
    }
    let all: Vec<usize> = (0..g.len()).collect();
    let mut acc = 0;
    extend(g, 0, &all, &mut acc);
    acc
}

/// Number of triangles containing each edge, keyed by `(a, b)` with `a < b`.
pub fn edge_triangle_counts(g: &DigitalSpace) -> BTreeMap<(PointId, PointId), usize> {
    let mut counts: BTreeMap<(PointId, PointId), usize> =
        g.edges().into_iter().map(|e| (e, 0)).collect();
    for [a, b, c] in triangles(g) {
        for e in [(a, b), (b, c), (a, c)] {
            *counts.get_mut(&e).expect("triangle edge is an edge") += 1;
        }
    }
    counts
}

/// Whether the triangles of a 2-surface (with or without boundary) admit a
/// consistent orientation.
///
/// The edge multiplicities are checked first: every edge must lie in exactly
/// two triangles, or in exactly one when both endpoints are boundary points.
pub fn is_orientable(g: &DigitalSpace) -> Result<bool, TopologyError> {
    let mut checker = SurfaceChecker::new();
    let mut class = Vec::with_capacity(g.len());
    for &v in g.points() {
        let c = checker.classify_point(g, v, 2)?;
        if c == PointClass::Defective {
            return Err(TopologyError::NotASurface(v));
        }
        class.push(c);
    }
    for (&(a, b), &k) in &edge_triangle_counts(g) {
        let both_boundary = [a, b]
            .iter()
            .all(|&p| class[g.index_of(p).unwrap()] == PointClass::Boundary);
        match k {
            2 => {}
            1 if both_boundary => {}
            1 => return Err(TopologyError::StrayBoundaryEdge(a, b)),
            _ => return Err(TopologyError::EdgeMultiplicity(a, b, k)),
        }
    }

    let tris = triangles(g);
    // edge -> (triangle index, direction of the edge (a<b) in the triangle's
    // ascending cyclic order a->b->c->a)
    let mut incidence: BTreeMap<(PointId, PointId), Vec<(usize, i8)>> = BTreeMap::new();
    for (t, &[a, b, c]) in tris.iter().enumerate() {
        incidence.entry((a, b)).or_default().push((t, 1));
        incidence.entry((b, c)).or_default().push((t, 1));
        incidence.entry((a, c)).or_default().push((t, -1));
    }
    let mut edges_of: Vec<Vec<((PointId, PointId), i8)>> = vec![Vec::new(); tris.len()];
    for (&e, list) in &incidence {
        for &(t, dir) in list {
            edges_of[t].push((e, dir));
        }
    }

    let mut sign: Vec<i8> = vec![0; tris.len()];
    for start in 0..tris.len() {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for &(e, dir) in &edges_of[t] {
                for &(u, udir) in &incidence[&e] {
                    if u == t {
                        continue;
                    }
                    // neighbours must run the shared edge the other way
                    let want = -sign[t] * dir * udir;
                    if sign[u] == 0 {
                        sign[u] = want;
                        queue.push_back(u);
                    } else if sign[u] != want {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
