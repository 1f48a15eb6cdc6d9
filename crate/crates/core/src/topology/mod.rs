//! Recognition of digital n-surfaces and classification of points.
//!
//! A digital 0-surface is two isolated points. For `n ≥ 1` a digital
//! n-surface is a nonempty connected space in which the rim of every point is
//! an (n−1)-surface. Points whose rim is an (n−1)-ball are boundary points;
//! the ball convention used here is spelled out in [`BOUNDARY_CONVENTION`].

mod complex;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::SpaceFile;
use crate::space::{DigitalSpace, PointId, SpaceError};

pub use complex::{
    clique_euler_characteristic, edge_triangle_counts, euler_characteristic, is_orientable,
    triangles, Triangle,
};

/// Ball convention reported alongside every classification.
pub const BOUNDARY_CONVENTION: &str = "0-ball: a single point; 1-ball: an induced path with at \
least 2 points; k-ball (k >= 2): connected, every point interior or boundary at dimension k, \
boundary points induce a (k-1)-surface, clique-complex Euler characteristic 1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("edge ({0}, {1}) lies in {2} triangles")]
    EdgeMultiplicity(PointId, PointId, usize),
    #[error("edge ({0}, {1}) lies in one triangle but is not a boundary edge")]
    StrayBoundaryEdge(PointId, PointId),
    #[error("not a 2-surface with or without boundary (point {0} is defective)")]
    NotASurface(PointId),
}

/// Classification of a point at a tested dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointClass {
    /// Normal n-dimensional point: the rim is an (n−1)-surface.
    Interior,
    /// The rim is an (n−1)-ball.
    Boundary,
    Defective,
}

/// Outcome of [`surface_report`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub dimension: usize,
    /// Closed n-surface: nonempty, connected and every point interior
    /// (for `n = 0`: the space is `S⁰`).
    pub is_surface: bool,
    /// Connected with no defective points; boundary points allowed.
    pub is_surface_with_boundary: bool,
    pub points: BTreeMap<PointId, PointClass>,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub triangle_count: usize,
    pub euler: i64,
    /// Only evaluated for 2-surfaces with or without boundary.
    pub orientable: Option<bool>,
    pub boundary_components: Vec<SpaceFile>,
    pub boundary_convention: String,
}

impl SurfaceReport {
    pub fn defective_points(&self) -> Vec<PointId> {
        self.points_with(PointClass::Defective)
    }

    pub fn boundary_points(&self) -> Vec<PointId> {
        self.points_with(PointClass::Boundary)
    }

    pub fn interior_points(&self) -> Vec<PointId> {
        self.points_with(PointClass::Interior)
    }

    fn points_with(&self, class: PointClass) -> Vec<PointId> {
        self.points
            .iter()
            .filter(|(_, &c)| c == class)
            .map(|(&p, _)| p)
            .collect()
    }
}

pub fn is_zero_sphere(g: &DigitalSpace) -> bool {
    g.len() == 2 && g.edge_count() == 0
}

type MemoKey = (usize, Vec<PointId>, Vec<(PointId, PointId)>);

/// Memoizing recognizer. Verdicts are keyed by dimension and the canonical
/// (identity-labelled) point and edge lists of the tested space.
#[derive(Debug, Default)]
pub struct SurfaceChecker {
    surfaces: HashMap<MemoKey, bool>,
    balls: HashMap<MemoKey, bool>,
}

impl SurfaceChecker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_n_surface(&mut self, g: &DigitalSpace, n: usize) -> bool {
        match n {
            0 => is_zero_sphere(g),
            1 => is_one_sphere(g),
            _ => {
                let key = (n, g.points().to_vec(), g.edges());
                if let Some(&v) = self.surfaces.get(&key) {
                    return v;
                }
                let verdict = g.is_connected()
                    && (0..g.len()).all(|i| self.is_n_surface(&g.rim_by_index(i), n - 1));
                self.surfaces.insert(key, verdict);
                verdict
            }
        }
    }

    pub fn is_n_ball(&mut self, g: &DigitalSpace, k: usize) -> bool {
        match k {
            0 => g.len() == 1,
            1 => is_induced_path(g),
            _ => {
                let key = (k, g.points().to_vec(), g.edges());
                if let Some(&v) = self.balls.get(&key) {
                    return v;
                }
                let verdict = self.ball_verdict(g, k);
                self.balls.insert(key, verdict);
                verdict
            }
        }
    }

    fn ball_verdict(&mut self, g: &DigitalSpace, k: usize) -> bool {
        if !g.is_connected() {
            return false;
        }
        let mut boundary = Vec::new();
        for i in 0..g.len() {
            match self.classify_index(g, i, k) {
                PointClass::Interior => {}
                PointClass::Boundary => boundary.push(i),
                PointClass::Defective => return false,
            }
        }
        !boundary.is_empty()
            && self.is_n_surface(&g.induced_by_indices(&boundary), k - 1)
            && clique_euler_characteristic(g) == 1
    }

    fn classify_index(&mut self, g: &DigitalSpace, i: usize, n: usize) -> PointClass {
        let rim = g.rim_by_index(i);
        if self.is_n_surface(&rim, n - 1) {
            PointClass::Interior
        } else if self.is_n_ball(&rim, n - 1) {
            PointClass::Boundary
        } else {
            PointClass::Defective
        }
    }

    pub fn classify_point(
        &mut self,
        g: &DigitalSpace,
        v: PointId,
        n: usize,
    ) -> Result<PointClass, SpaceError> {
        assert!(n >= 1, "point classification needs n >= 1");
        let i = g.index_of(v).ok_or(SpaceError::UnknownPoint(v))?;
        Ok(self.classify_index(g, i, n))
    }
}

/// Connected, at least four points, every point of degree two. Equivalent to
/// the recursive definition at `n = 1`: each rim must be two non-adjacent
/// points, which excludes the triangle.
fn is_one_sphere(g: &DigitalSpace) -> bool {
    g.len() >= 4
        && (0..g.len()).all(|i| g.neighbor_indices(i).len() == 2)
        && g.is_connected()
}

fn is_induced_path(g: &DigitalSpace) -> bool {
    if g.len() < 2 || !g.is_connected() || g.edge_count() != g.len() - 1 {
        return false;
    }
    let ends = (0..g.len())
        .filter(|&i| g.neighbor_indices(i).len() == 1)
        .count();
    ends == 2 && (0..g.len()).all(|i| g.neighbor_indices(i).len() <= 2)
}

pub fn is_n_surface(g: &DigitalSpace, n: usize) -> bool {
    SurfaceChecker::new().is_n_surface(g, n)
}

/// Plain recursive form of the definition with no shortcut and no memo.
/// Kept as a reference for testing [`is_n_surface`].
pub fn is_n_surface_by_definition(g: &DigitalSpace, n: usize) -> bool {
    if n == 0 {
        return is_zero_sphere(g);
    }
    g.is_connected()
        && g
            .points()
            .iter()
            .all(|&v| is_n_surface_by_definition(&g.rim(v).unwrap(), n - 1))
}

pub fn classify_point(g: &DigitalSpace, v: PointId, n: usize) -> Result<PointClass, SpaceError> {
    SurfaceChecker::new().classify_point(g, v, n)
}

/// Classifies every point at dimension `n ≥ 1` and collects the invariants.
pub fn surface_report(g: &DigitalSpace, n: usize) -> SurfaceReport {
    let mut checker = SurfaceChecker::new();
    let points: BTreeMap<PointId, PointClass> = if n == 0 {
        // every point of S⁰ has an empty rim; nothing finer to say at n = 0
        let class = if is_zero_sphere(g) {
            PointClass::Interior
        } else {
            PointClass::Defective
        };
        g.points().iter().map(|&p| (p, class)).collect()
    } else {
        (0..g.len())
            .map(|i| (g.point(i), checker.classify_index(g, i, n)))
            .collect()
    };
    let connected = g.is_connected();
    let is_surface = if n == 0 {
        is_zero_sphere(g)
    } else {
        connected && points.values().all(|&c| c == PointClass::Interior)
    };
    let no_defects = points.values().all(|&c| c != PointClass::Defective);
    let is_surface_with_boundary = if n == 0 {
        is_surface
    } else {
        connected && no_defects
    };

    let boundary: Vec<PointId> = points
        .iter()
        .filter(|(_, &c)| c == PointClass::Boundary)
        .map(|(&p, _)| p)
        .collect();
    let boundary_components = g
        .induced(&boundary)
        .expect("boundary points belong to the space")
        .connected_components()
        .iter()
        .enumerate()
        .map(|(i, c)| SpaceFile::from_space(format!("boundary-{}", i + 1), c))
        .collect();

    let tri = triangles(g).len();
    let orientable = if n == 2 && is_surface_with_boundary {
        is_orientable(g).ok()
    } else {
        None
    };
    SurfaceReport {
        dimension: n,
        is_surface,
        is_surface_with_boundary,
        points,
        vertex_count: g.len(),
        edge_count: g.edge_count(),
        triangle_count: tri,
        euler: g.len() as i64 - g.edge_count() as i64 + tri as i64,
        orientable,
        boundary_components,
        boundary_convention: BOUNDARY_CONVENTION.to_string(),
    }
}

/// Alias of [`surface_report`] matching the name used for surfaces with
/// boundary; the report covers both the closed and the bounded verdict.
pub fn is_surface_with_boundary(g: &DigitalSpace, n: usize) -> SurfaceReport {
    surface_report(g, n)
}
