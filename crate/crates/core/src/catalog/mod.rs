//! Constructors for the standard digital spaces: minimal spheres and balls,
//! square and triangulated grids, the 12-point Moebius strip and an 11-point
//! projective plane.
//!
//! Every entry carries the summary it is expected to produce under the
//! topology checks, and [`catalog_selftest`] re-verifies them.

mod search;

use serde::Serialize;
use thiserror::Error;

use crate::io::SpaceFile;
use crate::space::{join, DigitalSpace, PointId};
use crate::topology::surface_report;

pub use search::{
    cache_path, find_projective_plane_11, find_projective_plane_11_cached, search_closed_surface,
    CachedSearchError, ExplorationOrder, SearchError, SearchOutcome, SearchSpec,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("a digital 1-sphere needs at least 4 points, got {0}")]
    CycleTooSmall(u32),
    #[error("dimension {0} outside the supported range {1:?}")]
    DimensionOutOfRange(usize, std::ops::RangeInclusive<usize>),
    #[error("grid {0}x{1} is too small (need at least 3x3)")]
    GridTooSmall(u32, u32),
    #[error("unknown catalog space `{0}`")]
    UnknownName(String),
}

pub fn build_cycle(k: u32) -> Result<DigitalSpace, CatalogError> {
    if k < 4 {
        return Err(CatalogError::CycleTooSmall(k));
    }
    Ok(DigitalSpace::new(1..=k, (1..=k).map(|i| (i, i % k + 1))).unwrap())
}

fn zero_sphere() -> DigitalSpace {
    DigitalSpace::new([1, 2], []).unwrap()
}

/// Join of `n + 1` copies of `S⁰`, labelled `1..=2(n+1)`.
pub fn build_min_sphere(n: usize) -> Result<DigitalSpace, CatalogError> {
    if n > 4 {
        return Err(CatalogError::DimensionOutOfRange(n, 0..=4));
    }
    Ok((0..n).fold(zero_sphere(), |acc, _| join(&acc, &zero_sphere())))
}

/// Cone over the minimal (n−1)-sphere. The apex is point 1.
pub fn build_ball(n: usize) -> Result<DigitalSpace, CatalogError> {
    if !(1..=4).contains(&n) {
        return Err(CatalogError::DimensionOutOfRange(n, 1..=4));
    }
    let apex = DigitalSpace::new([1], []).unwrap();
    Ok(join(&apex, &build_min_sphere(n - 1)?))
}

fn grid_label(w: u32, x: u32, y: u32) -> u32 {
    y * w + x + 1
}

fn grid_edges(w: u32, h: u32, diagonals: bool) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let p = grid_label(w, x, y);
            if x + 1 < w {
                edges.push((p, grid_label(w, x + 1, y)));
            }
            if y + 1 < h {
                edges.push((p, grid_label(w, x, y + 1)));
            }
            if diagonals && x + 1 < w && y + 1 < h {
                edges.push((p, grid_label(w, x + 1, y + 1)));
            }
        }
    }
    edges
}

/// `w × h` lattice with 4-neighbour adjacency; point `(x, y)` has label
/// `y·w + x + 1`.
pub fn build_square_grid(w: u32, h: u32) -> Result<DigitalSpace, CatalogError> {
    if w < 3 || h < 3 {
        return Err(CatalogError::GridTooSmall(w, h));
    }
    Ok(DigitalSpace::new(1..=w * h, grid_edges(w, h, false)).unwrap())
}

/// Square lattice plus the diagonal `(x, y)–(x+1, y+1)` in every cell, so
/// interior rims are hexagons.
pub fn build_tri_grid(w: u32, h: u32) -> Result<DigitalSpace, CatalogError> {
    if w < 3 || h < 3 {
        return Err(CatalogError::GridTooSmall(w, h));
    }
    Ok(DigitalSpace::new(1..=w * h, grid_edges(w, h, true)).unwrap())
}

/// Boundary cycle 1..8, interior cycle 9..12 and the cross edges tying each
/// interior point to two opposite boundary edges.
const MOEBIUS_EDGES: [(u32, u32); 28] = [
    (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 1),
    (9, 10), (10, 11), (11, 12), (12, 9),
    (9, 1), (9, 4), (9, 5), (9, 8),
    (10, 1), (10, 2), (10, 5), (10, 6),
    (11, 2), (11, 3), (11, 6), (11, 7),
    (12, 3), (12, 4), (12, 7), (12, 8),
];

/// The 12-point digital Moebius strip: interior points 9–12, boundary
/// points 1–8.
pub fn build_moebius_12() -> DigitalSpace {
    let g = DigitalSpace::new(1..=12, MOEBIUS_EDGES).unwrap();
    assert_eq!(
        g.neighbors(PointId(10)).unwrap(),
        [1, 2, 5, 6, 9, 11].map(PointId)
    );
    assert_eq!(g.neighbors(PointId(2)).unwrap(), [1, 3, 10, 11].map(PointId));
    g
}

const PROJECTIVE_PLANE_11: &str = include_str!("../../data/projective-plane-11.json");

/// The 11-point projective plane found by [`find_projective_plane_11`] with
/// [`SearchSpec::projective_plane_11`], pinned so that runs are reproducible.
pub fn projective_plane_11() -> DigitalSpace {
    let file: SpaceFile = serde_json::from_str(PROJECTIVE_PLANE_11).expect("bundled space file");
    file.to_space().expect("bundled space is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceKind {
    Closed,
    WithBoundary,
    NotASurface,
}

/// What an entry must produce under [`surface_report`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedSummary {
    pub dimension: usize,
    pub kind: SurfaceKind,
    pub euler: Option<i64>,
    pub orientable: Option<bool>,
    pub boundary_components: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub space: DigitalSpace,
    pub expected: ExpectedSummary,
}

fn entry(name: &str, space: DigitalSpace, expected: ExpectedSummary) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        space,
        expected,
    }
}

fn expect(
    dimension: usize,
    kind: SurfaceKind,
    euler: Option<i64>,
    orientable: Option<bool>,
    boundary_components: usize,
) -> ExpectedSummary {
    ExpectedSummary {
        dimension,
        kind,
        euler,
        orientable,
        boundary_components,
    }
}

/// Names accepted by [`build_by_name`]; `N`, `K`, `W`, `H` are integers.
pub const NAME_PATTERNS: [&str; 7] = [
    "min-sphere-N",
    "ball-N",
    "cycle-K",
    "square-grid-WxH",
    "tri-grid-WxH",
    "moebius12",
    "projective-plane-11",
];

fn parse_dims(s: &str) -> Option<(u32, u32)> {
    let (w, h) = s.split_once('x')?;
    Some((w.parse().ok()?, h.parse().ok()?))
}

pub fn build_by_name(name: &str) -> Result<DigitalSpace, CatalogError> {
    let unknown = || CatalogError::UnknownName(name.to_string());
    match name {
        "moebius12" => return Ok(build_moebius_12()),
        "projective-plane-11" => return Ok(projective_plane_11()),
        _ => {}
    }
    if let Some(n) = name.strip_prefix("min-sphere-") {
        return build_min_sphere(n.parse().map_err(|_| unknown())?);
    }
    if let Some(n) = name.strip_prefix("ball-") {
        return build_ball(n.parse().map_err(|_| unknown())?);
    }
    if let Some(k) = name.strip_prefix("cycle-") {
        return build_cycle(k.parse().map_err(|_| unknown())?);
    }
    if let Some(d) = name.strip_prefix("square-grid-") {
        let (w, h) = parse_dims(d).ok_or_else(unknown)?;
        return build_square_grid(w, h);
    }
    if let Some(d) = name.strip_prefix("tri-grid-") {
        let (w, h) = parse_dims(d).ok_or_else(unknown)?;
        return build_tri_grid(w, h);
    }
    Err(unknown())
}

/// The standard entries with their expected summaries.
pub fn default_catalog() -> Vec<CatalogEntry> {
    use SurfaceKind::*;
    let mut out = Vec::new();
    for n in 0..=3 {
        let (euler, orientable) = if n == 2 { (Some(2), Some(true)) } else { (None, None) };
        out.push(entry(
            &format!("min-sphere-{n}"),
            build_min_sphere(n).unwrap(),
            expect(n, Closed, euler, orientable, 0),
        ));
    }
    for k in [4, 5, 8] {
        out.push(entry(
            &format!("cycle-{k}"),
            build_cycle(k).unwrap(),
            expect(1, Closed, None, None, 0),
        ));
    }
    out.push(entry("ball-1", build_ball(1).unwrap(), expect(1, WithBoundary, None, None, 2)));
    out.push(entry(
        "ball-2",
        build_ball(2).unwrap(),
        expect(2, WithBoundary, Some(1), Some(true), 1),
    ));
    out.push(entry("ball-3", build_ball(3).unwrap(), expect(3, WithBoundary, None, None, 1)));
    out.push(entry(
        "square-grid-3x3",
        build_square_grid(3, 3).unwrap(),
        expect(2, NotASurface, Some(-3), None, 0),
    ));
    out.push(entry(
        "tri-grid-4x4",
        build_tri_grid(4, 4).unwrap(),
        expect(2, WithBoundary, Some(1), Some(true), 1),
    ));
    out.push(entry(
        "moebius12",
        build_moebius_12(),
        expect(2, WithBoundary, Some(0), Some(false), 1),
    ));
    out.push(entry(
        "projective-plane-11",
        projective_plane_11(),
        expect(2, Closed, Some(1), Some(false), 0),
    ));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryResult {
    pub name: String,
    pub passed: bool,
    pub problems: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SelftestReport {
    pub results: Vec<EntryResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> Vec<&EntryResult> {
        self.results.iter().filter(|r| !r.passed).collect()
    }
}

/// Re-runs the topology checks on each entry and compares with its summary.
pub fn check_entry(e: &CatalogEntry) -> EntryResult {
    let x = &e.expected;
    let r = surface_report(&e.space, x.dimension);
    let kind = if r.is_surface {
        SurfaceKind::Closed
    } else if r.is_surface_with_boundary {
        SurfaceKind::WithBoundary
    } else {
        SurfaceKind::NotASurface
    };
    let mut problems = Vec::new();
    if kind != x.kind {
        problems.push(format!("expected {:?}, got {kind:?}", x.kind));
        let defective = r.defective_points();
        if !defective.is_empty() {
            problems.push(format!("defective points {defective:?}"));
        }
    }
    if let Some(euler) = x.euler {
        if r.euler != euler {
            problems.push(format!("euler {} != expected {euler}", r.euler));
        }
    }
    if x.orientable.is_some() && r.orientable != x.orientable {
        problems.push(format!(
            "orientable {:?} != expected {:?}",
            r.orientable, x.orientable
        ));
    }
    if r.boundary_components.len() != x.boundary_components {
        problems.push(format!(
            "{} boundary components != expected {}",
            r.boundary_components.len(),
            x.boundary_components
        ));
    }
    EntryResult {
        name: e.name.clone(),
        passed: problems.is_empty(),
        problems,
    }
}

pub fn catalog_selftest(entries: &[CatalogEntry]) -> SelftestReport {
    SelftestReport {
        results: entries.iter().map(check_entry).collect(),
    }
}
