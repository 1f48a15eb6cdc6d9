//! Backtracking search for closed digital 2-surfaces with prescribed degrees.
//!
//! Candidate edges are decided one at a time in a fixed order, trying
//! "present" before "absent". After every decision the partial graph is
//! pruned against necessary conditions of a closed 2-surface whose rims are
//! induced cycles of length at least four:
//!
//! * degree bounds per point and the exact edge total;
//! * every present edge lies in exactly two triangles, so it has at most two
//!   present and at least two possible common neighbours;
//! * the two common neighbours of an edge are not adjacent (no `K4`).
//!
//! A complete assignment is accepted only if the topology checks confirm the
//! requested surface. Under the lexicographic order the first accepted graph
//! is the one whose sorted edge list is lexicographically smallest.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::io::{FormatError, SpaceFile};
use crate::space::DigitalSpace;
use crate::topology::surface_report;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("inconsistent search spec: {0}")]
    Inconsistent(String),
    #[error("unsupported search spec: {0}")]
    Unsupported(String),
    #[error("search space exhausted after {nodes} nodes without a solution")]
    Exhausted { nodes: u64 },
    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
}

/// Order in which candidate edges are decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ExplorationOrder {
    /// Pairs `(a, b)`, `a < b`, in lexicographic order.
    #[default]
    Lexicographic,
    /// Points visited in an order shuffled by a seeded ChaCha8 generator;
    /// pairs are lexicographic in that order.
    Shuffled(u64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub points: usize,
    /// Target degree of point `i + 1`.
    pub degrees: Option<Vec<usize>>,
    pub euler: i64,
    pub orientable: bool,
    pub boundary_components: usize,
    /// Maximum number of search nodes.
    pub max_nodes: u64,
    pub time_budget_secs: Option<f64>,
    #[serde(default)]
    pub order: ExplorationOrder,
}

impl SearchSpec {
    /// Eleven points; point 1 of degree 4, points 2–5, 10, 11 of degree 6 and
    /// points 6–9 of degree 5; χ = 1, non-orientable, closed.
    pub fn projective_plane_11() -> Self {
        SearchSpec {
            points: 11,
            degrees: Some(vec![4, 6, 6, 6, 6, 5, 5, 5, 5, 6, 6]),
            euler: 1,
            orientable: false,
            boundary_components: 0,
            max_nodes: 50_000_000,
            time_budget_secs: Some(600.0),
            order: ExplorationOrder::Lexicographic,
        }
    }

    /// Hex digest of the fields that determine the result (budgets excluded).
    pub fn digest(&self) -> String {
        let key = serde_json::json!({
            "points": self.points,
            "degrees": self.degrees,
            "euler": self.euler,
            "orientable": self.orientable,
            "boundary_components": self.boundary_components,
            "order": self.order,
        });
        Sha256::digest(key.to_string().as_bytes())
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// Number of edges a closed surface meeting this spec must have.
    fn check(&self) -> Result<usize, SearchError> {
        let n = self.points;
        if self.boundary_components != 0 {
            return Err(SearchError::Unsupported(
                "only closed surfaces (no boundary) can be searched".into(),
            ));
        }
        if !(4..=64).contains(&n) {
            return Err(SearchError::Unsupported(format!(
                "point count {n} outside 4..=64"
            )));
        }
        // closed 2-surface: 3T = 2E, so χ = V − E/3
        let v = n as i64;
        let edges = 3 * (v - self.euler);
        if edges <= 0 {
            return Err(SearchError::Inconsistent(format!(
                "euler characteristic {} impossible on {n} points",
                self.euler
            )));
        }
        if let Some(deg) = &self.degrees {
            if deg.len() != n {
                return Err(SearchError::Inconsistent(format!(
                    "{} degree targets for {n} points",
                    deg.len()
                )));
            }
            if let Some((i, &d)) = deg.iter().enumerate().find(|(_, &d)| d < 4) {
                return Err(SearchError::Inconsistent(format!(
                    "point {} has degree {d}; rims must be cycles of length >= 4",
                    i + 1
                )));
            }
            if let Some((i, &d)) = deg.iter().enumerate().find(|(_, &d)| d >= n) {
                return Err(SearchError::Inconsistent(format!(
                    "point {} has degree {d} with only {n} points",
                    i + 1
                )));
            }
            let sum: usize = deg.iter().sum();
            if sum % 2 != 0 {
                return Err(SearchError::Inconsistent(format!("degree sum {sum} is odd")));
            }
            if (sum / 2) as i64 != edges {
                return Err(SearchError::Inconsistent(format!(
                    "degree sum {sum} gives {} edges, euler {} needs {edges}",
                    sum / 2,
                    self.euler
                )));
            }
        }
        Ok(edges as usize)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub space: DigitalSpace,
    pub nodes: u64,
}

struct Search<'a> {
    spec: &'a SearchSpec,
    n: usize,
    pairs: Vec<(usize, usize)>,
    lo: Vec<u32>,
    hi: Vec<u32>,
    edges: usize,
    yes: Vec<u64>,
    open: Vec<u64>,
    nodes: u64,
    deadline: Option<Instant>,
}

enum Step {
    Found(DigitalSpace),
    Budget,
    None,
}

impl Search<'_> {
    fn feasible(&self) -> bool {
        let mut yes_total = 0;
        let mut open_total = 0;
        for v in 0..self.n {
            let y = self.yes[v].count_ones();
            let o = self.open[v].count_ones();
            if y > self.hi[v] || y + o < self.lo[v] {
                return false;
            }
            yes_total += y as usize;
            open_total += o as usize;
        }
        let (yes_total, open_total) = (yes_total / 2, open_total / 2);
        if yes_total > self.edges || yes_total + open_total < self.edges {
            return false;
        }
        for a in 0..self.n {
            let mut rest = self.yes[a] >> (a + 1);
            while rest != 0 {
                let b = a + 1 + rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let common = self.yes[a] & self.yes[b];
                match common.count_ones() {
                    0 | 1 => {}
                    2 => {
                        let c = common.trailing_zeros() as usize;
                        let d = 63 - common.leading_zeros() as usize;
                        if self.yes[c] >> d & 1 == 1 {
                            return false;
                        }
                    }
                    _ => return false,
                }
                let possible =
                    (self.yes[a] | self.open[a]) & (self.yes[b] | self.open[b]);
                if possible.count_ones() < 2 {
                    return false;
                }
            }
        }
        true
    }

    fn set(&mut self, a: usize, b: usize, present: bool) {
        self.open[a] &= !(1 << b);
        self.open[b] &= !(1 << a);
        if present {
            self.yes[a] |= 1 << b;
            self.yes[b] |= 1 << a;
        }
    }

    fn unset(&mut self, a: usize, b: usize) {
        self.open[a] |= 1 << b;
        self.open[b] |= 1 << a;
        self.yes[a] &= !(1 << b);
        self.yes[b] &= !(1 << a);
    }

    fn accept(&self) -> Option<DigitalSpace> {
        let mut edges = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.yes[a] >> b & 1 == 1 {
                    edges.push((a as u32 + 1, b as u32 + 1));
                }
            }
        }
        let g = DigitalSpace::new(1..=self.n as u32, edges).ok()?;
        let r = surface_report(&g, 2);
        let ok = r.is_surface
            && r.euler == self.spec.euler
            && r.orientable == Some(self.spec.orientable)
            && r.boundary_components.len() == self.spec.boundary_components;
        ok.then_some(g)
    }

    fn descend(&mut self, depth: usize) -> Step {
        self.nodes += 1;
        if self.nodes > self.spec.max_nodes {
            return Step::Budget;
        }
        if self.nodes % 4096 == 0 && self.deadline.is_some_and(|d| Instant::now() > d) {
            return Step::Budget;
        }
        if depth == self.pairs.len() {
            return match self.accept() {
                Some(g) => Step::Found(g),
                None => Step::None,
            };
        }
        let (a, b) = self.pairs[depth];
        for present in [true, false] {
            self.set(a, b, present);
            if self.feasible() {
                match self.descend(depth + 1) {
                    Step::None => {}
                    other => {
                        self.unset(a, b);
                        return other;
                    }
                }
            }
            self.unset(a, b);
        }
        Step::None
    }
}

/// Searches for a closed 2-surface matching `spec`.
pub fn search_closed_surface(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    let edges = spec.check()?;
    let n = spec.points;
    let mut rank: Vec<usize> = (0..n).collect();
    if let ExplorationOrder::Shuffled(seed) = spec.order {
        rank.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (rank[i].min(rank[j]), rank[i].max(rank[j])))
        .collect();
    let (lo, hi) = match &spec.degrees {
        Some(d) => (
            d.iter().map(|&x| x as u32).collect(),
            d.iter().map(|&x| x as u32).collect(),
        ),
        None => (vec![4; n], vec![n as u32 - 1; n]),
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut search = Search {
        spec,
        n,
        pairs,
        lo,
        hi,
        edges,
        yes: vec![0; n],
        open: (0..n).map(|v| all & !(1 << v)).collect(),
        nodes: 0,
        deadline: spec
            .time_budget_secs
            .map(|s| Instant::now() + Duration::from_secs_f64(s)),
    };
    match search.descend(0) {
        Step::Found(space) => Ok(SearchOutcome {
            space,
            nodes: search.nodes,
        }),
        Step::Budget => Err(SearchError::BudgetExceeded {
            nodes: search.nodes,
        }),
        Step::None => Err(SearchError::Exhausted {
            nodes: search.nodes,
        }),
    }
}

/// Searches for an 11-point digital projective plane.
pub fn find_projective_plane_11(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    if spec.points != 11 || spec.euler != 1 || spec.orientable {
        return Err(SearchError::Inconsistent(
            "a projective plane on 11 points needs points = 11, euler = 1, non-orientable".into(),
        ));
    }
    search_closed_surface(spec)
}

#[derive(Debug, Error)]
pub enum CachedSearchError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("cached file {0} does not hold a valid space")]
    BadCache(PathBuf),
}

/// Path of the cache file for `spec` inside `dir`.
pub fn cache_path(dir: &Path, spec: &SearchSpec) -> PathBuf {
    dir.join(format!("projective-plane-11-{}.json", spec.digest()))
}

/// Like [`find_projective_plane_11`], but reads the result from `dir` when a
/// cache file for the same spec exists and writes it there otherwise.
/// Returns the space and whether it came from the cache.
pub fn find_projective_plane_11_cached(
    spec: &SearchSpec,
    dir: &Path,
) -> Result<(DigitalSpace, bool), CachedSearchError> {
    let path = cache_path(dir, spec);
    if path.exists() {
        let file = SpaceFile::read(&path)?;
        let space = file
            .to_space()
            .map_err(|_| CachedSearchError::BadCache(path.clone()))?;
        return Ok((space, true));
    }
    let found = find_projective_plane_11(spec)?;
    SpaceFile::from_space("projective-plane-11", &found.space).write(&path)?;
    Ok((found.space, false))
}
