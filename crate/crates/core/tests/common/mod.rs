#![allow(dead_code)]

use digispace::catalog::{
    build_ball, build_cycle, build_min_sphere, build_moebius_12, build_square_grid, build_tri_grid,
    projective_plane_11,
};
use digispace::parabolic::{CoefficientMatrix, Field};
use digispace::space::{DigitalSpace, PointId};
use rand::Rng;

/// Catalog spaces used for randomized trials, with a display name.
pub fn trial_spaces() -> Vec<(&'static str, DigitalSpace)> {
    vec![
        ("min-sphere-1", build_min_sphere(1).unwrap()),
        ("min-sphere-2", build_min_sphere(2).unwrap()),
        ("min-sphere-3", build_min_sphere(3).unwrap()),
        ("cycle-7", build_cycle(7).unwrap()),
        ("ball-2", build_ball(2).unwrap()),
        ("ball-3", build_ball(3).unwrap()),
        ("square-grid-4x3", build_square_grid(4, 3).unwrap()),
        ("tri-grid-4x4", build_tri_grid(4, 4).unwrap()),
        ("moebius12", build_moebius_12()),
        ("projective-plane-11", projective_plane_11()),
    ]
}

/// Symmetric, doubly stochastic: independent weight per edge, remainder on
/// the diagonal.
pub fn random_symmetric<R: Rng>(g: &DigitalSpace, rng: &mut R) -> CoefficientMatrix {
    let cap = 1.0 / g.max_degree().max(1) as f64;
    let mut entries = Vec::new();
    let mut diag = vec![1.0; g.len()];
    for (a, b) in g.edges() {
        let w = rng.gen_range(0.0..cap);
        entries.push((a, b, w));
        entries.push((b, a, w));
        diag[g.index_of(a).unwrap()] -= w;
        diag[g.index_of(b).unwrap()] -= w;
    }
    for (i, d) in diag.into_iter().enumerate() {
        entries.push((g.point(i), g.point(i), d));
    }
    CoefficientMatrix::from_entries(g, entries).unwrap()
}

/// Column-stochastic, generally asymmetric: each column spreads over the
/// ball of its point with random positive weights.
pub fn random_column_stochastic<R: Rng>(g: &DigitalSpace, rng: &mut R) -> CoefficientMatrix {
    let mut entries = Vec::new();
    for &k in g.points() {
        let mut ball = g.neighbors(k).unwrap();
        ball.push(k);
        let w: Vec<f64> = ball.iter().map(|_| rng.gen_range(0.01..1.0)).collect();
        let s: f64 = w.iter().sum();
        for (&p, x) in ball.iter().zip(w) {
            entries.push((p, k, x / s));
        }
    }
    CoefficientMatrix::from_entries(g, entries).unwrap()
}

/// Convex mix of a lazy uniform matrix and a random column-stochastic one.
pub fn random_perturbed<R: Rng>(g: &DigitalSpace, rng: &mut R) -> CoefficientMatrix {
    let w = rng.gen_range(0.01..=1.0) / g.max_degree().max(1) as f64;
    let base = CoefficientMatrix::lazy_uniform(g, w).unwrap();
    let noise = random_column_stochastic(g, rng);
    let eps = rng.gen_range(0.0..1.0);
    let mut entries = Vec::new();
    for i in 0..g.len() {
        for j in 0..g.len() {
            let v = (1.0 - eps) * base.get(i, j) + eps * noise.get(i, j);
            if v != 0.0 {
                entries.push((g.point(i), g.point(j), v));
            }
        }
    }
    CoefficientMatrix::from_entries(g, entries).unwrap()
}

pub fn random_field<R: Rng>(g: &DigitalSpace, rng: &mut R) -> Field {
    Field {
        t: 0,
        values: (0..g.len()).map(|_| rng.gen_range(-10.0..10.0)).collect(),
    }
}

pub fn pid(v: u32) -> PointId {
    PointId(v)
}
