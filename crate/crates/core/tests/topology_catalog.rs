mod common;

use common::pid;
use digispace::catalog::{
    build_ball, build_by_name, build_cycle, build_min_sphere, build_moebius_12, build_square_grid,
    build_tri_grid, cache_path, catalog_selftest, default_catalog, find_projective_plane_11,
    find_projective_plane_11_cached, projective_plane_11, CatalogEntry, ExplorationOrder,
    SearchSpec,
};
use digispace::space::{join, DigitalSpace};
use digispace::topology::{
    classify_point, edge_triangle_counts, is_n_surface, is_n_surface_by_definition, is_orientable,
    surface_report, PointClass,
};

#[test]
fn catalog_is_self_validating() {
    let report = catalog_selftest(&default_catalog());
    for r in &report.results {
        assert!(r.passed, "{}: {:?}", r.name, r.problems);
    }
}

#[test]
fn corrupted_moebius_fails_selftest() {
    let m = build_moebius_12();
    let edges: Vec<(u32, u32)> = m
        .edges()
        .into_iter()
        .filter(|&(a, b)| (a.0, b.0) != (9, 10))
        .map(|(a, b)| (a.0, b.0))
        .collect();
    let broken = DigitalSpace::new(1..=12, edges).unwrap();
    let mut entries: Vec<CatalogEntry> = default_catalog()
        .into_iter()
        .filter(|e| e.name == "moebius12")
        .collect();
    entries[0].space = broken;
    let report = catalog_selftest(&entries);
    assert!(!report.all_passed());
    assert!(report.results[0]
        .problems
        .iter()
        .any(|p| p.contains("defective")));
}

#[test]
fn moebius_structure() {
    let m = build_moebius_12();
    assert_eq!((m.len(), m.edge_count()), (12, 28));
    assert_eq!(m.degree(pid(10)).unwrap(), 6);
    assert_eq!(m.degree(pid(2)).unwrap(), 4);
    assert_eq!(m.connected_components().len(), 1);

    let r = surface_report(&m, 2);
    assert_eq!(r.interior_points(), (9..=12).map(pid).collect::<Vec<_>>());
    assert_eq!(r.boundary_points(), (1..=8).map(pid).collect::<Vec<_>>());
    assert_eq!(r.euler, 0);
    assert_eq!(r.orientable, Some(false));
    assert_eq!(r.boundary_components.len(), 1);
    let circle = r.boundary_components[0].to_space().unwrap();
    assert_eq!(circle, build_cycle(8).unwrap());
    assert!(is_n_surface(&circle, 1));

    for v in 9..=12 {
        let rim = m.rim(pid(v)).unwrap();
        assert_eq!(rim.len(), 6);
        assert!(is_n_surface(&rim, 1));
    }
    let counts = edge_triangle_counts(&m);
    for ((a, b), k) in counts {
        let boundary_edge = a.0 <= 8 && b.0 <= 8;
        assert_eq!(k, if boundary_edge { 1 } else { 2 }, "({a},{b})");
    }
}

#[test]
fn projective_plane_structure() {
    let pp = projective_plane_11();
    let degrees: Vec<usize> = pp.points().iter().map(|&p| pp.degree(p).unwrap()).collect();
    assert_eq!(degrees, vec![4, 6, 6, 6, 6, 5, 5, 5, 5, 6, 6]);
    for &v in pp.points() {
        let rim = pp.rim(v).unwrap();
        assert!(rim.len() >= 4 && is_n_surface(&rim, 1));
    }
    let r = surface_report(&pp, 2);
    assert!(r.is_surface);
    assert_eq!((r.euler, r.triangle_count), (1, 20));
    assert_eq!(r.orientable, Some(false));
    assert!(r.boundary_points().is_empty());
    assert!(edge_triangle_counts(&pp).values().all(|&k| k == 2));
}

#[test]
fn search_reproduces_pinned_projective_plane() {
    let spec = SearchSpec::projective_plane_11();
    let a = find_projective_plane_11(&spec).unwrap();
    let b = find_projective_plane_11(&spec).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.space, projective_plane_11());
}

#[test]
fn shuffled_order_is_deterministic_and_valid() {
    let spec = SearchSpec {
        order: ExplorationOrder::Shuffled(3),
        ..SearchSpec::projective_plane_11()
    };
    let a = find_projective_plane_11(&spec).unwrap();
    let b = find_projective_plane_11(&spec).unwrap();
    assert_eq!(a.space, b.space);
    let r = surface_report(&a.space, 2);
    assert!(r.is_surface && r.euler == 1 && r.orientable == Some(false));
}

#[test]
fn search_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SearchSpec::projective_plane_11();
    let (first, cached) = find_projective_plane_11_cached(&spec, dir.path()).unwrap();
    assert!(!cached);
    assert!(cache_path(dir.path(), &spec).exists());
    let (second, cached) = find_projective_plane_11_cached(&spec, dir.path()).unwrap();
    assert!(cached);
    assert_eq!(first, second);
}

#[test]
fn minimal_spheres_and_join_dimension() {
    let spheres: Vec<DigitalSpace> = (0..=3).map(|n| build_min_sphere(n).unwrap()).collect();
    for (m, s) in spheres.iter().enumerate() {
        assert!(is_n_surface(s, m), "S^{m}");
        assert!(is_n_surface_by_definition(s, m), "S^{m}");
        for &v in s.points() {
            let rim = s.rim(v).unwrap();
            if m > 0 {
                assert!(is_n_surface(&rim, m - 1));
                assert_eq!(rim.len(), spheres[m - 1].len());
            }
        }
    }
    // cycles are 1-surfaces too
    let surfaces: Vec<(usize, DigitalSpace)> = spheres
        .iter()
        .cloned()
        .enumerate()
        .chain([(1, build_cycle(5).unwrap()), (1, build_cycle(6).unwrap())])
        .collect();
    for (m, g) in &surfaces {
        for (k, h) in &surfaces {
            if m + k + 1 <= 3 {
                assert!(is_n_surface(&join(g, h), m + k + 1), "join dims {m} {k}");
            }
        }
    }
    assert!(build_min_sphere(4).map(|s| is_n_surface(&s, 4)).unwrap());
}

#[test]
fn balls_have_interior_apex() {
    for n in 1..=3 {
        let b = build_ball(n).unwrap();
        assert_eq!(classify_point(&b, pid(1), n).unwrap(), PointClass::Interior);
        for &v in &b.points()[1..] {
            assert_eq!(classify_point(&b, v, n).unwrap(), PointClass::Boundary, "ball {n}");
        }
    }
}

#[test]
fn square_grid_is_not_a_plane() {
    let g = build_square_grid(3, 3).unwrap();
    assert_eq!(classify_point(&g, pid(5), 2).unwrap(), PointClass::Defective);
    let rim = g.rim(pid(5)).unwrap();
    assert_eq!((rim.len(), rim.edge_count()), (4, 0));
    for (w, h) in [(3, 3), (4, 5), (6, 3)] {
        let g = build_square_grid(w, h).unwrap();
        assert!(!is_n_surface(&g, 2));
        let r = surface_report(&g, 2);
        assert!(!r.is_surface_with_boundary);
        assert_eq!(r.triangle_count, 0);
        // every point away from the border is defective
        for y in 1..h - 1 {
            for x in 1..w - 1 {
                assert_eq!(r.points[&pid(y * w + x + 1)], PointClass::Defective);
            }
        }
    }
}

#[test]
fn triangulated_grid_is_a_disk() {
    let g = build_tri_grid(4, 4).unwrap();
    let r = surface_report(&g, 2);
    assert!(r.is_surface_with_boundary && !r.is_surface);
    assert_eq!(r.interior_points(), [6, 7, 10, 11].map(pid).to_vec());
    assert_eq!(r.boundary_points().len(), 12);
    assert_eq!(r.euler, 1);
    assert_eq!(is_orientable(&g), Ok(true));
    for v in [6, 7, 10, 11] {
        let rim = g.rim(pid(v)).unwrap();
        assert_eq!(rim.len(), 6);
        assert!(is_n_surface(&rim, 1));
    }
}

#[test]
fn catalog_names_cover_every_constructor() {
    assert_eq!(build_by_name("moebius12").unwrap(), build_moebius_12());
    assert_eq!(build_by_name("ball-2").unwrap(), build_ball(2).unwrap());
    assert_eq!(build_by_name("cycle-6").unwrap(), build_cycle(6).unwrap());
    assert_eq!(
        build_by_name("square-grid-3x4").unwrap(),
        build_square_grid(3, 4).unwrap()
    );
    assert_eq!(build_by_name("tri-grid-3x3").unwrap(), build_tri_grid(3, 3).unwrap());
    assert_eq!(build_by_name("projective-plane-11").unwrap().len(), 11);
}
