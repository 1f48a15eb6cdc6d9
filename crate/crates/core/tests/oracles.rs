//! Expected values computed by routes independent of the library code paths:
//! brute-force enumeration, hand substitution, a second eigensolver and dense
//! matrix powers.

mod common;

use common::{pid, trial_spaces};
use digispace::catalog::{build_min_sphere, build_moebius_12, projective_plane_11};
use digispace::parabolic::{
    matrix_power, run, spectral_solve, stationary_default, step, symmetric_eigen,
    CoefficientMatrix, Field,
};
use digispace::space::DigitalSpace;
use digispace::topology::{euler_characteristic, triangles};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn brute_triangles(g: &DigitalSpace) -> usize {
    let p = g.points();
    let mut count = 0;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            for c in b + 1..p.len() {
                if g.has_edge(p[a], p[b]) && g.has_edge(p[b], p[c]) && g.has_edge(p[a], p[c]) {
                    count += 1;
                }
            }
        }
    }
    count
}

#[test]
fn triangle_counts_by_enumeration() {
    let oct = build_min_sphere(2).unwrap();
    assert_eq!(brute_triangles(&oct), 8);
    assert_eq!(triangles(&oct).len(), 8);

    let m = build_moebius_12();
    assert_eq!(brute_triangles(&m), 16);
    assert_eq!(triangles(&m).len(), 16);
    assert_eq!(euler_characteristic(&m), 12 - 28 + 16);

    let pp = projective_plane_11();
    assert_eq!(pp.edge_count(), 30);
    assert_eq!(brute_triangles(&pp), 20);
    assert_eq!(euler_characteristic(&pp), 11 - 30 + 20);

    for (name, g) in trial_spaces() {
        assert_eq!(brute_triangles(&g), triangles(&g).len(), "{name}");
    }
}

#[test]
fn octahedron_rims_by_enumeration() {
    // every vertex of the octahedron is adjacent to all but its antipode
    let oct = build_min_sphere(2).unwrap();
    for &v in oct.points() {
        let others: Vec<_> = oct.points().iter().copied().filter(|&w| w != v).collect();
        let nbrs: Vec<_> = others.iter().copied().filter(|&w| oct.has_edge(v, w)).collect();
        assert_eq!(nbrs.len(), 4);
        let rim = oct.rim(v).unwrap();
        assert_eq!(rim.points(), nbrs.as_slice());
        let mut rim_edges = 0;
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                rim_edges += usize::from(oct.has_edge(a, b));
            }
        }
        assert_eq!(rim_edges, 4);
        assert_eq!(rim.edge_count(), 4);
    }
}

#[test]
fn moebius_first_step_by_substitution() {
    // f¹_1 = 0.88·12; each neighbour of 1 receives 0.03·12
    let g = build_moebius_12();
    let c = CoefficientMatrix::lazy_uniform(&g, 0.03).unwrap();
    let f0 = Field::from_points(&g, [(pid(1), 12.0)]).unwrap();
    let f1 = step(&c, &f0, None).unwrap();
    let expected = [10.56, 0.36, 0.0, 0.0, 0.0, 0.0, 0.0, 0.36, 0.36, 0.36, 0.0, 0.0];
    for (got, want) in f1.values.iter().zip(expected) {
        assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
    }
}

#[test]
fn jacobi_matches_nalgebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (name, g) in trial_spaces() {
        let c = common::random_symmetric(&g, &mut rng);
        let dense = c.to_dense();
        let n = dense.len();
        let m = DMatrix::from_fn(n, n, |i, j| dense[i][j]);
        let mut reference: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        reference.sort_by(|a, b| b.total_cmp(a));
        let ours = symmetric_eigen(&dense);
        for (a, b) in ours.values.iter().zip(&reference) {
            assert!((a - b).abs() < 1e-12, "{name}: {a} vs {b}");
        }
    }
}

#[test]
fn stationary_matches_matrix_power_columns() {
    for (name, g) in trial_spaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let c = common::random_column_stochastic(&g, &mut rng);
        let st = stationary_default(&c).unwrap();
        let limit = matrix_power(&c, 1 << 16);
        for row in 0..g.len() {
            for col in 0..g.len() {
                assert!(
                    (limit[row][col] - st.vector[row]).abs() < 1e-10,
                    "{name}: C^inf[{row}][{col}]"
                );
            }
        }
        assert!(st.vector.iter().all(|&v| v > 0.0));
        assert!((st.vector.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn spectral_closed_form_matches_iteration_on_catalog() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (name, g) in trial_spaces() {
        let w = 1.0 / (g.max_degree() as f64 + 1.0);
        for c in [
            CoefficientMatrix::lazy_uniform(&g, w).unwrap(),
            common::random_symmetric(&g, &mut rng),
        ] {
            let f0 = common::random_field(&g, &mut rng);
            let sol = spectral_solve(&c, &f0).unwrap();
            assert!(sol.max_residual() <= 1e-10, "{name}");
            assert!(sol.eigenvalues.iter().all(|l| l.abs() <= 1.0 + 1e-12));
            let traj = run(&c, &f0, None, 100).unwrap();
            for f in traj.fields() {
                assert!(sol.evaluate(f.t).max_abs_diff(f) <= 1e-9, "{name} t={}", f.t);
            }
            assert!(sol.evaluate(0).max_abs_diff(&f0) <= 1e-10);
        }
    }
}
