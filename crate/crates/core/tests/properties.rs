mod common;

use common::trial_spaces;
use digispace::parabolic::{
    check_eigen_sum_zero, is_irreducible, is_primitive, l1_norm, spectral_solve, step, step_dense,
    CoefficientMatrix, Field,
};
use digispace::space::{join, DigitalSpace, PointId};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_space() -> impl Strategy<Value = DigitalSpace> {
    (1u32..9).prop_flat_map(|n| {
        let pairs: Vec<(u32, u32)> = (1..=n)
            .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
            .collect();
        let m = pairs.len();
        proptest::collection::vec(any::<bool>(), m).prop_map(move |keep| {
            let edges = pairs
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(&e, _)| e);
            DigitalSpace::new(1..=n, edges).unwrap()
        })
    })
}

fn revalidate(g: &DigitalSpace) -> DigitalSpace {
    let edges = g.edges().into_iter().map(|(a, b)| (a.0, b.0));
    DigitalSpace::new_strict(g.points().iter().copied(), edges).unwrap()
}

proptest! {
    #[test]
    fn rim_and_ball_are_valid_induced_spaces(g in arb_space()) {
        for &v in g.points() {
            let rim = g.rim(v).unwrap();
            let ball = g.ball(v).unwrap();
            prop_assert!(!rim.contains(v));
            prop_assert_eq!(ball.len(), rim.len() + 1);
            prop_assert_eq!(ball.edge_count(), rim.edge_count() + rim.len());
            prop_assert_eq!(&revalidate(&rim), &rim);
            prop_assert_eq!(&revalidate(&ball), &ball);
            for (a, b) in rim.edges() {
                prop_assert!(g.has_edge(a, b));
            }
            for &a in rim.points() {
                for &b in rim.points() {
                    prop_assert_eq!(rim.has_edge(a, b), g.has_edge(a, b));
                }
            }
        }
    }

    #[test]
    fn join_counts(g in arb_space(), h in arb_space()) {
        let j = join(&g, &h);
        prop_assert_eq!(j.len(), g.len() + h.len());
        prop_assert_eq!(j.edge_count(), g.edge_count() + h.edge_count() + g.len() * h.len());
        for &v in g.points() {
            prop_assert_eq!(j.degree(v).unwrap(), g.degree(v).unwrap() + h.len());
        }
    }

    #[test]
    fn components_partition_points(g in arb_space()) {
        let comps = g.connected_components();
        let mut all: Vec<PointId> = comps.iter().flat_map(|c| c.points().to_vec()).collect();
        all.sort();
        prop_assert_eq!(all.as_slice(), g.points());
        for w in comps.windows(2) {
            prop_assert!(w[0].points()[0] < w[1].points()[0]);
        }
        let edges: usize = comps.iter().map(DigitalSpace::edge_count).sum();
        prop_assert_eq!(edges, g.edge_count());
    }

    #[test]
    fn step_invariants(seed in any::<u64>(), which in 0usize..10, kind in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, g) = trial_spaces().swap_remove(which);
        let c = match kind {
            0 => common::random_symmetric(&g, &mut rng),
            1 => common::random_column_stochastic(&g, &mut rng),
            _ => common::random_perturbed(&g, &mut rng),
        };
        prop_assert!(c.validate().is_valid());
        let f = common::random_field(&g, &mut rng);
        let sparse = step(&c, &f, None).unwrap();
        let dense = step_dense(&c, &f, None).unwrap();
        prop_assert!(sparse.max_abs_diff(&dense) <= 1e-12);
        prop_assert!(l1_norm(&sparse) <= l1_norm(&f) + 1e-12);
        prop_assert!((sparse.sum() - f.sum()).abs() <= 1e-12);
    }

    #[test]
    fn lazy_uniform_spectrum(which in 0usize..10, frac in 0.05f64..=1.0) {
        let (_, g) = trial_spaces().swap_remove(which);
        let c = CoefficientMatrix::lazy_uniform(&g, frac / g.max_degree() as f64).unwrap();
        prop_assert!(is_irreducible(&c));
        let f0 = Field::zeros(&g);
        let sol = spectral_solve(&c, &f0).unwrap();
        prop_assert!(sol.eigenvalues.iter().all(|l| l.abs() <= 1.0 + 1e-12));
        prop_assert!(sol.max_residual() <= 1e-10);
        if is_primitive(&c).unwrap() {
            prop_assert_eq!(sol.unit_eigenvalue_count(), 1);
            prop_assert!(check_eigen_sum_zero(&sol).ok);
        }
    }
}
