use proptest::prelude::*;
use swarmlab::diagnostics::{cluster_positions, position_variance};
use swarmlab::population::initialize_population;
use swarmlab::{RngStream, SearchSpace};

fn space_and_point() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (1usize..6).prop_flat_map(|d| {
        (
            prop::collection::vec(-100.0..0.0f64, d),
            prop::collection::vec(0.0..100.0f64, d),
            prop::collection::vec(-1e6..1e6f64, d),
        )
    })
}

proptest! {
    #[test]
    fn clamp_lands_inside_and_is_idempotent((lo, hi, x) in space_and_point()) {
        let space = SearchSpace::new(lo, hi).unwrap();
        let c = space.clamp(&x).unwrap();
        prop_assert!(space.contains(&c));
        prop_assert_eq!(space.clamp(&c).unwrap(), c.clone());
        if space.contains(&x) {
            prop_assert_eq!(c, x);
        }
    }

    #[test]
    fn diversity_ignores_translation(
        pts in prop::collection::vec(prop::collection::vec(-10.0..10.0f64, 3), 2..12),
        shift in prop::collection::vec(-50.0..50.0f64, 3),
    ) {
        let moved: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| p.iter().zip(&shift).map(|(a, b)| a + b).collect())
            .collect();
        let a = position_variance(&pts).unwrap();
        let b = position_variance(&moved).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a), "{} vs {}", a, b);
    }

    #[test]
    fn cluster_sizes_cover_every_point(
        pts in prop::collection::vec(prop::collection::vec(-5.0..5.0f64, 2), 1..30),
        threshold in 0.0..3.0f64,
    ) {
        let report = cluster_positions(&pts, threshold).unwrap();
        prop_assert_eq!(report.cluster_sizes.iter().sum::<usize>(), pts.len());
        prop_assert_eq!(report.cluster_sizes.len(), report.n_clusters);
        prop_assert!(report.n_clusters >= 1 && report.n_clusters <= pts.len());
    }
}

#[test]
fn initial_positions_are_uniform_on_unit_cube() {
    let space = SearchSpace::cube(4, 0.0, 1.0).unwrap();
    let mut rng = RngStream::new(12345);
    let pop = initialize_population(&space, 25_000, false, &mut rng).unwrap();
    let values: Vec<f64> = pop.agents.iter().flat_map(|a| a.position.clone()).collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    assert!((var - 1.0 / 12.0).abs() < 0.005, "variance {var}");
}
