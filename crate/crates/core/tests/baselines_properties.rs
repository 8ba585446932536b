use proptest::prelude::*;
use tcto_core::baselines::{moead_run, nsga2_run, reset_mutation, sbx_crossover, GaConfig, GaFront, ObjectiveMode};
use tcto_core::pareto::dominates;
use tcto_core::seed::rng_from;
use tcto_core::sim::{EnvFactory, SimConfig};

fn world() -> EnvFactory {
    let cfg = SimConfig { num_devices: 6, slots: 10, area_x: 120.0, area_y: 120.0, ..SimConfig::default() };
    EnvFactory::new(cfg, 21)
}

fn small_ga() -> GaConfig {
    GaConfig { pop_size: 12, generations: 6, neighbors: 4, ..GaConfig::default() }
}

fn assert_front(front: &GaFront) {
    assert!(!front.members.is_empty());
    for m in &front.members {
        assert_eq!(m.genes.len(), 30);
        assert!(m.genes.iter().all(|g| (0.0..=1.0).contains(g)));
    }
    let pts = front.points();
    for (i, a) in pts.iter().enumerate() {
        for (j, b) in pts.iter().enumerate() {
            assert!(i == j || !dominates(a, b), "{a:?} dominates {b:?}");
        }
    }
}

proptest! {
    #[test]
    fn variation_keeps_genes_in_bounds(
        a in prop::collection::vec(0.0f64..=1.0, 1..40),
        seed in any::<u64>(),
        eta in 0.0f64..40.0,
        prob in 0.0f64..=1.0,
    ) {
        let mut rng = rng_from(seed);
        let b: Vec<f64> = a.iter().rev().copied().collect();
        let (mut c1, c2) = sbx_crossover(&a, &b, eta, &mut rng);
        prop_assert_eq!(c1.len(), a.len());
        prop_assert!(c1.iter().chain(&c2).all(|g| (0.0..=1.0).contains(g)));
        reset_mutation(&mut c1, prob, &mut rng);
        prop_assert!(c1.iter().all(|g| (0.0..=1.0).contains(g)));
    }
}

#[test]
fn nsga2_front_is_nondominated_in_bounds_and_reproducible() {
    let seeds = [5, 6];
    let a = nsga2_run(&world(), &small_ga(), 9, &seeds, 0.995).unwrap();
    assert_front(&a);
    let b = nsga2_run(&world(), &small_ga(), 9, &seeds, 0.995).unwrap();
    assert_eq!(a.points(), b.points());
    assert_eq!(a.evaluations, 12 * 7);
}

#[test]
fn moead_front_is_nondominated_in_bounds_and_reproducible() {
    let seeds = [5, 6];
    let a = moead_run(&world(), &small_ga(), 9, &seeds, 0.995).unwrap();
    assert_front(&a);
    let b = moead_run(&world(), &small_ga(), 9, &seeds, 0.995).unwrap();
    assert_eq!(a.points(), b.points());
}

#[test]
fn two_objective_mode_filters_on_the_projection() {
    let cfg = GaConfig { objectives: ObjectiveMode::Two, ..small_ga() };
    let front = nsga2_run(&world(), &cfg, 4, &[1], 0.995).unwrap();
    let pts: Vec<Vec<f64>> = front.points().iter().map(|p| ObjectiveMode::Two.project(p)).collect();
    for (i, a) in pts.iter().enumerate() {
        for (j, b) in pts.iter().enumerate() {
            assert!(i == j || !dominates(a, b));
        }
    }
}
