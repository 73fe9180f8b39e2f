mod common;

use common::{audit_plan, diamond, ids};
use formplan::model::{PlanQuery, VertexId};
use formplan::planner::{evaluate_plan, plan_sequential, PathSet, PlanError};
use formplan::roadmap::evaluate_edge_costs;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn query(start: usize, goal: usize, robots: usize) -> PlanQuery {
    PlanQuery {
        start: VertexId(start),
        goal: VertexId(goal),
        robots,
        coefficient: 100.0,
    }
}

#[test]
fn diamond_plan_matches_hand_pricing() {
    let set = plan_sequential(&diamond(2), &query(0, 3, 2)).unwrap();
    assert_eq!(set.paths, vec![ids(&[0, 1, 3]), ids(&[0, 2, 3])]);
    assert_eq!(set.robot_costs, vec![20.0, 24.0]);
    assert_eq!(set.objective, 24.0);
    audit_plan(&set.paths, &query(0, 3, 2)).unwrap();
}

#[test]
fn free_sharing_keeps_everyone_on_the_shortest_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let (g, q) = common::random_small_instance(&mut rng, 12);
        let flat = evaluate_edge_costs(&g, 3, 0.0, 0.0).unwrap();
        let q3 = PlanQuery { robots: 3, ..q };
        let one = plan_sequential(&flat, &PlanQuery { robots: 1, ..q }).unwrap();
        let three = plan_sequential(&flat, &q3).unwrap();
        assert!(three.paths.iter().all(|p| *p == one.paths[0]));
    }
}

#[test]
fn invalid_queries_are_rejected_before_search() {
    let g = diamond(2);
    assert!(matches!(
        plan_sequential(&g, &query(0, 7, 1)),
        Err(PlanError::Query(_))
    ));
    assert!(matches!(
        plan_sequential(&g, &query(0, 0, 1)),
        Err(PlanError::Query(_))
    ));
    assert!(matches!(
        plan_sequential(&g, &query(0, 3, 0)),
        Err(PlanError::Query(_))
    ));
}

#[test]
fn capacity_shortfall_is_reported() {
    let err = plan_sequential(&diamond(1), &query(0, 3, 3)).unwrap_err();
    assert!(matches!(
        err.root(),
        PlanError::CapacityExceeded { needed: 2, .. }
    ));
}

#[test]
fn all_on_one_path_is_monotone_in_r() {
    let g = diamond(6);
    let mut last = 0.0;
    for r in 1..=6 {
        let (_, obj) = evaluate_plan(&g, &vec![ids(&[0, 1, 3]); r]).unwrap();
        assert!(obj >= last);
        last = obj;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn single_robot_equals_reference_dijkstra(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_single_robot_roadmap(&mut rng, 40);
        let goal = g.vertex_count() - 1;
        let q = query(0, goal, 1);
        let set = plan_sequential(&g, &q).unwrap();
        prop_assert_eq!(set.objective, common::reference_distances(&g, VertexId(0))[goal]);
    }

    #[test]
    fn planning_is_deterministic_and_feasible(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, q) = common::random_small_instance(&mut rng, 12);
        let a = plan_sequential(&g, &q);
        let b = plan_sequential(&g, &q);
        prop_assert_eq!(&a, &b);
        if let Ok(set) = a {
            prop_assert!(audit_plan(&set.paths, &q).is_ok());
            let max = set.robot_costs.iter().copied().fold(f64::MIN, f64::max);
            prop_assert_eq!(set.objective, max);
        }
    }

    #[test]
    fn path_set_json_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, q) = common::random_small_instance(&mut rng, 12);
        if let Ok(set) = plan_sequential(&g, &q) {
            let back = PathSet::from_json(set.to_json().as_bytes(), &g).unwrap();
            prop_assert_eq!(back, set);
        }
    }
}
