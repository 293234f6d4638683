mod common;

use common::*;
use ctopprm::planner::{plan, PlannerParams};
use ctopprm::scenario::oracle_scenes;
use proptest::prelude::*;

fn holds(check: Check) -> Result<(), TestCaseError> {
    check.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn forest_labelling_and_connections(seed in any::<u64>()) {
        holds(forest_case(seed))?;
    }

    #[test]
    fn deformation_is_reflexive_and_symmetric(seed in any::<u64>()) {
        holds(uvd_case(seed))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn filter_postconditions(seed in any::<u64>()) {
        holds(filter_case(seed))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn search_matches_exhaustive_enumeration(seed in any::<u64>()) {
        holds(dfs_case(seed))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn esdf_matches_brute_force(seed in any::<u64>()) {
        holds(esdf_case(seed))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn planner_output_is_free_pruned_and_deterministic(seed in any::<u64>(), scene in 0usize..10) {
        let s = &oracle_scenes()[scene];
        let env = s.environment(None).unwrap();
        let params = PlannerParams { seed, ..s.params };
        let out = plan(&env, &s.start, &s.goal, &params).unwrap();
        prop_assert!(!out.paths.is_empty());
        let min = out.paths.iter().map(|p| p.length()).fold(f64::INFINITY, f64::min);
        for p in &out.paths {
            prop_assert!(p.length() <= params.kappa_s * min + 1e-9);
            prop_assert!(p.waypoints().windows(2).all(|w| env.segment_free(&w[0], &w[1], params.delta_d)));
        }
        let again = plan(&env, &s.start, &s.goal, &params).unwrap();
        prop_assert_eq!(out.to_json(), again.to_json());
    }
}
