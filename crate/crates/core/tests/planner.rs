use ctopprm::env::{Bounds, Environment, Primitive};
use ctopprm::oracle::enumerate_classes;
use ctopprm::planner::{plan, PlannerParams};
use ctopprm::topology::uvd_deformable;
use ctopprm::Point;

fn planar(seed: u64) -> PlannerParams {
    PlannerParams {
        planar: true,
        seed,
        ..PlannerParams::default()
    }
}

#[test]
fn empty_world_gives_the_straight_segment() {
    let b = Bounds::new(Point::new(0.0, 0.0, 0.0), Point::new(10.0, 6.0, 3.0)).unwrap();
    let env = Environment::empty(b, 0.3).unwrap();
    let (s, g) = (Point::new(0.6, 1.0, 1.0), Point::new(9.4, 5.0, 2.0));
    for seed in 0..5 {
        let out = plan(
            &env,
            &s,
            &g,
            &PlannerParams {
                seed,
                ..PlannerParams::default()
            },
        )
        .unwrap();
        assert_eq!(out.paths.len(), 1);
        assert_eq!(out.paths[0].waypoints(), &[s, g]);
        assert!((out.paths[0].length() - (g - s).norm()).abs() < 1e-12);
    }
}

#[test]
fn start_inside_an_obstacle_is_rejected() {
    let b = Bounds::new(Point::new(0.0, 0.0, 0.0), Point::new(10.0, 6.0, 2.0)).unwrap();
    let disk = Primitive::sphere(Point::new(2.0, 3.0, 1.0), 1.0).unwrap();
    let env = Environment::with_primitives(b, vec![disk], 0.3).unwrap();
    let err = plan(
        &env,
        &Point::new(2.0, 3.0, 1.0),
        &Point::new(9.0, 3.0, 1.0),
        &planar(0),
    )
    .unwrap_err();
    assert_eq!(err.kind(), "InvalidQuery");
}

#[test]
fn wall_without_openings_disconnects() {
    let b = Bounds::new(Point::new(0.0, 0.0, 0.0), Point::new(10.0, 6.0, 2.0)).unwrap();
    let wall = Primitive::aabb(Point::new(4.8, 0.0, 0.0), Point::new(5.2, 6.0, 2.0)).unwrap();
    let env = Environment::with_primitives(b, vec![wall], 0.3).unwrap();
    let err = plan(
        &env,
        &Point::new(1.0, 3.0, 1.0),
        &Point::new(9.0, 3.0, 1.0),
        &planar(0),
    )
    .unwrap_err();
    assert_eq!(err.kind(), "StartGoalDisconnected");
}

/// A disk at the centre of a 10 m x 6 m map, start and goal on opposite
/// sides 0.4 m below the centre line so neither detour mirrors the other.
#[test]
fn centred_disk_two_classes_in_ninety_percent_of_seeds() {
    let b = Bounds::new(Point::new(0.0, 0.0, 0.0), Point::new(10.0, 6.0, 2.0)).unwrap();
    let disk = Primitive::sphere(Point::new(5.0, 3.0, 1.0), 1.0).unwrap();
    let env = Environment::with_primitives(b, vec![disk], 0.3).unwrap();
    let (s, g) = (Point::new(0.6, 2.6, 1.0), Point::new(9.4, 2.6, 1.0));

    let oracle = enumerate_classes(&env, &s, &g, 1.0, 1.3, 0.1, true).unwrap();
    assert_eq!(oracle.class_count, 2);
    let reps = &oracle.class_representatives;

    let mut found = 0;
    for seed in 0..100 {
        let out = plan(&env, &s, &g, &planar(seed)).unwrap();
        let hits: Vec<usize> = out
            .paths
            .iter()
            .filter_map(|p| {
                reps.iter()
                    .position(|r| uvd_deformable(&env, p, r, 0.1).unwrap())
            })
            .collect();
        if out.paths.len() == 2 && hits.len() == 2 && hits[0] != hits[1] {
            found += 1;
        }
    }
    assert!(found >= 90, "both classes in {found} of 100 seeds");
}
