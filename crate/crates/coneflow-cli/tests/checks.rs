use coneflow::fine_graph::{cycle, path, tree_from_parents, Geometry};
use coneflow_cli::checks::{
    cone_angle_bound, cone_composition, conical_thinness, quadratic_angle_bound, random_geodesic,
    wide_angles_cut_geodesics,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn quadratic_bound_values() {
    assert_eq!(quadratic_angle_bound(0), 0);
    assert_eq!(quadratic_angle_bound(1), 2);
    assert_eq!(quadratic_angle_bound(10), 65);
}

#[test]
fn checks_hold_on_trees_and_cycles() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let n = rng.gen_range(2..20);
        let parents: Vec<u32> = (1..n).map(|i| rng.gen_range(0..i as u32)).collect();
        let tree = tree_from_parents(&parents);
        for ball in [tree, cycle(11)] {
            let comp = cone_composition(&ball, &[(1, 1), (2, 1)]);
            assert!(comp.holds() && comp.unknown == 0, "{comp:?}");
            assert!(cone_angle_bound(&ball, &[10]).holds());
            let (thin, done) = conical_thinness(&ball, 50, 20, &mut rng);
            assert!(thin.holds() && done > 0);
            assert!(wide_angles_cut_geodesics(&ball, 12, 10, &mut rng).holds());
        }
    }
}

#[test]
fn random_geodesics_are_geodesics() {
    let ball = cycle(10);
    let mut geo = Geometry::new(&ball);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let (a, b) = (rng.gen_range(0..10), rng.gen_range(0..10));
        let g = random_geodesic(&mut geo, a, b, &mut rng).unwrap();
        assert_eq!((g[0], *g.last().unwrap()), (a, b));
        assert_eq!(g.len() as u32 - 1, geo.certified_distance(a, b).unwrap());
        assert!(g.windows(2).all(|w| ball.neighbours(w[0]).contains(&w[1])));
    }
    let p = path(4);
    let mut geo = Geometry::new(&p);
    assert_eq!(random_geodesic(&mut geo, 4, 0, &mut rng), Some(vec![4, 3, 2, 1, 0]));
}
