mod support;

use std::collections::BTreeSet;

use coneflow::fine_graph::*;
use coneflow::group_models::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::graph;

const CAP: usize = 200_000;

fn e(o: u32, t: u32) -> OrientedEdge {
    OrientedEdge::new(o, t)
}

fn id(ball: &Ball, model: &GroupModel, word: &str) -> u32 {
    ball.id_of(&Vertex::Group(model.parse(word).unwrap())).unwrap()
}

#[test]
fn free_group_ball_of_radius_one() {
    let (m, pe) = free_rel_cyclic();
    let b = build_ball(&m, &pe, 1, 5, CAP).unwrap();
    assert_eq!(b.len(), 6);
    let one = id(&b, &m, "1");
    let cone = b.id_of(&Vertex::Cone(pe.coset_key(&m, 0, &m.identity()))).unwrap();
    assert!(b.is_cone(cone) && b.infinite_valence(cone));
    assert_eq!(b.degree(one), 5);
}

#[test]
fn modular_ball_of_radius_one() {
    let (m, pe) = modular_rel_factors();
    let b = build_ball(&m, &pe, 1, 5, CAP).unwrap();
    assert_eq!(b.len(), 6);
    assert_eq!((0..6).filter(|&v| b.is_cone(v)).count(), 2);
    assert!((0..6).all(|v| !b.infinite_valence(v)));
}

#[test]
fn radius_zero_is_a_point() {
    let (m, pe) = free_rel_cyclic();
    let b = build_ball(&m, &pe, 0, 5, CAP).unwrap();
    assert_eq!(b.len(), 1);
}

#[test]
fn resource_cap_is_reported() {
    let (m, pe) = free_rel_cyclic();
    assert_eq!(build_ball(&m, &pe, 6, 40, 1000).unwrap_err(), BuildError::ResourceCap { limit: 1000 });
}

#[test]
fn power_of_peripheral_generator_is_two_away() {
    let (m, pe) = free_rel_cyclic();
    let b = build_ball(&m, &pe, 3, 6, CAP).unwrap();
    let mut geo = Geometry::new(&b);
    let one = id(&b, &m, "1");
    let a5 = id(&b, &m, "a^5");
    assert_eq!(geo.certified_distance(one, a5), Ok(2));
    assert_eq!(geo.certified_distance(one, one), Ok(0));
    let row = geo.row(one);
    for v in 0..b.len() as u32 {
        let d = row.bound(v);
        assert!(d.lo <= d.hi);
    }
}

#[test]
fn cycle_angles() {
    let c8 = cycle(8);
    let mut geo = Geometry::new(&c8);
    assert_eq!(geo.angle(e(0, 1), e(1, 2), 100).certified(100), Some(Angle::Finite(6)));
    assert_eq!(geo.angle(e(0, 1), e(1, 0), 100).certified(100), Some(Angle::Finite(0)));
    assert_eq!(geo.angle(e(0, 1), e(1, 2), 3).certified(3), Some(Angle::GreaterThanCap(3)));
    assert_eq!(geo.angle(e(2, 1), e(1, 0), 100), geo.angle(e(0, 1), e(1, 2), 100));
}

#[test]
fn tree_angles_are_infinite() {
    let t = tree_from_parents(&[0, 0, 0, 1, 1]);
    let mut geo = Geometry::new(&t);
    assert_eq!(geo.angle(e(1, 0), e(0, 2), 10).certified(10), Some(Angle::Infinite));
    assert_eq!(geo.angle(e(4, 1), e(1, 5), 10).certified(10), Some(Angle::Infinite));
    assert_eq!(geo.angle(e(4, 1), e(1, 4), 10).certified(10), Some(Angle::Finite(0)));
}

#[test]
fn vertex_angle_examples() {
    let p = path(10);
    let mut geo = Geometry::new(&p);
    for theta in [0, 12, 1_000_000] {
        assert_eq!(geo.vertex_angle_exceeds(4, 0, 10, theta), Tri::True);
    }
    let c8 = cycle(8);
    let mut geo = Geometry::new(&c8);
    for theta in 0..10u64 {
        assert_eq!(geo.vertex_angle_exceeds(0, 1, 7, theta), Tri::from(theta < 6), "theta {theta}");
    }
    // x1 = x2 adjacent to c: the only first edge is shared, angle 0.
    assert_eq!(geo.vertex_angle_exceeds(0, 1, 1, 7), Tri::False);
}

#[test]
fn cone_examples() {
    let c8 = cycle(8);
    let mut geo = Geometry::new(&c8);
    assert_eq!(geo.cone(e(0, 1), 7).unwrap().vertices, (0..8).collect::<Vec<_>>());
    assert_eq!(geo.cone(e(0, 1), 5).unwrap().vertices, vec![0, 1]);
    let t = tree_from_parents(&[0, 0, 1, 1, 2, 3]);
    let mut geo = Geometry::new(&t);
    for theta in [1, 4, 80] {
        let c = geo.cone(e(1, 3), theta).unwrap();
        assert_eq!(c.vertices, vec![1, 3]);
        assert_eq!(c.edges, vec![(1, 3)]);
    }
}

#[test]
fn delta_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let t = tree_from_parents(&[0, 0, 1, 1, 2, 2, 3]);
    let d = estimate_delta(&t, DeltaMode::Exact, &mut rng);
    assert_eq!((d.thinness, d.delta), (0, 1));
    assert!(d.exhaustive);
    let c8 = cycle(8);
    let d = estimate_delta(&c8, DeltaMode::Exact, &mut rng);
    assert_eq!(d.delta, 2);
    assert_eq!(d.thinness, graph::thinness(&graph::adjacency(&c8)));
}

#[test]
fn delta_matches_geodesic_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (m, pe) = modular_rel_factors();
    let b = build_ball(&m, &pe, 3, 5, CAP).unwrap();
    let est = estimate_delta(&b, DeltaMode::Exact, &mut rng);
    assert_eq!(est.thinness, graph::thinness(&graph::adjacency(&b)));
    for n in [5u32, 6, 7, 9] {
        let c = cycle(n);
        assert_eq!(estimate_delta(&c, DeltaMode::Exact, &mut rng).thinness, graph::thinness(&graph::adjacency(&c)));
    }
}

#[test]
fn modular_ball_of_radius_four_delta() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (m, pe) = modular_rel_factors();
    let b = build_ball(&m, &pe, 4, 5, CAP).unwrap();
    let est = estimate_delta(&b, DeltaMode::Exact, &mut rng);
    assert_eq!(est.thinness, graph::thinness(&graph::adjacency(&b)));
    assert_eq!(est.delta, MODULAR_R4_DELTA);
    let sampled = estimate_delta(&b, DeltaMode::Sampled { samples: 200 }, &mut rng);
    assert!(sampled.delta <= est.delta);
    assert!(!sampled.exhaustive);
}

/// `δ` of the radius-four ball of `Z/2 * Z/3` (37 vertices, thinness 0),
/// frozen from the geodesic-enumeration oracle.
const MODULAR_R4_DELTA: u32 = 1;

#[test]
fn geodesic_edge_examples() {
    let p = path(6);
    let mut geo = Geometry::new(&p);
    let mut got = geo.geodesic_edges(0, 6, 2).unwrap();
    got.sort();
    assert_eq!(got, vec![e(2, 1), e(2, 3)]);
    assert_eq!(geo.geodesic_edges(0, 6, 0).unwrap(), vec![e(0, 1)]);
    let c4 = cycle(4);
    let mut geo = Geometry::new(&c4);
    let mut got = geo.geodesic_edges(0, 2, 1).unwrap();
    got.sort();
    assert_eq!(got, vec![e(1, 0), e(1, 2), e(3, 0), e(3, 2)]);
    let mut first = geo.geodesic_edges(0, 2, 0).unwrap();
    first.sort();
    assert_eq!(first, vec![e(0, 1), e(0, 3)]);
}

#[test]
fn intervals_through_cone_vertices_are_finite() {
    let (m, pe) = free_rel_cyclic();
    let b = build_ball(&m, &pe, 4, 8, CAP).unwrap();
    let mut geo = Geometry::new(&b);
    let one = id(&b, &m, "1");
    for w in ["a^8", "ba^3b", "a^-2b"] {
        let x = id(&b, &m, w);
        let i = geo.interval(one, x).unwrap();
        assert!(i.vertices().count() < b.len());
        assert_eq!(i.levels[0], vec![one]);
        assert_eq!(*i.levels.last().unwrap(), vec![x]);
    }
}

#[test]
fn edge_list_round_trip() {
    let w = wheel_over_segment(6);
    let text = to_edge_list(&w);
    let back = from_edge_list(&text).unwrap();
    assert_eq!(back.len(), w.len());
    assert_eq!(back.num_edges(), w.num_edges());
    assert!(back.infinite_valence(7));
    assert!(from_edge_list("0 0").is_err());
    assert_eq!(from_edge_list("0 1\nfoo bar baz").unwrap_err().line, 2);
}

fn random_graph(seed: u64, n: usize, extra: usize) -> graph::Adj {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(u32, u32)> = support::random_parents(&mut rng, n)
        .into_iter()
        .enumerate()
        .map(|(i, p)| (i as u32 + 1, p))
        .collect();
    for _ in 0..extra {
        edges.push((rng.gen_range(0..n as u32), rng.gen_range(0..n as u32)));
    }
    graph::from_edges(n, &edges)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn angles_and_cones_match_path_listing(seed in any::<u64>(), n in 3usize..10, extra in 0usize..6, theta in 1u32..5) {
        let adj = random_graph(seed, n, extra);
        let ball = from_edge_list(&graph::edge_list_text(&adj)).unwrap();
        let mut geo = Geometry::new(&ball);
        for v in 0..n as u32 {
            for &u in &adj[v as usize] {
                for &w in &adj[v as usize] {
                    let want = graph::angle(&adj, u, v, w);
                    let got = geo.angle(e(u, v), e(v, w), 50).certified(50);
                    prop_assert_eq!(got, Some(want.map_or(Angle::Infinite, |a| Angle::Finite(a.into()))));
                }
                let cone = geo.cone(e(u, v), theta).unwrap();
                let want: BTreeSet<u32> = graph::cone(&adj, u, v, theta);
                prop_assert_eq!(cone.vertices.iter().copied().collect::<BTreeSet<_>>(), want);
            }
        }
    }

    #[test]
    fn vertex_angles_match_brute_force(seed in any::<u64>(), n in 3usize..10, extra in 0usize..6, theta in 0u64..6) {
        let adj = random_graph(seed, n, extra);
        let ball = from_edge_list(&graph::edge_list_text(&adj)).unwrap();
        let mut geo = Geometry::new(&ball);
        for c in 0..n as u32 {
            for x1 in 0..n as u32 {
                for x2 in 0..n as u32 {
                    let want = graph::vertex_angle_gt(&adj, c, x1, x2, theta);
                    prop_assert_eq!(geo.vertex_angle_exceeds(c, x1, x2, theta), Tri::from(want));
                }
            }
        }
    }

    #[test]
    fn angle_symmetry_and_triangle_inequality(seed in any::<u64>(), n in 4usize..12, extra in 0usize..8) {
        let adj = random_graph(seed, n, extra);
        let ball = from_edge_list(&graph::edge_list_text(&adj)).unwrap();
        let mut geo = Geometry::new(&ball);
        let fin = |a: AngleBound| if a.hi == INF { u64::MAX } else { u64::from(a.hi) };
        for v in 0..n as u32 {
            let ns = adj[v as usize].clone();
            for &a in &ns {
                for &b in &ns {
                    let ab = geo.angle(e(a, v), e(v, b), 64);
                    prop_assert_eq!(ab, geo.angle(e(b, v), e(v, a), 64));
                    for &c in &ns {
                        let bc = fin(geo.angle(e(b, v), e(v, c), 64));
                        let ac = fin(geo.angle(e(a, v), e(v, c), 64));
                        prop_assert!(ac <= fin(ab).saturating_add(bc));
                    }
                }
            }
        }
    }
}

/// `lo ≤ d ≤ hi` in a smaller ball must sandwich the plain distance in a
/// larger ball containing it, and certified values must agree with it.
fn check_against_larger(model: &GroupModel, pe: &PeripheralStructure, small: (u32, u32), big: (u32, u32)) {
    let b = build_ball(model, pe, small.0, small.1, CAP).unwrap();
    let big_ball = build_ball(model, pe, big.0, big.1, CAP).unwrap();
    let map: Vec<u32> = (0..b.len() as u32).map(|v| big_ball.id_of(&b.vertex(v)).unwrap()).collect();
    let mut geo = Geometry::new(&b);
    let mut big_geo = Geometry::new(&big_ball);
    let mut certified = 0;
    for u in 0..b.len() as u32 {
        let row = geo.row(u);
        let big_row = big_geo.row(map[u as usize]);
        for v in 0..b.len() as u32 {
            let d = row.bound(v);
            let far = big_row.hi(map[v as usize]);
            assert!(d.lo <= far && far <= d.hi, "{u} {v}: {d:?} vs {far}");
            if let Some(x) = d.exact() {
                certified += 1;
                assert_eq!(x, far);
            }
        }
        for &p in b.neighbours(u) {
            for &q in b.neighbours(u) {
                let a = geo.angle(e(p, u), e(u, q), 12);
                let far = big_geo.angle(e(map[p as usize], map[u as usize]), e(map[u as usize], map[q as usize]), 12);
                if far.hi != INF {
                    assert!(a.lo <= far.hi, "angle {p} {u} {q}: {a:?} vs {far:?}");
                    assert!(far.hi <= a.hi, "angle {p} {u} {q}: {a:?} vs {far:?}");
                }
            }
        }
    }
    assert!(certified > b.len());
}

#[test]
fn certified_geometry_is_sound_free_group() {
    let (m, pe) = free_rel_cyclic();
    check_against_larger(&m, &pe, (2, 3), (4, 8));
}

#[test]
fn certified_geometry_is_sound_free_product() {
    let (m, pe) = modular_rel_factors();
    check_against_larger(&m, &pe, (3, 3), (6, 3));
}

