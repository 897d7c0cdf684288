mod support;

use coneflow::cocycle::Translator;
use coneflow::fine_graph::*;
use coneflow::geodesic_flow::*;
use coneflow::group_models::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::flow::FlowOracle;
use support::graph;

fn dirac(v: u32) -> SparseMeasure {
    SparseMeasure::dirac(v)
}

fn as_map(m: &SparseMeasure) -> support::flow::Measure {
    m.iter().map(|(v, w)| (v, w.clone())).collect()
}

#[test]
fn path_steps() {
    let p = path(12);
    let mut f = Flow::new(&p, ConstantsProfile::paper(1));
    assert_eq!(f.classify_step(0, 12), Ok(StepKind::Initial));
    assert_eq!(f.classify_step(0, 10), Ok(StepKind::Regular));
    assert_eq!(f.classify_step(0, 0), Ok(StepKind::Stationary));
    assert_eq!(f.classify_step(0, 4), Ok(StepKind::Ending));
    assert_eq!(f.classify_step(0, 1), Ok(StepKind::Stationary));
    assert_eq!(f.r_index(0, 12), Ok(2));
    assert_eq!(f.flow_step(0, &dirac(12)).unwrap(), dirac(10));
    assert_eq!(f.flow_step(0, &dirac(10)).unwrap(), dirac(5));
    assert_eq!(f.flow_step(0, &dirac(5)).unwrap(), dirac(1));
    assert_eq!(f.flow_step(0, &dirac(1)).unwrap(), dirac(1));
    assert_eq!(f.ending_point(0, 5), Ok(1));
}

#[test]
fn path_mask() {
    let p = path(12);
    let mut f = Flow::new(&p, ConstantsProfile::paper(1));
    let m = f.mask(0, 12).unwrap();
    assert_eq!(m.measure, dirac(1));
    assert_eq!(m.stationarity, 3);
    assert!(m.stationarity <= m.r + 1);
    assert_eq!(m.trace.iter().map(|t| t.kinds.clone()).collect::<Vec<_>>(), vec![
        vec![StepKind::Initial],
        vec![StepKind::Regular],
        vec![StepKind::Ending]
    ]);
    let m = f.mask(7, 7).unwrap();
    assert_eq!((m.measure.clone(), m.stationarity), (dirac(7), 0));
}

#[test]
fn slices_on_simple_graphs() {
    let p = path(12);
    let mut f = Flow::new(&p, ConstantsProfile::paper(1));
    for rho in 0..=12 {
        assert_eq!(f.slice(0, 12, rho).unwrap(), vec![rho]);
    }
    assert_eq!(f.conical_interval(3, 3).unwrap(), vec![3]);
    let t = tree_from_parents(&[0, 0, 1, 1, 2, 3, 3, 6]);
    let mut f = Flow::new(&t, ConstantsProfile::paper(1));
    assert_eq!(f.conical_interval(8, 5).unwrap(), vec![0, 1, 2, 3, 5, 6, 8]);
    let c4 = cycle(4);
    let mut f = Flow::new(&c4, ConstantsProfile::paper(1));
    assert_eq!(f.conical_interval(0, 2).unwrap(), vec![0, 1, 2, 3]);
}

#[test]
fn wheel_hub_is_the_whole_slice() {
    let n = 1_000_002;
    let w = wheel_over_segment(n);
    let hub = n + 1;
    let mut f = Flow::new(&w, ConstantsProfile::paper(1));
    let theta = f.profile().ending_classify.pow(2);
    assert_eq!(f.geometry().vertex_angle_exceeds(hub, 0, n, theta), Tri::True);
    assert_eq!(f.geometry().certified_distance(0, n), Ok(2));
    assert_eq!(f.slice(0, n, 1).unwrap(), vec![hub]);
}

#[test]
fn cone_vertex_mask_stays_next_to_the_cone() {
    let (m, pe) = free_rel_cyclic();
    let b = build_ball(&m, &pe, 4, 8, 200_000).unwrap();
    let mut f = Flow::new(&b, ConstantsProfile::paper(1));
    let cone = b.id_of(&Vertex::Cone(pe.coset_key(&m, 0, &m.identity()))).unwrap();
    let x = b.id_of(&Vertex::Group(m.parse("a^5b").unwrap())).unwrap();
    assert_eq!(f.geometry().certified_distance(cone, x), Ok(2));
    let mask = f.mask(cone, x).unwrap();
    for v in mask.measure.support() {
        assert!(b.has_edge(cone, v));
        let Vertex::Group(g) = b.vertex(v) else { panic!("cone vertex in support") };
        assert!(pe.contains(&m, 0, &g));
    }
    let a5 = b.id_of(&Vertex::Group(m.parse("a^5").unwrap())).unwrap();
    assert_eq!(mask.measure, dirac(a5));
}

#[test]
fn focus_examples() {
    let p = path(20);
    let mut f = Flow::new(&p, ConstantsProfile::paper(1));
    let r = f.focus_check(0, 12, 11).unwrap();
    assert!(r.all_pass());
    let item2 = &r.items[1];
    assert!(item2.skipped.is_none() && item2.measured <= 1);
    let r = f.focus_check(0, 13, 13).unwrap();
    assert!(r.items[0].skipped.is_none() && r.items[0].measured == 0 && r.items[0].pass);

    let square = from_edge_list("0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n7 8\n8 9\n9 10\n9 11\n10 12\n11 12").unwrap();
    let mut f = Flow::new(&square, ConstantsProfile::paper(1));
    let r = f.focus_check(0, 10, 11).unwrap();
    let item3 = &r.items[2];
    assert!(item3.skipped.is_none() && item3.pass, "{item3:?}");
}

#[test]
fn flow_matches_definition_on_paths_and_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut compared = 0;
    for round in 0..40 {
        let n = rng.gen_range(2..30);
        let ball = if round % 4 == 0 { path(n as u32 - 1) } else { tree_from_parents(&support::random_parents(&mut rng, n)) };
        let adj = graph::adjacency(&ball);
        let infinite = vec![false; n];
        let oracle = FlowOracle { adj: &adj, infinite: &infinite, delta: 1 };
        let mut f = Flow::new(&ball, ConstantsProfile::paper(1));
        for _ in 0..5 {
            let a = rng.gen_range(0..n as u32);
            let x = rng.gen_range(0..n as u32);
            let mask = f.mask(a, x).unwrap();
            let (want, steps) = oracle.mask(a, x);
            assert_eq!(as_map(&mask.measure), want, "a {a} x {x}");
            assert_eq!(mask.stationarity, steps);
            compared += 1;
        }
    }
    assert_eq!(compared, 200);
}

#[test]
fn flow_matches_definition_on_small_wheels_and_cycles() {
    for ball in [cycle(9), cycle(14), wheel_over_segment(9)] {
        let adj = graph::adjacency(&ball);
        let infinite: Vec<bool> = (0..ball.len() as u32).map(|v| ball.infinite_valence(v)).collect();
        let oracle = FlowOracle { adj: &adj, infinite: &infinite, delta: 1 };
        let mut f = Flow::new(&ball, ConstantsProfile::paper(1));
        for a in 0..ball.len() as u32 {
            for x in 0..ball.len() as u32 {
                let (want, steps) = oracle.mask(a, x);
                let mask = f.mask(a, x).unwrap();
                assert_eq!(as_map(&mask.measure), want, "a {a} x {x}");
                assert_eq!(mask.stationarity, steps);
            }
        }
    }
}

fn check_flow_invariants(flow: &mut Flow<'_>, a: u32, x: u32) -> Result<(), TestCaseError> {
    let mask = match flow.mask(a, x) {
        Ok(m) => m,
        Err(e) if e.is_uncertified() => return Ok(()),
        Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
    };
    prop_assert!(mask.measure.is_probability());
    prop_assert!(mask.stationarity <= mask.r + 1);
    let again = flow.flow_step(a, &mask.measure).unwrap();
    prop_assert_eq!(&again, &mask.measure);
    let mut eta = dirac(x);
    let mut far = flow.geometry().certified_distance(a, x).unwrap();
    for k in 1..=mask.r + 6 {
        eta = flow.flow_step(a, &eta).unwrap();
        prop_assert_eq!(Flow::mass(&eta), BigRational::one());
        let mut here = 0;
        for v in eta.support() {
            here = here.max(flow.geometry().certified_distance(a, v).unwrap());
        }
        prop_assert!(here <= far);
        if k <= mask.stationarity {
            prop_assert!(here < far);
        }
        far = here;
        if k > mask.r {
            prop_assert_eq!(&eta, &mask.measure);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn masks_are_stationary_probabilities_on_trees(seed in any::<u64>(), n in 2usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = tree_from_parents(&support::random_parents(&mut rng, n));
        let mut f = Flow::new(&t, ConstantsProfile::paper(1));
        for _ in 0..8 {
            let a = rng.gen_range(0..n as u32);
            let x = rng.gen_range(0..n as u32);
            check_flow_invariants(&mut f, a, x)?;
        }
    }

    #[test]
    fn masks_are_stationary_probabilities_on_group_balls(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, pe) = modular_rel_factors();
        let b = build_ball(&m, &pe, 6, 3, 50_000).unwrap();
        let mut f = Flow::new(&b, ConstantsProfile::paper(1));
        for _ in 0..6 {
            let a = rng.gen_range(0..b.len() as u32);
            let x = rng.gen_range(0..b.len() as u32);
            check_flow_invariants(&mut f, a, x)?;
        }
    }
}

#[test]
fn masks_are_translation_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (m, pe) = free_rel_cyclic();
    let b = build_ball(&m, &pe, 4, 6, 200_000).unwrap();
    let tr = Translator::new(&m, &pe, &b);
    let mut f = Flow::new(&b, ConstantsProfile::paper(1));
    let letters = m.letters();
    let mut checked = 0;
    for _ in 0..400 {
        let a = rng.gen_range(0..b.len() as u32);
        let x = rng.gen_range(0..b.len() as u32);
        let word: Vec<Letter> = (0..rng.gen_range(1..3)).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
        let g = m.canonicalize(&word);
        let (Some(ga), Some(gx)) = (tr.translate(&g, a), tr.translate(&g, x)) else { continue };
        let (Ok(here), Ok(there)) = (f.mask(a, x), f.mask(ga, gx)) else { continue };
        let Some(moved) = here.measure.iter().map(|(v, w)| tr.translate(&g, v).map(|u| (u, w.clone()))).collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        assert_eq!(SparseMeasure::from_weights(moved), there.measure, "g {} a {a} x {x}", m.format(&g));
        checked += 1;
    }
    assert!(checked >= 50, "only {checked} certified translates");
}

#[test]
fn uniform_measures_are_exact() {
    let m = SparseMeasure::uniform(&[3, 1, 2]);
    assert!(m.is_probability());
    assert_eq!(m.get(1), BigRational::new(BigInt::one(), BigInt::from(3)));
    assert_eq!(m.support(), vec![1, 2, 3]);
}
