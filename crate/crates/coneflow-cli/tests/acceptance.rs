//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any fails.

#[path = "../../coneflow/tests/support/mod.rs"]
mod support;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use coneflow::cocycle::{
    all_targets, checkpoint_test, cocycle_of, confluence_decay_report, lp_norm, non_confluence_check,
    verify_cocycle_identity, CheckpointOutcome, Translator,
};
use coneflow::fine_graph::{
    estimate_delta, path, tree_from_parents, wheel_over_segment, Ball, ConstantsProfile, DeltaMode,
};
use coneflow::geodesic_flow::{Flow, SparseMeasure};
use coneflow::group_models::{modular_rel_factors, CosetKey, GroupElement, GroupModel};
use coneflow::induction::{
    almost_invariance_report, bass_serre_cosets, builtin_h_cocycle, cone_keys, coset_keys_within,
    coset_reps_from_flow, free_product_baseline, HCocycleKind, Induction,
};
use coneflow_cli::checks;
use coneflow_cli::config::{BallConfig, ExperimentConfig};
use coneflow_cli::report::Report;
use coneflow_cli::setup::{random_element, random_nontrivial};
use coneflow_cli::suites;
use coneflow_cli::Setup;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXACT_BUDGET: Duration = Duration::from_secs(300);
const BOUND_BUDGET: Duration = Duration::from_secs(600);
const CHECKPOINT_BUDGET: Duration = Duration::from_secs(300);
const WHEEL_SEGMENT: u32 = 5_000_000;
const WHEEL_DELTA_MAX: u32 = 3;
const MIN_TRANSLATIONS: u64 = 50;
const MIN_IDENTITY_PAIRS: usize = 100;
const MIN_INDUCED_GAMMAS: usize = 50;
const MIN_DECAY_INSTANCES: usize = 100;
const MIN_TRIANGLES: u64 = 1000;
const SHELL_RESIDUAL: f64 = 0.10;
const MIN_TAIL_SHELLS: usize = 5;
const SUMMABILITY_EXPONENTS: [f64; 3] = [2.0, 4.0, 8.0];
const INCREASING_FRACTION: f64 = 0.8;
const FAMILY_LENGTH: u32 = 30;
const MAX_SYLLABLES: usize = 4;
const ORACLE_INSTANCES: usize = 1000;

type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn modular(radius: u32, depth: u32) -> Setup {
    let mut c = ExperimentConfig::modular();
    c.ball = BallConfig { radius, coset_depth: depth };
    Setup::new(c).expect("modular ball")
}

fn free_rel_a(radius: u32, depth: u32) -> Setup {
    let mut c = ExperimentConfig::free_rel_a();
    c.ball = BallConfig { radius, coset_depth: depth };
    Setup::new(c).expect("free ball")
}

/// Probability, stationarity and the step bound for every mask computed.
fn check_masks(setup: &Setup, flow: &mut Flow<'_>, pairs: &[(u32, u32)], bad: &mut Vec<String>) -> usize {
    let mut computed = 0;
    for &(a, x) in pairs {
        let Ok(mask) = flow.mask(a, x) else { continue };
        computed += 1;
        let fixed = flow.flow_step(a, &mask.measure).is_ok_and(|next| next == mask.measure);
        if !mask.measure.is_probability() || !fixed || mask.stationarity > mask.r + 1 {
            bad.push(format!("mask {} {}", setup.label(a), setup.label(x)));
        }
    }
    computed
}

fn mask_pairs(setup: &Setup, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    let n = setup.ball.len() as u32;
    if n <= 150 {
        (0..n).flat_map(|a| (0..n).map(move |x| (a, x))).collect()
    } else {
        (0..3000).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    }
}

fn near_identity(setup: &Setup, flow: &mut Flow<'_>, r: u32) -> Vec<u32> {
    let one = setup.identity();
    (0..setup.ball.len() as u32).filter(|&v| flow.geometry().certified_distance(one, v).is_ok_and(|d| d <= r)).collect()
}

fn identity_pairs(setup: &Setup, flow: &mut Flow<'_>, rng: &mut ChaCha8Rng, bad: &mut Vec<String>) -> usize {
    let tr = Translator::new(&setup.model, &setup.periph, &setup.ball);
    let half = setup.config.ball.radius / 2;
    let near = near_identity(setup, flow, half);
    let mut pairs = 0;
    for _ in 0..20 * MIN_IDENTITY_PAIRS {
        if pairs >= MIN_IDENTITY_PAIRS {
            break;
        }
        let g1 = random_element(&setup.model, rng, half as usize);
        let g2 = random_element(&setup.model, rng, half as usize);
        match verify_cocycle_identity(flow, &tr, &g1, &g2, &near) {
            Ok(check) => {
                if !check.checked.is_empty() {
                    pairs += 1;
                }
                if !check.holds() {
                    bad.push(format!("cocycle identity {} {}", setup.model.format(&g1), setup.model.format(&g2)));
                }
            }
            Err(e) if e.is_uncertified() => {}
            Err(e) => bad.push(format!("cocycle identity: {e}")),
        }
    }
    pairs
}

/// Every certified non-confluence instance on sampled geodesics, with
/// whether the two masks were disjoint.
fn non_confluence(setup: &Setup, flow: &mut Flow<'_>, rng: &mut ChaCha8Rng, bad: &mut Vec<String>) -> usize {
    let n = setup.ball.len() as u32;
    let one = setup.identity();
    let far: Vec<u32> = (0..n).filter(|&v| flow.geometry().certified_distance(one, v).is_ok_and(|d| d >= 4)).collect();
    let mut seen = 0;
    for _ in 0..300 {
        let (x, y) = (far[rng.gen_range(0..far.len())], far[rng.gen_range(0..far.len())]);
        let Ok(interval) = flow.geometry().interval(x, y) else { continue };
        for a in interval.vertices() {
            match non_confluence_check(flow, a, x, y) {
                Ok(Some((_, full))) => {
                    seen += 1;
                    if !full {
                        bad.push(format!("non-confluence {} {} {}", setup.label(a), setup.label(x), setup.label(y)));
                    }
                }
                Ok(None) => {}
                Err(e) if e.is_uncertified() => {}
                Err(e) => bad.push(format!("non-confluence: {e}")),
            }
        }
    }
    seen
}

fn induced_gammas(setup: &Setup, flow: &mut Flow<'_>, rng: &mut ChaCha8Rng, bad: &mut Vec<String>) -> usize {
    let tr = Translator::new(&setup.model, &setup.periph, &setup.ball);
    let keys = cone_keys(flow, 0);
    let reps = match coset_reps_from_flow(flow, &tr, 0, &keys) {
        Ok(r) => r,
        Err(e) => {
            bad.push(format!("coset reps: {e}"));
            return 0;
        }
    };
    let keys: Vec<CosetKey> = reps.reps.keys().cloned().collect();
    let h = builtin_h_cocycle(&setup.periph, 0, HCocycleKind::Integers, 2.0).expect("Z cocycle");
    let ind = Induction::new(&setup.model, &setup.periph, &reps, &h);
    let hs: Vec<GroupElement> = setup.periph.ball(&setup.model, 0, 3).into_iter().filter(|g| !g.is_identity()).collect();
    let mut verified = BTreeSet::new();
    for _ in 0..400 {
        if verified.len() >= MIN_INDUCED_GAMMAS {
            break;
        }
        let g1 = random_nontrivial(&setup.model, rng, 4);
        let g2 = random_element(&setup.model, rng, 2);
        match ind.verify_identities(&g1, &g2, &keys, &hs) {
            Ok(check) => {
                if !check.holds() {
                    bad.push(format!("induced identity {} {}", setup.model.format(&g1), setup.model.format(&g2)));
                } else if check.checked > 0 && check.equivariance_checks > 0 {
                    verified.insert(g1);
                }
            }
            Err(e) => bad.push(format!("induced identity: {e}")),
        }
    }
    verified.len()
}

fn exact_equalities() -> Outcome {
    let mut bad = Vec::new();
    let mut parts = Vec::new();
    let (mut translations, mut pairs, mut gammas, mut instances) = (u64::MAX, usize::MAX, 0, 0);
    for (name, setup) in [("Z/2*Z/3", modular(6, 3)), ("F2 rel <a>", free_rel_a(5, 10))] {
        let mut rng = setup.rng(100);
        let mut flow = Flow::new(&setup.ball, setup.profile.clone());
        let masks = check_masks(&setup, &mut flow, &mask_pairs(&setup, &mut rng), &mut bad);
        let mut report = Report::new("acceptance", &setup.profile.name);
        let t = suites::equivariance(&setup, &mut flow, &mut report, 2 * MIN_TRANSLATIONS as usize);
        bad.extend(report.failures.iter().map(|f| format!("{}: {}", f.check, f.witness.join(" "))));
        let p = identity_pairs(&setup, &mut flow, &mut rng, &mut bad);
        let nc = non_confluence(&setup, &mut flow, &mut rng, &mut bad);
        translations = translations.min(t);
        pairs = pairs.min(p);
        instances += nc;
        let mut line = format!("{name}: {} vertices, {masks} masks, {t} translations, {p} pairs, {nc} non-confluence", setup.ball.len());
        if setup.periph.len() == 1 {
            gammas = induced_gammas(&setup, &mut flow, &mut rng, &mut bad);
            line += &format!(", {gammas} induced gammas");
        }
        parts.push(line);
    }
    let pass = bad.is_empty()
        && translations >= MIN_TRANSLATIONS
        && pairs >= MIN_IDENTITY_PAIRS
        && gammas >= MIN_INDUCED_GAMMAS
        && instances > 0;
    if let Some(first) = bad.first() {
        parts.push(format!("{} violations, first: {first}", bad.len()));
    }
    Outcome::new(pass, parts.join("; "))
}

fn decay_instances(ball: &Ball, delta: u32, one: u32, bad: &mut Vec<String>) -> (usize, usize) {
    let mut flow = Flow::new(ball, ConstantsProfile::paper(delta));
    let radius = 2 * flow.profile().step;
    let sphere: Vec<u32> =
        (0..ball.len() as u32).filter(|&v| flow.geometry().certified_distance(one, v) == Ok(radius)).collect();
    let (mut instances, mut c) = (0, 0);
    for (i, &u) in sphere.iter().enumerate() {
        for &v in &sphere[i + 1..] {
            if instances >= 4 * MIN_DECAY_INSTANCES {
                return (instances, c);
            }
            let Ok(report) = confluence_decay_report(&mut flow, one, &SparseMeasure::dirac(u), &SparseMeasure::dirac(v), 1)
            else {
                continue;
            };
            if report.skipped.is_some() {
                continue;
            }
            instances += 1;
            c = c.max(report.cone_bound);
            if !report.violations.is_empty() {
                bad.push(format!("decay {u} {v}"));
            }
        }
    }
    (instances, c)
}

fn bounds() -> Outcome {
    let mut bad = Vec::new();
    let big = modular(12, 3);
    let (instances, c) = decay_instances(&big.ball, big.profile.delta, big.identity(), &mut bad);
    let mut parts = vec![format!("decay: {instances} instances, measured C = {c}")];
    let mut triangles = 0;
    for setup in [modular(5, 3), free_rel_a(4, 8)] {
        assert!(setup.ball.len() <= 500);
        let composition = checks::cone_composition(&setup.ball, &[(1, 1), (1, 2), (2, 1), (2, 2)]);
        let angle = checks::cone_angle_bound(&setup.ball, &[10, 20]);
        let mut rng = setup.rng(200);
        let (thin, done) = checks::conical_thinness(&setup.ball, 50 * setup.profile.delta, 600, &mut rng);
        for (name, t) in [("composition", &composition), ("angle", &angle), ("thinness", &thin)] {
            if !t.holds() || t.unknown > 0 {
                bad.push(format!("{name}: {} failures, {} undecided", t.failures.len(), t.unknown));
            }
        }
        triangles += done;
        parts.push(format!(
            "{} vertices: composition {} checked, angle bound {} checked, {done} triangles",
            setup.ball.len(),
            composition.checked,
            angle.checked
        ));
    }
    if let Some(first) = bad.first() {
        parts.push(format!("{} violations, first: {first}", bad.len()));
    }
    Outcome::new(bad.is_empty() && instances >= MIN_DECAY_INSTANCES && triangles >= MIN_TRIANGLES, parts.join("; "))
}

fn checkpoint_on_wheel() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sample = wheel_over_segment(40);
    let delta = estimate_delta(&sample, DeltaMode::Exact, &mut rng).delta.max(1);
    let n = WHEEL_SEGMENT;
    let wheel = wheel_over_segment(n);
    let hub = n + 1;
    let mut flow = Flow::new(&wheel, ConstantsProfile::paper(delta));
    let threshold = u64::from(2000 * delta).pow(2);
    let wide = flow.geometry().vertex_angle(hub, 0, n, u32::try_from(threshold + 1).expect("cap fits")).map(|a| a.exceeds(threshold));
    let outcome = checkpoint_test(&mut flow, 0, n, n - 1, hub);
    let pass = delta <= WHEEL_DELTA_MAX
        && matches!(wide, Ok(coneflow::Tri::True))
        && matches!(outcome, Ok(CheckpointOutcome::Equal));
    Outcome::new(pass, format!("delta {delta}, hub angle above (2000 delta)^2: {wide:?}, outcome {outcome:?}"))
}

fn summability() -> Outcome {
    let setup = free_rel_a(6, 8);
    let tr = Translator::new(&setup.model, &setup.periph, &setup.ball);
    let mut flow = Flow::new(&setup.ball, setup.profile.clone());
    let targets = all_targets(&flow);
    let mut rng = setup.rng(400);
    let one = setup.identity();
    let mut elements = Vec::new();
    while elements.len() < 8 {
        let g = random_nontrivial(&setup.model, &mut rng, 6);
        if setup.model.word_length(&g) >= 3 && tr.id_of(&g).is_some() && !elements.contains(&g) {
            elements.push(g);
        }
    }
    let mut witness_ok = true;
    let mut fits_by_p = Vec::new();
    let mut worst = Vec::new();
    for &p in &SUMMABILITY_EXPONENTS {
        let mut all_fit = true;
        let mut worst_residual = 0.0f64;
        let mut worst_rate = 0.0f64;
        for g in &elements {
            let value = cocycle_of(&mut flow, &tr, g, &targets).expect("cocycle");
            let report = lp_norm(&mut flow, &value, p).expect("norm");
            let census = report.census.clone().unwrap_or_default();
            let d = flow.geometry().certified_distance(one, value.source).expect("distance");
            let exact_bound = report.shells.iter().map(|s| s.nonzero).sum::<usize>() >= census.full_levels
                && report.total >= census.full_levels as f64 * 2f64.powf(p);
            if !exact_bound || 2 * census.full_levels + 2 < d as usize || !census.failures.is_empty() {
                witness_ok = false;
            }
            match report.tail {
                Some(t) if t.points >= MIN_TAIL_SHELLS => {
                    worst_residual = worst_residual.max(t.residual);
                    worst_rate = worst_rate.max(t.rate);
                    all_fit &= t.rate < 1.0 && t.residual < SHELL_RESIDUAL;
                }
                _ => all_fit = false,
            }
        }
        fits_by_p.push((p, all_fit));
        worst.push(format!("p={p}: worst ratio {worst_rate:.3}, worst residual {worst_residual:.3}"));
    }
    let threshold = fits_by_p.iter().rev().take_while(|(_, ok)| *ok).last().map(|(p, _)| *p);
    let detail = format!(
        "{} elements; exponent threshold {threshold:?}; witness bound holds: {witness_ok}; {}",
        elements.len(),
        worst.join(", ")
    );
    Outcome::new(threshold.is_some() && witness_ok, detail)
}

fn dichotomy() -> Outcome {
    let mut c = ExperimentConfig::free_rel_a();
    c.ball = BallConfig { radius: 2, coset_depth: 4 };
    c.dichotomy.max_power = FAMILY_LENGTH;
    c.dichotomy.families = vec!["b".into(), "a".into()];
    let setup = Setup::new(c).expect("free ball");
    let report = suites::dichotomy(&setup).expect("dichotomy");
    let families = report.summary["families"].as_array().cloned().unwrap_or_default();
    let fraction = |fam: &str, key: &str| {
        families
            .iter()
            .find(|f| f["family"] == fam)
            .and_then(|f| f["report"][key].as_f64())
            .unwrap_or(0.0)
    };
    let norm_b = fraction("b", "norm_increasing");
    let contribution_a = fraction("a", "contribution_increasing");
    let pass = !report.partial && norm_b >= INCREASING_FRACTION && contribution_a >= INCREASING_FRACTION;
    Outcome::new(
        pass,
        format!("b^n coned-off norm increasing on {norm_b:.2} of steps, a^n contribution increasing on {contribution_a:.2}"),
    )
}

/// Normal forms with at most `syllables` syllables.
fn short_normal_forms(m: &GroupModel, syllables: usize) -> Vec<GroupElement> {
    let letters = m.letters();
    let mut words: Vec<Vec<_>> = vec![Vec::new()];
    let mut frontier = words.clone();
    for _ in 0..syllables {
        frontier = frontier.iter().flat_map(|w| letters.iter().map(move |&l| [w.clone(), vec![l]].concat())).collect();
        words.extend(frontier.clone());
    }
    let set: BTreeSet<GroupElement> =
        words.iter().map(|w| m.canonicalize(w)).filter(|g| m.syllables(g).len() <= syllables).collect();
    set.into_iter().collect()
}

fn free_product_baseline_support() -> Outcome {
    let (m, pe) = modular_rel_factors();
    let gammas = short_normal_forms(&m, MAX_SYLLABLES);
    let mut checked = 0;
    let mut bad = Vec::new();
    for i in 0..pe.len() {
        let keys = coset_keys_within(&m, &pe, i, 4 * MAX_SYLLABLES as u32);
        let reps = free_product_baseline(&m, &pe, i, &keys).expect("baseline");
        for gamma in &gammas {
            let report = almost_invariance_report(&reps, &m, &pe, gamma, 2.0);
            let got: BTreeSet<CosetKey> = report.deviating().into_iter().collect();
            let want: BTreeSet<CosetKey> = bass_serre_cosets(&m, &pe, i, gamma).expect("factor").into_iter().collect();
            let unseen = want.iter().any(|k| report.frontier.contains(k));
            checked += 1;
            if got != want || unseen {
                bad.push(format!("H{i} gamma {}", m.format(gamma)));
            }
        }
    }
    let detail = format!("{} elements, {checked} (peripheral, element) pairs, {} mismatches {:?}", gammas.len(), bad.len(), bad.first());
    Outcome::new(bad.is_empty() && !gammas.is_empty(), detail)
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(700);
    let (mut compared, mut mismatches) = (0, Vec::new());
    let mut round = 0;
    while compared < ORACLE_INSTANCES {
        round += 1;
        let n = rng.gen_range(2..36);
        let ball = if round % 3 == 0 { path(n as u32 - 1) } else { tree_from_parents(&support::random_parents(&mut rng, n)) };
        let adj = support::graph::adjacency(&ball);
        let infinite = vec![false; n];
        let oracle = support::flow::FlowOracle { adj: &adj, infinite: &infinite, delta: 1 };
        let mut flow = Flow::new(&ball, ConstantsProfile::paper(1));
        for _ in 0..5 {
            let (a, x) = (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32));
            let (want, steps) = oracle.mask(a, x);
            let got = flow.mask(a, x).map(|m| {
                let map: std::collections::BTreeMap<u32, BigRational> = m.measure.iter().map(|(v, w)| (v, w.clone())).collect();
                (map, m.stationarity)
            });
            compared += 1;
            if got.as_ref().ok() != Some(&(want, steps)) {
                mismatches.push((round, a, x));
            }
        }
    }
    Outcome::new(mismatches.is_empty(), format!("{compared} instances, {} mismatches {:?}", mismatches.len(), mismatches.first()))
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let criteria: [Criterion; 7] = [
        ("exact equalities", exact_equalities, EXACT_BUDGET),
        ("bounds", bounds, BOUND_BUDGET),
        ("checkpoint on the wheel", checkpoint_on_wheel, CHECKPOINT_BUDGET),
        ("summability", summability, Duration::MAX),
        ("dichotomy", dichotomy, Duration::MAX),
        ("free-product baseline", free_product_baseline_support, Duration::MAX),
        ("oracle equivalence", oracle_equivalence, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let pass = outcome.pass && elapsed <= *budget;
        failed += usize::from(!pass);
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("{verdict} {} {name} ({:.1}s): {}", i + 1, elapsed.as_secs_f64(), outcome.detail);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
