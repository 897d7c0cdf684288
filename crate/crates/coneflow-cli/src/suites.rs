//! One function per subcommand. Each returns a [`Report`] whose failures
//! name the vertices or elements that reproduce them.

use std::collections::BTreeMap;

use coneflow::cocycle::{
    all_targets, checkpoint_test, cocycle_of, confluence_decay_report, lp_norm, non_confluence_check,
    verify_cocycle_identity, CheckpointOutcome, Translator,
};
use coneflow::fine_graph::{build_region, GeomError};
use coneflow::geodesic_flow::{Flow, SparseMeasure};
use coneflow::group_models::{CosetKey, GroupElement};
use coneflow::induction::{
    almost_invariance_report, builtin_h_cocycle, cone_keys, coset_reps_from_flow, free_product_baseline,
    HCocycleModel, Induction, InductionError, RandomCosetReps,
};
use coneflow::Vertex;
use rand::Rng;
use serde_json::json;

use crate::checks;
use crate::config::PeripheralConfig;
use crate::dichotomy::{dichotomy_report, DichotomyInput};
use crate::report::{rational, Report, Table};
use crate::setup::{element_label, random_element, random_nontrivial, Setup};
use crate::HarnessError;

pub const SUITES: [&str; 10] = [
    "build-ball",
    "estimate-delta",
    "mask",
    "geometry",
    "cocycle",
    "confluence",
    "checkpoint",
    "coset-reps",
    "induce",
    "dichotomy",
];

/// Explicit choices that replace sampling.
#[derive(Clone, Debug, Default)]
pub struct Selection {
    pub target: Option<String>,
    pub source: Option<String>,
}

fn new_report(setup: &Setup, suite: &str) -> Report {
    let mut r = Report::new(suite, &format!("{}(delta={})", setup.profile.name, setup.profile.delta));
    r.set("paper_profile", setup.profile.is_paper());
    r
}

fn labels(setup: &Setup, vs: &[u32]) -> Vec<String> {
    vs.iter().map(|&v| setup.label(v)).collect()
}

fn record_geom_error(setup: &Setup, report: &mut Report, check: &str, e: &GeomError) -> bool {
    if e.is_uncertified() {
        return false;
    }
    report.fail(check, labels(setup, e.vertices()), e.to_string());
    true
}

/// Vertices within `r` of the identity whose distance is certified.
fn near_identity(setup: &Setup, flow: &mut Flow<'_>, r: u32) -> Vec<u32> {
    let one = setup.identity();
    (0..setup.ball.len() as u32)
        .filter(|&v| flow.geometry().certified_distance(one, v).is_ok_and(|d| d <= r))
        .collect()
}

/// Random elements of length at most `max_len` that are vertices of the
/// ball, possibly fewer than `count`.
fn sample_elements<R: Rng>(setup: &Setup, rng: &mut R, count: usize, max_len: usize) -> Vec<GroupElement> {
    let tr = Translator::new(&setup.model, &setup.periph, &setup.ball);
    let mut out = Vec::new();
    for _ in 0..20 * count {
        if out.len() >= count {
            break;
        }
        let g = random_nontrivial(&setup.model, rng, max_len);
        if tr.id_of(&g).is_some() {
            out.push(g);
        }
    }
    out
}

pub fn build_ball(setup: &Setup) -> Report {
    let mut r = new_report(setup, "build-ball");
    let ball = &setup.ball;
    let n = ball.len() as u32;
    r.set("vertices", ball.len());
    r.set("edges", ball.num_edges());
    r.set("cone_vertices", (0..n).filter(|&v| ball.is_cone(v)).count());
    r.set("infinite_valence", (0..n).filter(|&v| ball.infinite_valence(v)).count());
    r.set("boundary", (0..n).filter(|&v| ball.is_boundary(v)).count());
    r.set("leak_groups", ball.leak_groups().len());
    r.set("complete", ball.is_complete());
    r.set("radius", setup.config.ball.radius);
    r.set("coset_depth", setup.config.ball.coset_depth);
    let mut flow = Flow::new(ball, setup.profile.clone());
    let row = flow.geometry().row(setup.identity());
    let mut table = Table::new(&["id", "kind", "label", "distance", "degree", "boundary", "infinite_valence"]);
    for v in 0..n {
        let kind = if ball.is_cone(v) { "cone" } else { "group" };
        let d = row.bound(v).exact().map_or_else(|| "uncertified".to_string(), |d| d.to_string());
        table.push(vec![
            v.to_string(),
            kind.into(),
            setup.label(v),
            d,
            ball.degree(v).to_string(),
            ball.is_boundary(v).to_string(),
            ball.infinite_valence(v).to_string(),
        ]);
    }
    r.table = Some(table);
    r
}

pub fn estimate_delta(setup: &Setup) -> Report {
    let mut r = new_report(setup, "estimate-delta");
    let d = &setup.delta;
    r.set("delta", d.delta);
    r.set("thinness", d.thinness);
    r.set("triangles", d.triangles);
    r.set("exhaustive", d.exhaustive);
    r.set("witness", d.witness.map(|w| labels(setup, &w)));
    r.set("profile_delta", setup.profile.delta);
    r
}

fn pick_pairs(setup: &Setup, sel: &Selection, stream: u64) -> Result<Vec<(u32, u32)>, HarnessError> {
    let tr = Translator::new(&setup.model, &setup.periph, &setup.ball);
    let vertex_of = |w: &String| -> Result<u32, HarnessError> {
        let g = setup.parse(w)?;
        tr.id_of(&g).ok_or_else(|| HarnessError::Config(format!("{w} is not in the ball")))
    };
    if let (Some(a), Some(x)) = (&sel.target, &sel.source) {
        return Ok(vec![(vertex_of(a)?, vertex_of(x)?)]);
    }
    let mut rng = setup.rng(stream);
    let n = setup.ball.len() as u32;
    let fixed_a = sel.target.as_ref().map(vertex_of).transpose()?;
    let fixed_x = sel.source.as_ref().map(vertex_of).transpose()?;
    Ok((0..setup.config.run.samples)
        .map(|_| (fixed_a.unwrap_or_else(|| rng.gen_range(0..n)), fixed_x.unwrap_or_else(|| rng.gen_range(0..n))))
        .collect())
}

/// Masks of sampled pairs: probability, stationarity, and equivariance
/// under sampled translations.
pub fn masks(setup: &Setup, sel: &Selection) -> Result<Report, HarnessError> {
    let mut r = new_report(setup, "mask");
    let mut flow = Flow::new(&setup.ball, setup.profile.clone());
    let mut table = Table::new(&["target", "source", "vertex", "weight"]);
    let (mut computed, mut uncertified) = (0u64, 0u64);
    for (a, x) in pick_pairs(setup, sel, 1)? {
        let mask = match flow.mask(a, x) {
            Ok(m) => m,
            Err(e) => {
                if !record_geom_error(setup, &mut r, "mask", &e) {
                    uncertified += 1;
                }
                continue;
            }
        };
        computed += 1;
        let w = labels(setup, &[a, x]);
        if !mask.measure.is_probability() {
            r.fail("mass", w.clone(), format!("total {}", rational(&mask.measure.total())));
        }
        match flow.flow_step(a, &mask.measure) {
            Ok(next) if next == mask.measure => {}
            Ok(_) => r.fail("stationarity", w.clone(), "one more step changes the mask"),
            Err(e) => r.fail("stationarity", w.clone(), e.to_string()),
        }
        if mask.stationarity > mask.r + 1 {
            r.fail("stationarity", w.clone(), format!("{} changing steps for r = {}", mask.stationarity, mask.r));
        }
        for (v, wt) in mask.measure.iter() {
            table.push(vec![w[0].clone(), w[1].clone(), setup.label(v), rational(wt)]);
        }
    }
    r.set("masks", computed);
    r.set("uncertified", uncertified);
    let checked = equivariance(setup, &mut flow, &mut r, setup.config.run.samples);
    r.set("translations_checked", checked);
    r.table = Some(table);
    Ok(r)
}

/// Compares `g·μ_x(a)` with `μ_{gx}(ga)` for random `a, x, g` until
/// `wanted` certified instances were seen.
pub fn equivariance(setup: &Setup, flow: &mut Flow<'_>, r: &mut Report, wanted: usize) -> u64 {
    let tr = Translator::new(&setup.model, &setup.periph, &setup.ball);
    let mut rng = setup.rng(2);
    let n = setup.ball.len() as u32;
    let mut checked = 0u64;
    for _ in 0..40 * wanted {
        if checked as usize >= wanted {
            break;
        }
        let (a, x) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let g = random_nontrivial(&setup.model, &mut rng, 2);
        let (Some(ga), Some(gx)) = (tr.translate(&g, a), tr.translate(&g, x)) else { continue };
        let (Ok(here), Ok(there)) = (flow.mask(a, x), flow.mask(ga, gx)) else { continue };
        let moved: Option<Vec<_>> = here.measure.iter().map(|(v, w)| tr.translate(&g, v).map(|u| (u, w.clone()))).collect();
        let Some(moved) = moved else { continue };
        checked += 1;
        if SparseMeasure::from_weights(moved) != there.measure {
            let mut w = labels(setup, &[a, x]);
            w.push(element_label(&setup.model, &g));
            r.fail("equivariance", w, "translated mask differs");
        }
    }
    checked
}

fn elements_to_evaluate(setup: &Setup) -> Result<Vec<GroupElement>, HarnessError> {
    if !setup.config.run.elements.is_empty() {
        return setup.config.run.elements.iter().map(|w| setup.parse(w)).collect();
    }
    let mut rng = setup.rng(3);
    let len = setup.config.ball.radius.max(1) as usize;
    Ok(sample_elements(setup, &mut rng, setup.config.run.samples.min(8), len))
}

/// Norms of `c(g)` by shells, the witness lower bound, and the cocycle
/// identity on sampled pairs.
pub fn cocycles(setup: &Setup) -> Result<Report, HarnessError> {
    let mut r = new_report(setup, "cocycle");
    let tr = Translator::new(&setup.model, &setup.periph, &setup.ball);
    let mut flow = Flow::new(&setup.ball, setup.profile.clone());
    let targets = all_targets(&flow);
    let mut table = Table::new(&["element", "p", "shell", "count", "nonzero", "l1_sum", "p_sum"]);
    let mut norms = Vec::new();
    for g in elements_to_evaluate(setup)? {
        let name = element_label(&setup.model, &g);
        let value = match cocycle_of(&mut flow, &tr, &g, &targets) {
            Ok(v) => v,
            Err(e) => {
                r.fail("cocycle", vec![name], e.to_string());
                continue;
            }
        };
        for (a, e) in value.violations() {
            r.fail("cocycle", vec![name.clone(), setup.label(*a)], e.to_string());
        }
        for &p in &setup.config.run.p {
            let report = match lp_norm(&mut flow, &value, p) {
                Ok(rep) => rep,
                Err(e) => {
                    r.fail("norm", vec![name.clone()], e.to_string());
                    continue;
                }
            };
            for s in &report.shells {
                table.push(vec![
                    name.clone(),
                    p.to_string(),
                    s.r.to_string(),
                    s.count.to_string(),
                    s.nonzero.to_string(),
                    rational(&s.l1_sum),
                    s.sum.to_string(),
                ]);
            }
            let witnesses = report.census.as_ref().map_or(0, |c| c.witnesses);
            if let Some(c) = &report.census {
                if !c.failures.is_empty() {
                    r.fail("non-confluence", labels(setup, &c.failures), format!("masks overlap for {name}"));
                }
            }
            let full_levels = report.census.as_ref().map_or(0, |c| c.full_levels);
            let bound = witnesses.max(full_levels) as f64 * 2f64.powf(p);
            if report.total < bound {
                r.fail("witness bound", vec![name.clone()], format!("{} < {bound}", report.total));
            }
            norms.push(json!({
                "element": name,
                "p": p,
                "norm": report.norm(),
                "total": report.total,
                "witnesses": witnesses,
                "full_levels": full_levels,
                "distance": flow.geometry().certified_distance(value.base, value.source).ok(),
                "certified_targets": value.entries.len(),
                "excluded_targets": value.excluded.len(),
                "tail_rate": report.tail.map(|t| t.rate),
                "tail_residual": report.tail.map(|t| t.residual),
                "tail_shells": report.tail.map(|t| t.points),
                "summability": report.summability_condition(),
            }));
        }
    }
    r.set("norms", norms);

    let near = near_identity(setup, &mut flow, (setup.config.ball.radius / 2).max(1));
    let mut rng = setup.rng(4);
    let half = (setup.config.ball.radius / 2).max(1) as usize;
    let (mut pairs, mut entries) = (0u64, 0u64);
    for _ in 0..setup.config.run.samples {
        let (g1, g2) = (random_element(&setup.model, &mut rng, half), random_element(&setup.model, &mut rng, half));
        match verify_cocycle_identity(&mut flow, &tr, &g1, &g2, &near) {
            Ok(check) => {
                if !check.checked.is_empty() {
                    pairs += 1;
                    entries += check.checked.len() as u64;
                }
                if let Some(a) = check.witness {
                    let w = vec![element_label(&setup.model, &g1), element_label(&setup.model, &g2), setup.label(a)];
                    r.fail("cocycle identity", w, "sides differ");
                }
            }
            Err(e) => {
                let w = vec![element_label(&setup.model, &g1), element_label(&setup.model, &g2)];
                if !e.is_uncertified() {
                    r.fail("cocycle identity", w, e.to_string());
                }
            }
        }
    }
    r.set("identity_pairs_checked", pairs);
    r.set("identity_entries_checked", entries);
    r.table = Some(table);
    Ok(r)
}

/// Decay of symmetric differences under the flow on sampled pairs, and the
/// non-confluence value on sampled geodesics.
pub fn confluence(setup: &Setup) -> Report {
    let mut r = new_report(setup, "confluence");
    let mut flow = Flow::new(&setup.ball, setup.profile.clone());
    let one = setup.identity();
    let step = setup.profile.step;
    let k = (setup.config.ball.radius / step).saturating_sub(1).max(1);
    let radius = step * (k + 1);
    let sphere: Vec<u32> = (0..setup.ball.len() as u32)
        .filter(|&v| flow.geometry().certified_distance(one, v) == Ok(radius))
        .collect();
    let mut rng = setup.rng(5);
    let (mut instances, mut skipped) = (0u64, 0u64);
    let mut cone_bound = 0usize;
    let mut table = Table::new(&["target", "u", "v", "step", "norm", "bound"]);
    let close = 8 * setup.profile.delta;
    for _ in 0..if sphere.is_empty() { 0 } else { setup.config.run.samples } {
        let u = sphere[rng.gen_range(0..sphere.len())];
        let near: Vec<u32> = sphere
            .iter()
            .copied()
            .filter(|&v| v != u && flow.geometry().certified_distance(u, v).is_ok_and(|d| d < close))
            .collect();
        if near.is_empty() {
            continue;
        }
        let v = near[rng.gen_range(0..near.len())];
        match confluence_decay_report(&mut flow, one, &SparseMeasure::dirac(u), &SparseMeasure::dirac(v), k) {
            Ok(rep) if rep.skipped.is_none() => {
                instances += 1;
                cone_bound = cone_bound.max(rep.cone_bound);
                for (i, (n, b)) in rep.norms.iter().zip(&rep.bounds).enumerate() {
                    table.push(vec![setup.label(one), setup.label(u), setup.label(v), i.to_string(), rational(n), rational(b)]);
                }
                if !rep.violations.is_empty() {
                    r.fail("decay bound", labels(setup, &[one, u, v]), format!("steps {:?}", rep.violations));
                }
            }
            Ok(_) => skipped += 1,
            Err(e) => {
                if !record_geom_error(setup, &mut r, "decay bound", &e) {
                    skipped += 1;
                }
            }
        }
    }
    r.set("decay_steps", k);
    r.set("decay_sphere", sphere.len());
    r.set("decay_instances", instances);
    r.set("decay_skipped", skipped);
    r.set("cone_bound", cone_bound);

    let n = setup.ball.len() as u32;
    let mut cases = 0u64;
    for _ in 0..setup.config.run.samples {
        let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let Ok(interval) = flow.geometry().interval(x, y) else { continue };
        for a in interval.vertices() {
            match non_confluence_check(&mut flow, a, x, y) {
                Ok(Some((case, full))) => {
                    cases += 1;
                    if !full {
                        r.fail("non-confluence", labels(setup, &[a, x, y]), format!("{case:?}: masks overlap"));
                    }
                }
                Ok(None) => {}
                Err(e) => {
                    record_geom_error(setup, &mut r, "non-confluence", &e);
                }
            }
        }
    }
    r.set("non_confluence_instances", cases);
    r.table = Some(table);
    r
}

/// Masks through vertices of huge angle on sampled geodesics.
pub fn checkpoints(setup: &Setup) -> Report {
    let mut r = new_report(setup, "checkpoint");
    let mut flow = Flow::new(&setup.ball, setup.profile.clone());
    let ball = &setup.ball;
    let n = ball.len() as u32;
    let mut rng = setup.rng(6);
    let (mut equal, mut skipped) = (0u64, 0u64);
    let mut reasons: BTreeMap<String, u64> = BTreeMap::new();
    for _ in 0..setup.config.run.samples {
        let (a, x) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let nbrs = ball.neighbours(x);
        if nbrs.is_empty() {
            continue;
        }
        let x_prime = nbrs[rng.gen_range(0..nbrs.len())];
        let Ok(interval) = flow.geometry().interval(a, x) else { continue };
        let inner: Vec<u32> = interval.vertices().filter(|&c| c != a && c != x && ball.infinite_valence(c)).collect();
        for c in inner {
            match checkpoint_test(&mut flow, a, x, x_prime, c) {
                Ok(CheckpointOutcome::Equal) => equal += 1,
                Ok(CheckpointOutcome::NotEqual { differing }) => {
                    r.fail("checkpoint", labels(setup, &[a, x, x_prime, c]), format!("differing {:?}", labels(setup, &differing)))
                }
                Ok(CheckpointOutcome::Skipped(why)) => {
                    skipped += 1;
                    *reasons.entry(why).or_default() += 1;
                }
                Err(e) => {
                    if !record_geom_error(setup, &mut r, "checkpoint", &e) {
                        skipped += 1;
                    }
                }
            }
        }
    }
    r.set("equal", equal);
    r.set("skipped", skipped);
    r.set("skip_reasons", reasons);
    r
}

fn flow_reps(setup: &Setup, flow: &mut Flow<'_>, i: usize) -> Result<RandomCosetReps, InductionError> {
    let tr = Translator::new(&setup.model, &setup.periph, &setup.ball);
    let keys = cone_keys(flow, i);
    coset_reps_from_flow(flow, &tr, i, &keys)
}

fn key_label(setup: &Setup, k: &CosetKey) -> String {
    format!("{}H{}", element_label(&setup.model, &k.rep), k.index)
}

fn measure_label(setup: &Setup, m: &BTreeMap<GroupElement, num_rational::BigRational>) -> String {
    m.iter().map(|(g, w)| format!("{}:{}", element_label(&setup.model, g), rational(w))).collect::<Vec<_>>().join(";")
}

/// Random coset representatives from masks of cone vertices, their
/// almost-invariance, and their agreement with canonical representatives
/// when the subgroup is a free factor.
pub fn coset_reps(setup: &Setup) -> Report {
    let mut r = new_report(setup, "coset-reps");
    let mut flow = Flow::new(&setup.ball, setup.profile.clone());
    let mut table = Table::new(&["peripheral", "coset", "support", "measure"]);
    let mut rng = setup.rng(7);
    let mut per = Vec::new();
    for i in 0..setup.periph.len() {
        let reps = match flow_reps(setup, &mut flow, i) {
            Ok(reps) => reps,
            Err(e) => {
                r.fail("coset reps", vec![i.to_string()], e.to_string());
                continue;
            }
        };
        for k in reps.section_failures(&setup.model, &setup.periph) {
            r.fail("section", vec![key_label(setup, &k)], "support leaves the coset");
        }
        for (k, m) in &reps.reps {
            table.push(vec![i.to_string(), key_label(setup, k), m.len().to_string(), measure_label(setup, m)]);
        }
        let keys: Vec<CosetKey> = reps.reps.keys().cloned().collect();
        let is_factor = matches!(setup.config.peripherals.get(i), Some(PeripheralConfig::Factor { .. }));
        let agreement = if is_factor {
            free_product_baseline(&setup.model, &setup.periph, i, &keys).ok().map(|base| {
                keys.iter().filter(|k| base.get(k) == reps.get(k)).count()
            })
        } else {
            None
        };
        let mut deviations = Vec::new();
        for _ in 0..setup.config.run.samples.min(10) {
            let gamma = random_nontrivial(&setup.model, &mut rng, 2);
            let rep = almost_invariance_report(&reps, &setup.model, &setup.periph, &gamma, setup.config.run.p[0]);
            deviations.push(json!({
                "gamma": element_label(&setup.model, &gamma),
                "nonzero": rep.nonzero,
                "p_sum": rep.p_sum,
                "frontier": rep.frontier.len(),
            }));
        }
        per.push(json!({
            "peripheral": i,
            "cosets": reps.reps.len(),
            "excluded": reps.excluded.len(),
            "support_bound": reps.support_bound(),
            "equal_to_canonical": agreement,
            "deviations": deviations,
        }));
    }
    r.set("peripherals", per);
    r.table = Some(table);
    r
}

fn h_models(setup: &Setup, p: f64) -> Result<Vec<HCocycleModel>, HarnessError> {
    setup
        .config
        .h_cocycle
        .iter()
        .map(|h| builtin_h_cocycle(&setup.periph, h.peripheral, h.kind()?, p).map_err(|e| HarnessError::Config(e.to_string())))
        .collect()
}

/// The induced cocycle from each configured peripheral cocycle: identities,
/// equivariance and the properness estimate.
pub fn induce(setup: &Setup) -> Result<Report, HarnessError> {
    let mut r = new_report(setup, "induce");
    let p = setup.config.run.p[0];
    let mut flow = Flow::new(&setup.ball, setup.profile.clone());
    let mut table =
        Table::new(&["peripheral", "gamma", "coset", "l1_deviation", "contribution", "induced_norm"]);
    let mut rng = setup.rng(8);
    let mut per = Vec::new();
    let (mut gammas_checked, mut equivariance) = (0u64, 0u64);
    for h in h_models(setup, p)? {
        let i = h.peripheral;
        let reps = match flow_reps(setup, &mut flow, i) {
            Ok(reps) => reps,
            Err(e) => {
                r.fail("coset reps", vec![i.to_string()], e.to_string());
                continue;
            }
        };
        let keys: Vec<CosetKey> = reps.reps.keys().cloned().collect();
        let ind = Induction::new(&setup.model, &setup.periph, &reps, &h);
        let hs: Vec<GroupElement> =
            setup.periph.ball(&setup.model, i, 2).into_iter().filter(|g| !g.is_identity()).collect();
        let mut gammas = Vec::new();
        for _ in 0..setup.config.run.samples {
            let g1 = random_nontrivial(&setup.model, &mut rng, 2);
            let g2 = random_element(&setup.model, &mut rng, 2);
            let w = || vec![element_label(&setup.model, &g1), element_label(&setup.model, &g2)];
            match ind.verify_identities(&g1, &g2, &keys, &hs) {
                Ok(check) => {
                    if check.checked > 0 {
                        gammas_checked += 1;
                    }
                    equivariance += check.equivariance_checks as u64;
                    if let Some(k) = &check.cocycle_witness {
                        r.fail("induced cocycle identity", [w(), vec![key_label(setup, k)]].concat(), "sides differ");
                    }
                    if let Some(k) = &check.potential_witness {
                        r.fail("induced coboundary", [w(), vec![key_label(setup, k)]].concat(), "sides differ");
                    }
                    if let Some((k, hh)) = &check.equivariance_witness {
                        let extra = vec![key_label(setup, k), element_label(&setup.model, hh)];
                        r.fail("induced equivariance", [w(), extra].concat(), "sides differ");
                    }
                }
                Err(e) => r.fail("induced cocycle identity", w(), e.to_string()),
            }
            gammas.push(g1);
        }
        for gamma in gammas.iter().take(5) {
            let (Ok(value), Ok(contribution)) = (ind.induced_cocycle(gamma, &keys), ind.contribution(gamma, &keys)) else {
                continue;
            };
            let dev = almost_invariance_report(&reps, &setup.model, &setup.periph, gamma, p);
            let dev: BTreeMap<_, _> = dev.rows.into_iter().collect();
            let con: BTreeMap<_, _> = contribution.rows.into_iter().collect();
            for (k, v) in &value.values {
                table.push(vec![
                    i.to_string(),
                    element_label(&setup.model, gamma),
                    key_label(setup, k),
                    dev.get(k).map_or_else(String::new, rational),
                    con.get(k).map_or_else(String::new, rational),
                    h.norm(v).to_string(),
                ]);
            }
        }
        let probe = ind.h_properness_probe(&gammas, &keys);
        per.push(match probe {
            Ok(probe) => {
                for row in &probe.rows {
                    if !row.inequality_failures.is_empty() {
                        let w = row.inequality_failures.iter().map(|k| key_label(setup, k)).collect();
                        r.fail("properness inequality", w, element_label(&setup.model, &row.gamma));
                    }
                }
                json!({
                    "peripheral": i,
                    "support_diameter": probe.support_diameter,
                    "d_c": probe.d_c,
                    "m": probe.m,
                    "radius": probe.radius,
                    "trend": probe.trend,
                    "inconclusive": probe.inconclusive,
                })
            }
            Err(e) => json!({ "peripheral": i, "error": e.to_string() }),
        });
    }
    r.set("gammas_checked", gammas_checked);
    r.set("equivariance_checks", equivariance);
    r.set("peripherals", per);
    r.table = Some(table);
    Ok(r)
}

/// For each configured family `g^0, …, g^n`, a tube around the family and
/// the dichotomy rows.
pub fn dichotomy(setup: &Setup) -> Result<Report, HarnessError> {
    let mut r = new_report(setup, "dichotomy");
    let cfg = &setup.config.dichotomy;
    let p = setup.config.run.p[0];
    let mut table = Table::new(&[
        "family",
        "element",
        "word_length",
        "coned_off",
        "theta",
        "dprime",
        "cocycle_norm",
        "contributions",
        "max_contribution",
        "branch",
    ]);
    let mut families = Vec::new();
    for word in &cfg.families {
        let g = setup.parse(word)?;
        let powers: Vec<GroupElement> = (0..=cfg.max_power)
            .scan(setup.model.identity(), |acc, _| {
                let here = acc.clone();
                *acc = setup.model.multiply(acc, &g);
                Some(here)
            })
            .collect();
        let sources: Vec<Vertex> = powers.iter().cloned().map(Vertex::Group).collect();
        let reach = cfg.max_power * setup.model.word_length(&g) as u32 + cfg.tube_radius;
        let depth = setup.config.ball.coset_depth.max(reach);
        let tube = match build_region(&setup.model, &setup.periph, &sources, cfg.tube_radius, depth, setup.config.run.max_vertices) {
            Ok(t) => t,
            Err(e) => {
                r.partial = true;
                r.fail("resource cap", vec![word.clone()], e.to_string());
                continue;
            }
        };
        let input = DichotomyInput {
            model: &setup.model,
            periph: &setup.periph,
            ball: &tube,
            profile: setup.profile.clone(),
            h_cocycles: h_models(setup, p)?,
            threshold: cfg.threshold,
        };
        let rep = match dichotomy_report(&input, &powers, p) {
            Ok(rep) => rep,
            Err(e) => {
                r.fail("dichotomy", vec![word.clone()], e.to_string());
                continue;
            }
        };
        for row in &rep.rows {
            let branch = match (row.branch.coned_off, row.branch.angles) {
                (true, true) => "both",
                (true, false) => "coned_off",
                (false, true) => "angles",
                (false, false) => "small",
            };
            table.push(vec![
                word.clone(),
                row.element.clone(),
                row.word_length.to_string(),
                row.coned_off.to_string(),
                row.theta.to_string(),
                row.dprime.to_string(),
                row.cocycle_norm.to_string(),
                row.contributions.join(";"),
                row.max_contribution.to_string(),
                branch.into(),
            ]);
        }
        if !rep.unclassified.is_empty() {
            r.fail("dichotomy", rep.unclassified.clone(), "row in neither branch");
        }
        families.push(json!({ "family": word, "tube_vertices": tube.len(), "report": rep }));
    }
    r.set("families", families);
    r.table = Some(table);
    Ok(r)
}

/// Property checks on the ball: cone composition, the cone angle bound,
/// vertices of wide angle, and conical thinness.
pub fn geometry_checks(setup: &Setup) -> Report {
    let mut r = new_report(setup, "geometry");
    let mut rng = setup.rng(9);
    let samples = setup.config.run.samples;
    let composition = checks::cone_composition(&setup.ball, &[(1, 1), (1, 2), (2, 1)]);
    let angle = checks::cone_angle_bound(&setup.ball, &[10]);
    let wide = checks::wide_angles_cut_geodesics(&setup.ball, setup.profile.goulet, samples, &mut rng);
    let (thin, triangles) = checks::conical_thinness(&setup.ball, setup.profile.thinness, samples, &mut rng);
    for (name, t) in [
        ("cone composition", &composition),
        ("cone angle bound", &angle),
        ("wide angle on every geodesic", &wide),
        ("conical thinness", &thin),
    ] {
        for w in &t.failures {
            r.fail(name, labels(setup, w), "");
        }
        let key = name.replace(' ', "_");
        r.set(&key, json!({ "checked": t.checked, "unknown": t.unknown, "failures": t.failures.len() }));
    }
    r.set("triangles", triangles);
    r
}

/// Runs one named suite.
pub fn run(name: &str, setup: &Setup, sel: &Selection) -> Result<Report, HarnessError> {
    Ok(match name {
        "build-ball" => build_ball(setup),
        "estimate-delta" => estimate_delta(setup),
        "mask" => masks(setup, sel)?,
        "cocycle" => cocycles(setup)?,
        "confluence" => confluence(setup),
        "checkpoint" => checkpoints(setup),
        "coset-reps" => coset_reps(setup),
        "induce" => induce(setup)?,
        "dichotomy" => dichotomy(setup)?,
        "geometry" => geometry_checks(setup),
        other => return Err(HarnessError::Config(format!("unknown suite `{other}`"))),
    })
}

/// Every suite, one thread each, merged in the order of [`SUITES`].
pub fn run_all(setup: &Setup) -> Result<Vec<Report>, HarnessError> {
    std::thread::scope(|scope| {
        let handles: Vec<_> =
            SUITES.iter().map(|s| scope.spawn(move || run(s, setup, &Selection::default()))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    })
}

