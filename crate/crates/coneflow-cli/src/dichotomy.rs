//! Growth of a family of elements, split into the part seen by the coned-off
//! cocycle and the part seen by the peripheral contributions.

use coneflow::cocycle::{all_targets, cocycle_of, lp_norm, theta_and_dprime, LineFit, Translator};
use coneflow::fine_graph::{Ball, ConstantsProfile};
use coneflow::geodesic_flow::Flow;
use coneflow::group_models::{CosetKey, GroupElement, GroupModel, PeripheralStructure};
use coneflow::induction::{cone_keys, coset_reps_from_flow, HCocycleModel, Induction, InductionError, RandomCosetReps};
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::report::rational;
use crate::setup::element_label;

/// Which way a row is large.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub coned_off: bool,
    pub angles: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DichotomyRow {
    pub element: String,
    pub word_length: usize,
    pub coned_off: u32,
    pub theta: u64,
    pub dprime: u64,
    /// `theta` is only a lower bound.
    pub theta_lower_bound: bool,
    /// ℓ^p norm of the coned-off cocycle over the certified targets.
    pub cocycle_norm: f64,
    /// Largest contribution per configured peripheral, as `num/den`.
    pub contributions: Vec<String>,
    pub max_contribution: f64,
    /// Cosets whose translate had no measure.
    pub frontier: usize,
    pub branch: Branch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Escape {
    ConedOff,
    Angles,
    Neither,
}

/// Rows for one family, with growth statistics over consecutive rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DichotomyReport {
    pub p: f64,
    /// Rows with `d′` above this must be large in at least one branch.
    pub threshold: u64,
    pub rows: Vec<DichotomyRow>,
    pub classification: Escape,
    /// Fractions of consecutive steps with a strict increase.
    pub coned_off_increasing: f64,
    pub theta_increasing: f64,
    pub norm_increasing: f64,
    pub contribution_increasing: f64,
    /// Among steps where `d′` grows, the fraction where
    /// `cocycle_norm + max_contribution` grows too.
    pub growth_consistent: Option<f64>,
    /// `A, B` with `d_w / A − B ≤ d′` on every row.
    pub word_metric_fit: Option<(f64, f64)>,
    /// Rows with `d′ > threshold` in neither branch.
    pub unclassified: Vec<String>,
    pub inconclusive: Option<String>,
}

pub struct DichotomyInput<'a> {
    pub model: &'a GroupModel,
    pub periph: &'a PeripheralStructure,
    pub ball: &'a Ball,
    pub profile: ConstantsProfile,
    /// Peripheral cocycles, at most one per peripheral.
    pub h_cocycles: Vec<HCocycleModel>,
    pub threshold: u64,
}

fn increasing(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let up = values.windows(2).filter(|w| w[1] > w[0]).count();
    up as f64 / (values.len() - 1) as f64
}

/// Rows for `samples`, in order, and how the family escapes.
pub fn dichotomy_report(
    input: &DichotomyInput<'_>,
    samples: &[GroupElement],
    p: f64,
) -> Result<DichotomyReport, InductionError> {
    let ball = input.ball;
    let tr = Translator::new(input.model, input.periph, ball);
    let mut flow = Flow::new(ball, input.profile.clone());
    let targets = all_targets(&flow);
    let one = tr.identity().ok_or_else(|| InductionError::Unsupported("identity outside the ball".into()))?;

    let mut reps: Vec<(RandomCosetReps, Vec<CosetKey>)> = Vec::new();
    for h in &input.h_cocycles {
        let keys = cone_keys(&flow, h.peripheral);
        reps.push((coset_reps_from_flow(&mut flow, &tr, h.peripheral, &keys)?, keys));
    }

    let cap = input.profile.support_cone;
    let half = input.threshold / 2;
    let mut rows = Vec::new();
    for g in samples {
        let v = tr.id_of(g).ok_or_else(|| InductionError::Unsupported(format!("{} outside the ball", input.model.format(g))))?;
        let ad = theta_and_dprime(flow.geometry(), one, v, cap)?;
        let value = cocycle_of(&mut flow, &tr, g, &targets)?;
        let cocycle_norm = lp_norm(&mut flow, &value, p)?.norm();
        let mut contributions = Vec::new();
        let mut max_contribution = 0.0f64;
        let mut frontier = 0;
        for (h, (r, keys)) in input.h_cocycles.iter().zip(&reps) {
            let ind = Induction::new(input.model, input.periph, r, h);
            let c = ind.contribution(g, keys)?;
            max_contribution = max_contribution.max(c.max.to_f64().unwrap_or(f64::INFINITY));
            frontier += c.frontier.len();
            contributions.push(rational(&c.max));
        }
        rows.push(DichotomyRow {
            element: element_label(input.model, g),
            word_length: input.model.word_length(g),
            coned_off: ad.d,
            theta: ad.theta,
            dprime: ad.dprime,
            theta_lower_bound: ad.lower_bound,
            cocycle_norm,
            contributions,
            max_contribution,
            frontier,
            branch: Branch { coned_off: u64::from(ad.d) > half, angles: ad.theta > half },
        });
    }

    let col = |f: &dyn Fn(&DichotomyRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let coned_off_increasing = increasing(&col(&|r| f64::from(r.coned_off)));
    let theta_increasing = increasing(&col(&|r| r.theta as f64));
    let norm_increasing = increasing(&col(&|r| r.cocycle_norm));
    let contribution_increasing = increasing(&col(&|r| r.max_contribution));

    let mut grows = 0;
    let mut consistent = 0;
    for w in rows.windows(2) {
        if w[1].dprime > w[0].dprime {
            grows += 1;
            if w[1].cocycle_norm + w[1].max_contribution > w[0].cocycle_norm + w[0].max_contribution {
                consistent += 1;
            }
        }
    }
    let growth_consistent = (grows > 0).then(|| f64::from(consistent) / f64::from(grows));

    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.word_length as f64, r.dprime as f64)).collect();
    let word_metric_fit = LineFit::fit(&points).filter(|f| f.slope > 0.0).map(|f| {
        let a = 1.0 / f.slope;
        let b = points.iter().map(|&(w, d)| w / a - d).fold(0.0f64, f64::max);
        (a, b)
    });

    let unclassified = rows
        .iter()
        .filter(|r| r.dprime > input.threshold && !r.branch.coned_off && !r.branch.angles)
        .map(|r| r.element.clone())
        .collect();
    let spread = |f: &dyn Fn(&DichotomyRow) -> u64| {
        let v: Vec<u64> = rows.iter().map(f).collect();
        v.iter().max().copied().unwrap_or(0) - v.iter().min().copied().unwrap_or(0)
    };
    let classification = if coned_off_increasing >= 0.8 {
        Escape::ConedOff
    } else if spread(&|r| u64::from(r.coned_off)) <= 2 && theta_increasing >= 0.8 {
        Escape::Angles
    } else {
        Escape::Neither
    };
    let inconclusive = rows
        .iter()
        .all(|r| r.dprime <= input.threshold)
        .then(|| format!("every sample has d′ at most {}", input.threshold));

    Ok(DichotomyReport {
        p,
        threshold: input.threshold,
        rows,
        classification,
        coned_off_increasing,
        theta_increasing,
        norm_increasing,
        contribution_increasing,
        growth_consistent,
        word_metric_fit,
        unclassified,
        inconclusive,
    })
}
