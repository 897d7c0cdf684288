use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::signed::{meet, norm, sym_diff};
use crate::fine_graph::{ConeMode, GeomError, Tri};
use crate::geodesic_flow::{Flow, SparseMeasure};

/// Both forms of the confluence inequality for one pair of measures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfluenceCheck {
    /// `‖M(Tη, Tη′)‖ ≥ ‖M(η, η′)‖ + β‖η Δ η′‖`.
    pub meet_form: bool,
    /// `‖Tη Δ Tη′‖ ≤ (1 − 2β)‖η Δ η′‖`.
    pub diff_form: bool,
    pub before: BigRational,
    pub after: BigRational,
}

impl ConfluenceCheck {
    pub fn holds(&self) -> bool {
        self.meet_form
    }

    pub fn forms_agree(&self) -> bool {
        self.meet_form == self.diff_form
    }
}

/// Whether one flow step toward `a` is `β`-confluent on `(η, η′)`.
pub fn is_beta_confluent(
    flow: &mut Flow<'_>,
    a: u32,
    eta: &SparseMeasure,
    eta_prime: &SparseMeasure,
    beta: &BigRational,
) -> Result<ConfluenceCheck, GeomError> {
    let t = flow.flow_step(a, eta)?;
    let t_prime = flow.flow_step(a, eta_prime)?;
    let before = norm(&sym_diff(eta, eta_prime));
    let after = norm(&sym_diff(&t, &t_prime));
    let meet_form = norm(&meet(&t, &t_prime)) >= norm(&meet(eta, eta_prime)) + beta * &before;
    let two = BigRational::from_integer(2.into());
    let diff_form = after <= (BigRational::one() - two * beta) * &before;
    Ok(ConfluenceCheck { meet_form, diff_form, before, after })
}

/// The contraction sequence of two measures under repeated flow steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecayReport {
    /// `‖T^i η Δ T^i η′‖` for `i = 0..=k`.
    pub norms: Vec<BigRational>,
    /// `None` when the hypotheses hold; otherwise the failed hypothesis.
    pub skipped: Option<String>,
    /// Largest cone size seen among the cones of the supports.
    pub cone_bound: usize,
    /// Whether some cone reached outside the ball, making `cone_bound` a
    /// lower bound only.
    pub cone_bound_partial: bool,
    /// `(1 − 2/C)^i ‖η Δ η′‖`, one per step.
    pub bounds: Vec<BigRational>,
    /// Steps where the sequence exceeds the bound.
    pub violations: Vec<usize>,
}

/// Runs `k` flow steps toward `a` from both measures and compares the
/// symmetric differences with the geometric bound.
pub fn confluence_decay_report(
    flow: &mut Flow<'_>,
    a: u32,
    eta: &SparseMeasure,
    eta_prime: &SparseMeasure,
    k: u32,
) -> Result<DecayReport, GeomError> {
    let mut norms = Vec::new();
    let (mut p, mut q) = (eta.clone(), eta_prime.clone());
    norms.push(norm(&sym_diff(&p, &q)));
    for _ in 0..k {
        p = flow.flow_step(a, &p)?;
        q = flow.flow_step(a, &q)?;
        norms.push(norm(&sym_diff(&p, &q)));
    }

    let step = flow.profile().step;
    let delta = flow.profile().delta;
    let sphere = step * (k + 1);
    let mut union = eta.support();
    union.extend(eta_prime.support());
    union.sort_unstable();
    union.dedup();
    let mut skipped = None;
    for &v in &union {
        if flow.geometry().certified_distance(a, v)? != sphere {
            skipped = Some("supports not on the sphere of radius 5(k+1)δ".into());
        }
    }
    if skipped.is_none() {
        'outer: for (i, &u) in union.iter().enumerate() {
            for &v in &union[i + 1..] {
                if flow.geometry().certified_distance(u, v)? >= 8 * delta {
                    skipped = Some("union of supports has diameter at least 8δ".into());
                    break 'outer;
                }
            }
        }
    }

    let mut report = DecayReport {
        norms,
        skipped,
        cone_bound: 0,
        cone_bound_partial: false,
        bounds: Vec::new(),
        violations: Vec::new(),
    };
    if report.skipped.is_some() {
        return Ok(report);
    }

    let theta = flow.profile().support_cone;
    for &y in &union {
        let d = flow.geometry().certified_distance(a, y)?;
        let mut rho = 0;
        while rho < d {
            for e in flow.geometry().geodesic_edges(a, y, rho)? {
                let cone = flow.geometry().cone_in(e, theta, ConeMode::Sure);
                report.cone_bound = report.cone_bound.max(cone.vertices.len());
                if !flow.ball().is_complete()
                    && !flow.geometry().cone_in(e, theta, ConeMode::Optimistic).hubs.is_empty()
                {
                    report.cone_bound_partial = true;
                }
            }
            rho += step;
        }
    }
    let c = BigRational::from_integer(BigInt::from(report.cone_bound.max(2)));
    let ratio = BigRational::one() - BigRational::from_integer(2.into()) / c;
    let mut factor = BigRational::one();
    for (i, n) in report.norms.iter().enumerate() {
        let bound = &factor * &report.norms[0];
        if *n > bound {
            report.violations.push(i);
        }
        report.bounds.push(bound);
        factor *= &ratio;
    }
    Ok(report)
}

/// Which hypothesis of the non-confluence statement an instance satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonConfluenceCase {
    /// `a` of finite valence on a geodesic between the sources, far from both.
    FiniteOnGeodesic,
    /// `a` of infinite valence with a huge angle between the sources.
    WideAngle,
}

/// If `(a, x, x′)` satisfies a non-confluence hypothesis, returns the case
/// and whether `‖μ_x(a) Δ μ_{x′}(a)‖ = 2`.
pub fn non_confluence_check(
    flow: &mut Flow<'_>,
    a: u32,
    x: u32,
    x_prime: u32,
) -> Result<Option<(NonConfluenceCase, bool)>, GeomError> {
    let delta = flow.profile().delta;
    let case = if flow.ball().infinite_valence(a) {
        let threshold = flow.profile().non_confluence;
        match flow.geometry().vertex_angle_exceeds(a, x, x_prime, threshold) {
            Tri::True => NonConfluenceCase::WideAngle,
            Tri::False => return Ok(None),
            Tri::Unknown => return Err(GeomError::uncertified("non-confluence angle", &[a, x, x_prime])),
        }
    } else {
        let d = flow.geometry().certified_distance(x, x_prime)?;
        let dx = flow.geometry().certified_distance(a, x)?;
        let dxp = flow.geometry().certified_distance(a, x_prime)?;
        if dx + dxp != d || d < 10 * delta || dx < 5 * delta || dxp < 5 * delta {
            return Ok(None);
        }
        NonConfluenceCase::FiniteOnGeodesic
    };
    let p = flow.mask(a, x)?;
    let q = flow.mask(a, x_prime)?;
    let two = BigRational::from_integer(2.into());
    let full = norm(&sym_diff(&p.measure, &q.measure)) == two;
    Ok(Some((case, full)))
}
