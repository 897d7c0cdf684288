use alloc::string::String;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::fit::LineFit;
use super::norms::theta_and_dprime;
use super::signed::{norm, sym_diff};
use crate::fine_graph::{GeomError, Tri};
use crate::geodesic_flow::Flow;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckpointOutcome {
    /// `μ_x(a) = μ_{x′}(a) = μ_c(a)`.
    Equal,
    /// The sources whose masks differ from `μ_c(a)`.
    NotEqual { differing: Vec<u32> },
    Skipped(String),
}

/// For `c` on a geodesic from `a` to `x` with a huge angle, and `x′` next
/// to `x`, compares the masks of `a` seen from `x`, `x′` and `c`.
pub fn checkpoint_test(
    flow: &mut Flow<'_>,
    a: u32,
    x: u32,
    x_prime: u32,
    c: u32,
) -> Result<CheckpointOutcome, GeomError> {
    let skip = |why: &str| Ok(CheckpointOutcome::Skipped(why.into()));
    let on_geodesic = match flow.geometry().interval(a, x) {
        Ok(i) => {
            let level = flow.geometry().certified_distance(a, c)?;
            i.contains(c, level)
        }
        Err(_) => return skip("geodesics from a to x not certified"),
    };
    if !on_geodesic {
        return skip("c is not on a geodesic from a to x");
    }
    match flow.geometry().distance(x, x_prime).exact() {
        Some(0 | 1) => {}
        Some(_) => return skip("x and x' are not adjacent"),
        None => return skip("distance from x to x' not certified"),
    }
    let threshold = flow.profile().checkpoint;
    match flow.geometry().vertex_angle_exceeds(c, a, x, threshold) {
        Tri::True => {}
        Tri::False => return skip("angle at c below the checkpoint threshold"),
        Tri::Unknown => return skip("angle at c not certified"),
    }
    let at_c = flow.mask(a, c)?.measure.clone();
    let mut differing = Vec::new();
    for s in [x, x_prime] {
        if flow.mask(a, s)?.measure != at_c && !differing.contains(&s) {
            differing.push(s);
        }
    }
    Ok(if differing.is_empty() { CheckpointOutcome::Equal } else { CheckpointOutcome::NotEqual { differing } })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KappaExclusion {
    /// Both masks agree.
    Zero,
    /// `d + Θ` below the knee.
    BelowKnee,
    Uncertified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaRow {
    pub a: u32,
    pub x1: u32,
    pub x2: u32,
    /// Distance from `a` to the closer source.
    pub d: u32,
    pub theta: u64,
    /// `‖μ_{x1}(a) Δ μ_{x2}(a)‖`.
    pub norm: BigRational,
    pub excluded: Option<KappaExclusion>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KappaReport {
    pub rows: Vec<KappaRow>,
    pub fit: Option<LineFit>,
    /// Fitted decay per unit of `d + Θ`.
    pub kappa: Option<f64>,
    /// Least `K` with `‖Δ‖ ≤ K·κ^(d+Θ)` on every fitted row.
    pub envelope: Option<f64>,
    /// Why no fit was made.
    pub inconclusive: Option<String>,
}

/// Fits `log ‖μ_{x1}(a) Δ μ_{x2}(a)‖` against `d(a, x) + Θ(a, x)`, where
/// `x` is the closer source. Rows below `knee` and zero rows are kept but
/// not fitted.
pub fn kappa_fit(flow: &mut Flow<'_>, samples: &[(u32, u32, u32)], knee: u64) -> KappaReport {
    let cap = flow.profile().support_cone;
    let mut rows = Vec::new();
    for &(a, x1, x2) in samples {
        let row = (|| -> Result<KappaRow, GeomError> {
            let d1 = flow.geometry().certified_distance(a, x1)?;
            let d2 = flow.geometry().certified_distance(a, x2)?;
            let (x, d) = if d1 <= d2 { (x1, d1) } else { (x2, d2) };
            let theta = theta_and_dprime(flow.geometry(), a, x, cap)?.theta;
            let p = flow.mask(a, x1)?.measure.clone();
            let q = flow.mask(a, x2)?.measure.clone();
            let n = norm(&sym_diff(&p, &q));
            let excluded = if n.is_zero() {
                Some(KappaExclusion::Zero)
            } else if u64::from(d) + theta < knee {
                Some(KappaExclusion::BelowKnee)
            } else {
                None
            };
            Ok(KappaRow { a, x1, x2, d, theta, norm: n, excluded })
        })();
        rows.push(row.unwrap_or(KappaRow {
            a,
            x1,
            x2,
            d: 0,
            theta: 0,
            norm: BigRational::zero(),
            excluded: Some(KappaExclusion::Uncertified),
        }));
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.excluded.is_none())
        .map(|r| ((u64::from(r.d) + r.theta) as f64, libm::log(r.norm.to_f64().unwrap_or(0.0))))
        .collect();
    let fit = LineFit::fit(&points);
    let inconclusive = match fit {
        Some(_) => None,
        None => Some(alloc::format!("{} usable rows with distinct d + Θ are needed, found {}", 2, points.len())),
    };
    let envelope = fit.map(|f| {
        let worst = points.iter().map(|&(s, y)| y - f.slope * s).fold(f64::NEG_INFINITY, f64::max);
        libm::exp(worst)
    });
    KappaReport { rows, kappa: fit.map(|f| f.rate()), fit, envelope, inconclusive }
}
