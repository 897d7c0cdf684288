use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::confluence::{non_confluence_check, NonConfluenceCase};
use super::fit::LineFit;
use super::value::CocycleValue;
use crate::fine_graph::{GeomError, Geometry, INF};
use crate::geodesic_flow::Flow;

/// Coned-off distance plus the least total angle at infinite-valence
/// vertices over all geodesics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AngleDistance {
    pub d: u32,
    pub theta: u64,
    pub dprime: u64,
    /// Set when truncated angles keep `theta` from being exact; it is then a
    /// lower bound.
    pub lower_bound: bool,
}

/// Shortest path in the geodesic graph from `u` to `v`, weighted by the
/// angles at infinite-valence vertices, each searched up to `cap`.
pub fn theta_and_dprime(geo: &mut Geometry<'_>, u: u32, v: u32, cap: u32) -> Result<AngleDistance, GeomError> {
    let interval = geo.interval(u, v)?;
    let d = interval.d;
    if d <= 1 {
        return Ok(AngleDistance { d, theta: 0, dprime: u64::from(d), lower_bound: false });
    }
    let ball = geo.ball();
    // State: (previous, current) with least (lo, hi) angle sums so far.
    let mut states: BTreeMap<(u32, u32), (u64, u64)> = BTreeMap::new();
    for &w in &interval.levels[1] {
        if ball.has_edge(u, w) {
            states.insert((u, w), (0, 0));
        }
    }
    for level in 2..=d as usize {
        let mut next: BTreeMap<(u32, u32), (u64, u64)> = BTreeMap::new();
        for (&(p, c), &(lo, hi)) in &states {
            for &n in ball.neighbours(c) {
                if !interval.contains(n, level as u32) {
                    continue;
                }
                let (alo, ahi) = if ball.infinite_valence(c) {
                    let b = geo.angle_at(c, p, n, cap);
                    let h = if b.hi == INF { u64::MAX } else { u64::from(b.hi) };
                    (u64::from(b.lo), h)
                } else {
                    (0, 0)
                };
                let slot = next.entry((c, n)).or_insert((u64::MAX, u64::MAX));
                slot.0 = slot.0.min(lo.saturating_add(alo));
                slot.1 = slot.1.min(hi.saturating_add(ahi));
            }
        }
        states = next;
    }
    let (lo, hi) = states
        .values()
        .fold((u64::MAX, u64::MAX), |acc, &(l, h)| (acc.0.min(l), acc.1.min(h)));
    Ok(AngleDistance { d, theta: lo, dprime: u64::from(d) + lo, lower_bound: lo != hi })
}

/// One shell `{a : d′(base, a) = r}` of a cocycle value.
#[derive(Clone, Debug, PartialEq)]
pub struct Shell {
    pub r: u64,
    /// Certified targets in the shell.
    pub count: usize,
    pub nonzero: usize,
    /// `Σ ‖c(a)‖₁`, exact.
    pub l1_sum: BigRational,
    /// `Σ ‖c(a)‖₁^p`.
    pub sum: f64,
}

/// Vertices on a geodesic between base and source where the two masks are
/// forced to be disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WitnessCensus {
    /// Finite-valence vertices meeting the non-confluence hypotheses.
    pub eligible: usize,
    /// Eligible vertices where `‖c(a)‖₁ = 2`.
    pub witnesses: usize,
    /// Eligible vertices where the masks overlap.
    pub failures: Vec<u32>,
    /// Vertices where the check or the cocycle entry is not certified.
    pub unevaluated: usize,
    /// Interior levels of the interval made only of finite-valence
    /// vertices with `‖c(a)‖₁ = 2`. Every geodesic meets one such vertex
    /// per level, so `total ≥ full_levels · 2^p`.
    pub full_levels: usize,
}

/// Exponential fit `y ≈ A·rate^r` with its residual in log scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpFit {
    pub rate: f64,
    pub scale: f64,
    pub residual: f64,
    pub points: usize,
}

impl From<LineFit> for ExpFit {
    fn from(f: LineFit) -> Self {
        ExpFit { rate: f.rate(), scale: libm::exp(f.intercept), residual: f.residual, points: f.points }
    }
}

/// ℓ^p norm of a cocycle value organised by shells of `d′`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormReport {
    pub p: f64,
    pub shells: Vec<Shell>,
    /// Sum of the shell sums.
    pub total: f64,
    /// Targets whose shell index is only a lower bound.
    pub dprime_lower_bounds: usize,
    /// Smallest `r` beyond which shell sums never increase.
    pub nonincreasing_from: Option<u64>,
    /// Fit of the shell sums from the largest shell onwards.
    pub tail: Option<ExpFit>,
    /// Fit of the shell cardinalities.
    pub growth: Option<ExpFit>,
    /// Fit of `‖c(a)‖₁` against `d′`.
    pub kappa: Option<ExpFit>,
    /// `total / d(base, source)`.
    pub epsilon_ratio: Option<f64>,
    pub census: Option<WitnessCensus>,
}

impl NormReport {
    /// `total^(1/p)`.
    pub fn norm(&self) -> f64 {
        libm::pow(self.total, 1.0 / self.p)
    }

    /// `κ^p < 1/γ` for the fitted rates.
    pub fn summability_condition(&self) -> Option<bool> {
        let kappa = self.kappa?.rate;
        let gamma = self.growth?.rate;
        Some(libm::pow(kappa, self.p) * gamma < 1.0)
    }
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Shell sums of `‖c(a)‖₁^p` over the certified targets of `value`.
pub fn lp_norm(flow: &mut Flow<'_>, value: &CocycleValue, p: f64) -> Result<NormReport, GeomError> {
    assert!(p > 1.0, "exponent must exceed 1");
    let cap = flow.profile().support_cone;
    let base = value.base;
    let mut shells: BTreeMap<u64, Shell> = BTreeMap::new();
    let mut lower = 0;
    let mut kappa_points = Vec::new();
    for (&a, m) in &value.entries {
        let r = match theta_and_dprime(flow.geometry(), base, a, cap) {
            Ok(ad) => {
                lower += usize::from(ad.lower_bound);
                ad.dprime
            }
            Err(_) => {
                lower += 1;
                u64::from(flow.geometry().certified_distance(base, a)?)
            }
        };
        let l1 = m.l1();
        let shell = shells.entry(r).or_insert_with(|| Shell {
            r,
            count: 0,
            nonzero: 0,
            l1_sum: BigRational::zero(),
            sum: 0.0,
        });
        shell.count += 1;
        if !l1.is_zero() {
            shell.nonzero += 1;
            let x = to_f64(&l1);
            shell.sum += libm::pow(x, p);
            kappa_points.push((r as f64, libm::log(x)));
        }
        shell.l1_sum += l1;
    }
    let shells: Vec<Shell> = shells.into_values().collect();
    let total = shells.iter().map(|s| s.sum).sum();

    let mut nonincreasing_from = shells.last().map(|s| s.r);
    for w in shells.windows(2).rev() {
        if w[1].sum > w[0].sum {
            break;
        }
        nonincreasing_from = Some(w[0].r);
    }
    let knee = shells
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.sum.total_cmp(&y.1.sum))
        .map_or(0, |(i, _)| i);
    let tail_points: Vec<(f64, f64)> = shells[knee..]
        .iter()
        .filter(|s| s.sum > 0.0)
        .map(|s| (s.r as f64, libm::log(s.sum)))
        .collect();
    let growth_points: Vec<(f64, f64)> = shells
        .iter()
        .filter(|s| s.r > 0)
        .map(|s| (s.r as f64, libm::log(s.count as f64)))
        .collect();

    let d = flow.geometry().certified_distance(base, value.source)?;
    let census = witness_census(flow, value).ok();
    Ok(NormReport {
        p,
        total,
        dprime_lower_bounds: lower,
        nonincreasing_from,
        tail: LineFit::fit(&tail_points).map(ExpFit::from),
        growth: LineFit::fit(&growth_points).map(ExpFit::from),
        kappa: LineFit::fit(&kappa_points).map(ExpFit::from),
        epsilon_ratio: (d > 0).then(|| total / f64::from(d)),
        census,
        shells,
    })
}

/// Counts the finite-valence vertices between base and source where the
/// non-confluence statement applies, and checks each one.
pub fn witness_census(flow: &mut Flow<'_>, value: &CocycleValue) -> Result<WitnessCensus, GeomError> {
    let interval = flow.geometry().interval(value.base, value.source)?;
    let mut census = WitnessCensus::default();
    for a in interval.vertices() {
        if flow.ball().infinite_valence(a) {
            continue;
        }
        match non_confluence_check(flow, a, value.base, value.source) {
            Ok(Some((NonConfluenceCase::FiniteOnGeodesic, full))) => {
                census.eligible += 1;
                if !value.entries.contains_key(&a) {
                    census.eligible -= 1;
                    census.unevaluated += 1;
                } else if full {
                    census.witnesses += 1;
                } else {
                    census.failures.push(a);
                }
            }
            Ok(_) => {}
            Err(_) => census.unevaluated += 1,
        }
    }
    let two = BigRational::from_integer(2.into());
    let inner = interval.levels.len().saturating_sub(1);
    census.full_levels = interval.levels[1.min(inner)..inner]
        .iter()
        .filter(|level| {
            level.iter().all(|&a| {
                !flow.ball().infinite_valence(a) && value.entries.get(&a).is_some_and(|m| m.l1() == two)
            })
        })
        .count();
    Ok(census)
}
