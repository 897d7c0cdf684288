use alloc::string::String;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::hmodel::HCocycleKind;
use super::induced::Induction;
use super::reps::{translate_measure, ElementMeasure};
use super::InductionError;
use crate::group_models::{CosetKey, GroupElement};

/// The largest expected peripheral displacement over the evaluated cosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub max: BigRational,
    /// Cosets realising the maximum.
    pub involved: Vec<CosetKey>,
    pub rows: Vec<(CosetKey, BigRational)>,
    pub frontier: Vec<CosetKey>,
}

impl Induction<'_> {
    /// `d_H(u, v)` for `u, v` in one coset.
    pub fn d_h(&self, u: &GroupElement, v: &GroupElement) -> Result<u32, InductionError> {
        let h = self.model.multiply(&self.model.inverse(u), v);
        let i = self.reps.peripheral;
        if !self.periph.contains(self.model, i, &h) {
            return Err(InductionError::OutsideSubgroup { element: self.model.format(&h) });
        }
        self.periph
            .d_h(i, &h)
            .ok_or(InductionError::OutsideSubgroup { element: self.model.format(&h) })
    }

    /// `ν^{gH}` and `γ·ν^{γ⁻¹gH}` for the representative `g` of `key`.
    fn pair(&self, gamma: &GroupElement, key: &CosetKey) -> Result<(ElementMeasure, ElementMeasure), InductionError> {
        let g = self.periph.canonical_rep(key);
        let here = self.reps.get(key).ok_or_else(|| InductionError::MissingCoset(key.clone()))?;
        let back_key =
            self.periph.coset_key(self.model, self.reps.peripheral, &self.model.multiply(&self.model.inverse(gamma), &g));
        let back = self.reps.get(&back_key).ok_or(InductionError::MissingCoset(back_key))?;
        Ok((here.clone(), translate_measure(self.model, gamma, back)))
    }

    /// Expected `d_H` between a point of `ν^{gH}` and one of `γ·ν^{γ⁻¹gH}`,
    /// maximised over the cosets of `keys`.
    pub fn contribution(&self, gamma: &GroupElement, keys: &[CosetKey]) -> Result<Contribution, InductionError> {
        let mut out =
            Contribution { max: BigRational::zero(), involved: Vec::new(), rows: Vec::new(), frontier: Vec::new() };
        for key in keys {
            let (p, q) = match self.pair(gamma, key) {
                Ok(pq) => pq,
                Err(InductionError::MissingCoset(_)) => {
                    out.frontier.push(key.clone());
                    continue;
                }
                Err(e) => return Err(e),
            };
            let mut term = BigRational::zero();
            for (x, wx) in &p {
                for (y, wy) in &q {
                    term += wx * wy * BigRational::from_integer(self.d_h(x, y)?.into());
                }
            }
            if term > out.max {
                out.max = term.clone();
                out.involved.clear();
            }
            if term == out.max {
                out.involved.push(key.clone());
            }
            out.rows.push((key.clone(), term));
        }
        Ok(out)
    }

    /// Largest `d_H`-diameter of a support.
    pub fn support_diameter(&self) -> Result<u32, InductionError> {
        let mut d = 0;
        for m in self.reps.reps.values() {
            for x in m.keys() {
                for y in m.keys() {
                    d = d.max(self.d_h(x, y)?);
                }
            }
        }
        Ok(d)
    }

    /// Runs the properness estimate on a family of elements.
    pub fn h_properness_probe(
        &self,
        gammas: &[GroupElement],
        keys: &[CosetKey],
    ) -> Result<PropernessProbe, InductionError> {
        let i = self.reps.peripheral;
        let d = self.support_diameter()?;
        let mut m = 0.0f64;
        for h in self.periph.ball(self.model, i, 2 * d) {
            m = m.max(self.hmodel.norm(&self.hmodel.value(&h)));
        }
        let d_c = m.max(1.0);
        let radius = match self.hmodel.kind {
            HCocycleKind::Finite => None,
            // ‖c(h)‖ = d_H(1, h)^(1/p) for the built-in models.
            _ => {
                let need = libm::pow(5.0 * d_c, self.hmodel.p);
                let r = libm::floor(need) as u32;
                Some(r.max(2 * d + 1))
            }
        };

        let mut rows = Vec::new();
        for gamma in gammas {
            let contribution = self.contribution(gamma, keys)?;
            let value = self.induced_cocycle(gamma, keys)?;
            let p = self.hmodel.p;
            let sum: f64 = value.values.values().map(|v| libm::pow(self.hmodel.norm(v), p)).sum();
            let mut failures = Vec::new();
            for key in &contribution.involved {
                let (here, there) = self.pair(gamma, key)?;
                let mut best: Option<(u32, &GroupElement, &GroupElement)> = None;
                for x in here.keys() {
                    for y in there.keys() {
                        let dist = self.d_h(x, y)?;
                        if best.is_none_or(|b| dist > b.0) {
                            best = Some((dist, x, y));
                        }
                    }
                }
                let Some((_, x0, y0)) = best else { continue };
                let jump = self.model.multiply(&self.model.inverse(y0), x0);
                let lower = self.hmodel.norm(&self.hmodel.value(&jump)) - 2.0 * d_c;
                let at = self.hmodel.norm(&value.values[key]);
                if at + 1e-9 < lower {
                    failures.push(key.clone());
                }
            }
            rows.push(ProbeRow {
                gamma: gamma.clone(),
                contribution: contribution.max.to_f64().unwrap_or(f64::INFINITY),
                norm: libm::pow(sum, 1.0 / p),
                involved: contribution.involved,
                frontier: value.frontier.len(),
                inequality_failures: failures,
            });
        }
        let largest = rows.iter().map(|r| r.contribution).fold(0.0, f64::max);
        let inconclusive = match radius {
            None => Some("the peripheral cocycle is not proper".into()),
            Some(r) if largest <= f64::from(r) => Some(alloc::format!("every contribution is at most R = {r}")),
            Some(_) => None,
        };
        Ok(PropernessProbe { support_diameter: d, d_c, m, radius, trend: kendall_tau(&rows), inconclusive, rows })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeRow {
    pub gamma: GroupElement,
    pub contribution: f64,
    /// `N(C_γ)` over the evaluated cosets.
    pub norm: f64,
    pub involved: Vec<CosetKey>,
    pub frontier: usize,
    /// Involved cosets where `‖C_γ(g)‖ < ‖c(y₀⁻¹x₀)‖ − 2D_c`.
    pub inequality_failures: Vec<CosetKey>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropernessProbe {
    /// `D`: bound on the support diameters.
    pub support_diameter: u32,
    /// `D_c`: bound on `‖c(h)‖` over `d_H(1, h) ≤ 2D`, at least 1.
    pub d_c: f64,
    /// `M`: the same maximum without the floor at 1.
    pub m: f64,
    /// `R`: beyond this radius `‖c(h)‖ > 5D_c`.
    pub radius: Option<u32>,
    /// Kendall rank correlation of contribution against norm.
    pub trend: Option<f64>,
    pub inconclusive: Option<String>,
    pub rows: Vec<ProbeRow>,
}

fn kendall_tau(rows: &[ProbeRow]) -> Option<f64> {
    let (mut concordant, mut discordant) = (0i64, 0i64);
    for (i, a) in rows.iter().enumerate() {
        for b in &rows[i + 1..] {
            let s = (a.contribution - b.contribution) * (a.norm - b.norm);
            if s > 0.0 {
                concordant += 1;
            } else if s < 0.0 {
                discordant += 1;
            }
        }
    }
    let n = concordant + discordant;
    (n > 0).then(|| (concordant - discordant) as f64 / n as f64)
}
