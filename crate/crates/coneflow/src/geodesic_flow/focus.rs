use alloc::string::String;
use alloc::vec::Vec;

use super::flow::{Flow, StepKind};
use super::measure::SparseMeasure;
use crate::fine_graph::{ConeMode, GeomError};

/// Outcome of one item of the focusing checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FocusItem {
    pub item: u8,
    /// `None` when the hypotheses hold, otherwise why the item was skipped.
    pub skipped: Option<String>,
    pub measured: u32,
    pub bound: u32,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FocusReport {
    pub a: u32,
    pub x: u32,
    pub x_prime: u32,
    pub items: Vec<FocusItem>,
}

impl FocusReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.skipped.is_some() || i.pass)
    }
}

fn skip(item: u8, why: &str) -> FocusItem {
    FocusItem { item, skipped: Some(why.into()), measured: 0, bound: 0, pass: true }
}

impl Flow<'_> {
    fn diameter(&mut self, vs: &[u32]) -> Result<u32, GeomError> {
        let mut d = 0;
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                d = d.max(self.geometry().certified_distance(u, v)?);
            }
        }
        Ok(d)
    }

    fn union_support(p: &SparseMeasure, q: &SparseMeasure) -> Vec<u32> {
        let mut s = p.support();
        s.extend(q.support());
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Checks the four focusing statements for the flow toward `a` from
    /// `x` and `x_prime`, each when its hypotheses hold.
    pub fn focus_check(&mut self, a: u32, x: u32, x_prime: u32) -> Result<FocusReport, GeomError> {
        let delta = self.profile().delta;
        let step = self.profile().step;
        let support_cone = self.profile().support_cone;
        let mut items = Vec::new();

        // Item 1: supports of the initial and regular iterates.
        let mut eta = SparseMeasure::dirac(x);
        let mut worst = 0;
        let mut in_cone = true;
        let mut iterations = 0;
        loop {
            let kinds: Vec<StepKind> = {
                let mut ks = Vec::new();
                for v in eta.support() {
                    ks.push(self.classify_step(a, v)?);
                }
                ks
            };
            if kinds.is_empty() || !kinds.iter().all(|k| matches!(k, StepKind::Initial | StepKind::Regular)) {
                break;
            }
            eta = self.flow_step(a, &eta)?;
            iterations += 1;
            let support = eta.support();
            worst = worst.max(self.diameter(&support)?);
            let rho = self.geometry().certified_distance(a, support[0])?;
            let edges = self.geometry().geodesic_edges(a, x, rho)?;
            let mut some_cone = edges.is_empty();
            for e in edges {
                let cone = self.geometry().cone_in(e, support_cone, ConeMode::Sure);
                if support.iter().all(|&v| cone.contains(v)) {
                    some_cone = true;
                    break;
                }
            }
            in_cone &= some_cone;
        }
        items.push(if iterations == 0 {
            skip(1, "no initial or regular step")
        } else {
            FocusItem { item: 1, skipped: None, measured: worst, bound: 5 * delta, pass: worst <= 5 * delta && in_cone }
        });

        let dx = self.geometry().certified_distance(a, x)?;
        let dxp = self.geometry().certified_distance(a, x_prime)?;
        let dxx = self.geometry().certified_distance(x, x_prime)?;
        let (near, far) = if dx <= dxp { (x, x_prime) } else { (x_prime, x) };
        let (dn, df) = (dx.min(dxp), dx.max(dxp));

        // Item 2: neighbours strictly between consecutive multiples of 5δ.
        let k = dn / step;
        items.push(if dxx == 1 && dn > k * step && df < (k + 1) * step && dn > step {
            let (_, p) = self.step_from(a, near)?;
            let (_, q) = self.step_from(a, far)?;
            let diam = self.diameter(&Self::union_support(&p, &q))?;
            FocusItem { item: 2, skipped: None, measured: diam, bound: 8 * delta + 1, pass: diam <= 8 * delta + 1 }
        } else {
            skip(2, "hypotheses of item 2 fail")
        });

        // Item 3: equidistant, close, both regular.
        let both_regular = dx == dxp
            && self.classify_step(a, x)? == StepKind::Regular
            && self.classify_step(a, x_prime)? == StepKind::Regular;
        items.push(if dxx <= 8 * delta && both_regular {
            let (_, p) = self.step_from(a, x)?;
            let (_, q) = self.step_from(a, x_prime)?;
            let diam = self.diameter(&Self::union_support(&p, &q))?;
            let meet = p.support().iter().any(|v| q.support().contains(v));
            FocusItem { item: 3, skipped: None, measured: diam, bound: 8 * delta, pass: diam <= 8 * delta && meet }
        } else {
            skip(3, "hypotheses of item 3 fail")
        });

        // Item 4: neighbours both beyond 5δ, brought to a common sphere.
        items.push(if dxx == 1 && dn > step {
            let mut best: Option<u32> = None;
            for e in 0..2u32 {
                for f in 0..2u32 {
                    let p = self.iterate(a, &SparseMeasure::dirac(x), e)?;
                    let q = self.iterate(a, &SparseMeasure::dirac(x_prime), f)?;
                    let union = Self::union_support(&p, &q);
                    let mut levels = Vec::new();
                    for &v in &union {
                        levels.push(self.geometry().certified_distance(a, v)?);
                    }
                    levels.dedup();
                    if levels.len() == 1 && levels[0] % step == 0 {
                        let diam = self.diameter(&union)?;
                        best = Some(best.map_or(diam, |b| b.min(diam)));
                    }
                }
            }
            match best {
                Some(diam) => {
                    FocusItem { item: 4, skipped: None, measured: diam, bound: 8 * delta + 2, pass: diam <= 8 * delta + 2 }
                }
                None => FocusItem { item: 4, skipped: None, measured: u32::MAX, bound: 8 * delta + 2, pass: false },
            }
        } else {
            skip(4, "hypotheses of item 4 fail")
        });

        Ok(FocusReport { a, x, x_prime, items })
    }
}
