use alloc::collections::{BTreeMap, BTreeSet};
use alloc::rc::Rc;
use alloc::vec::Vec;

use num_rational::BigRational;

use super::measure::SparseMeasure;
use crate::fine_graph::{Ball, Cone, ConeMode, ConstantsProfile, GeomError, Geometry, Tri};

/// The four kinds of flow step at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepKind {
    Initial,
    Regular,
    Ending,
    Stationary,
}

/// One iteration of the flow: the kinds of step used and the new support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub kinds: Vec<StepKind>,
    pub support: Vec<u32>,
}

/// The stationary measure of the flow toward `a` started at `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    pub a: u32,
    pub x: u32,
    pub measure: SparseMeasure,
    /// Number of iterations that changed the measure.
    pub stationarity: u32,
    /// Largest `r` with `5δ·r < d(a, x)`.
    pub r: u32,
    pub trace: Vec<TraceStep>,
}

#[derive(Clone, Debug)]
struct Step {
    kind: StepKind,
    image: SparseMeasure,
}

/// Flow computations on one ball with one set of constants. Results are
/// cached for the lifetime of the value.
pub struct Flow<'b> {
    geo: Geometry<'b>,
    profile: ConstantsProfile,
    steps: BTreeMap<(u32, u32), Rc<Step>>,
    masks: BTreeMap<(u32, u32), Rc<Mask>>,
}

impl<'b> Flow<'b> {
    pub fn new(ball: &'b Ball, profile: ConstantsProfile) -> Self {
        Flow { geo: Geometry::new(ball), profile, steps: BTreeMap::new(), masks: BTreeMap::new() }
    }

    pub fn ball(&self) -> &'b Ball {
        self.geo.ball()
    }

    pub fn profile(&self) -> &ConstantsProfile {
        &self.profile
    }

    pub fn geometry(&mut self) -> &mut Geometry<'b> {
        &mut self.geo
    }

    pub fn r_index(&mut self, a: u32, x: u32) -> Result<u32, GeomError> {
        let d = self.geo.certified_distance(a, x)?;
        Ok(if d == 0 { 0 } else { (d - 1) / self.profile.step })
    }

    /// `S_{a,x}(ρ)` for the slack `alpha` and cone parameter `40·alpha`.
    pub fn slice_with(&mut self, a: u32, x: u32, rho: u32, alpha: u32) -> Result<Vec<u32>, GeomError> {
        let d = self.geo.certified_distance(a, x)?;
        if rho > d {
            return Ok(Vec::new());
        }
        let theta = 40 * alpha;
        let ra = self.geo.row(a);
        let rx = self.geo.row(x);
        let edges = self.geo.geodesic_edges(a, x, rho)?;
        let slack = d + alpha - rho;
        let ball = self.geo.ball();
        let n = ball.len();
        let sure: Vec<Rc<Cone>> = edges.iter().map(|&e| self.geo.cone_in(e, theta, ConeMode::Sure)).collect();
        let mut opt: Vec<Option<Rc<Cone>>> = alloc::vec![None; edges.len()];
        let mut members = Vec::new();
        for t in 0..n as u32 {
            let ba = ra.bound(t);
            if ba.lo > rho || ba.hi < rho {
                continue;
            }
            let bx = rx.bound(t);
            if bx.lo > slack {
                continue;
            }
            let mut cone = Tri::True;
            for (i, &e) in edges.iter().enumerate() {
                if sure[i].contains(t) {
                    continue;
                }
                let o = opt[i].get_or_insert_with(|| self.geo.cone_in(e, theta, ConeMode::Optimistic));
                if o.contains(t) {
                    cone = Tri::Unknown;
                } else {
                    cone = Tri::False;
                    break;
                }
            }
            match cone {
                Tri::False => continue,
                Tri::True if ba.lo == rho && ba.hi == rho && bx.hi <= slack => members.push(t),
                _ => return Err(GeomError::uncertified("slice membership", &[a, x, t])),
            }
        }
        for (g, group) in ball.leak_groups().iter().enumerate() {
            if ra.hub(n, g) > rho || rx.hub(n, g) > slack {
                continue;
            }
            let mut excluded = false;
            for (i, &e) in edges.iter().enumerate() {
                let o = opt[i].get_or_insert_with(|| self.geo.cone_in(e, theta, ConeMode::Optimistic));
                if !o.reaches_hub(g as u32) {
                    excluded = true;
                    break;
                }
            }
            if !excluded {
                return Err(GeomError::uncertified("slice leaves the ball", group));
            }
        }
        if members.is_empty() {
            return Err(GeomError::violation("empty slice", &[a, x, rho]));
        }
        Ok(members)
    }

    pub fn slice(&mut self, a: u32, x: u32, rho: u32) -> Result<Vec<u32>, GeomError> {
        let alpha = self.profile.alpha;
        self.slice_with(a, x, rho, alpha)
    }

    /// `U_α[a,x]`, the union of all slices.
    pub fn conical_interval(&mut self, a: u32, x: u32) -> Result<Vec<u32>, GeomError> {
        let d = self.geo.certified_distance(a, x)?;
        let mut out = Vec::new();
        for rho in 0..=d {
            out.extend(self.slice(a, x, rho)?);
        }
        out.sort_unstable();
        Ok(out)
    }

    fn angle_candidates(&mut self, a: u32, x: u32) -> Result<Vec<Vec<u32>>, GeomError> {
        let interval = self.geo.interval(a, x)?;
        let d = interval.d as usize;
        Ok(interval.levels[1..d.max(1)].to_vec())
    }

    pub fn classify_step(&mut self, a: u32, x: u32) -> Result<StepKind, GeomError> {
        let d = self.geo.certified_distance(a, x)?;
        let step = self.profile.step;
        if d > step {
            return Ok(if d % step == 0 { StepKind::Regular } else { StepKind::Initial });
        }
        if a == x {
            return Ok(StepKind::Stationary);
        }
        if self.ball().infinite_valence(a) {
            return Ok(if d > 1 { StepKind::Ending } else { StepKind::Stationary });
        }
        let threshold = self.profile.ending_classify;
        let mut unknown = None;
        for level in self.angle_candidates(a, x)? {
            for c in level {
                match self.geo.vertex_angle_exceeds(c, a, x, threshold) {
                    Tri::True => return Ok(StepKind::Ending),
                    Tri::Unknown => unknown = Some(c),
                    Tri::False => {}
                }
            }
        }
        match unknown {
            Some(c) => Err(GeomError::uncertified("ending angle", &[a, x, c])),
            None => Ok(StepKind::Stationary),
        }
    }

    /// The vertex closest to `a` with angle above the selection threshold.
    pub fn ending_point(&mut self, a: u32, x: u32) -> Result<u32, GeomError> {
        let threshold = self.profile.ending_select;
        for level in self.angle_candidates(a, x)? {
            let mut found = Vec::new();
            for &c in &level {
                match self.geo.vertex_angle_exceeds(c, a, x, threshold) {
                    Tri::True => found.push(c),
                    Tri::Unknown => return Err(GeomError::uncertified("ending selection", &[a, x, c])),
                    Tri::False => {}
                }
            }
            match found.len() {
                0 => {}
                1 => return Ok(found[0]),
                _ => return Err(GeomError::violation("ending point not unique", &found)),
            }
        }
        Err(GeomError::violation("no ending point", &[a, x]))
    }

    fn step_dirac(&mut self, a: u32, x: u32) -> Result<Rc<Step>, GeomError> {
        if let Some(s) = self.steps.get(&(a, x)) {
            return Ok(s.clone());
        }
        let kind = self.classify_step(a, x)?;
        let image = match kind {
            StepKind::Initial | StepKind::Regular => {
                let rho = self.profile.step * self.r_index(a, x)?;
                SparseMeasure::uniform(&self.slice(a, x, rho)?)
            }
            StepKind::Ending if self.ball().infinite_valence(a) => {
                SparseMeasure::uniform(&self.slice(a, x, 1)?)
            }
            StepKind::Ending => SparseMeasure::dirac(self.ending_point(a, x)?),
            StepKind::Stationary => SparseMeasure::dirac(x),
        };
        let step = Rc::new(Step { kind, image });
        self.steps.insert((a, x), step.clone());
        Ok(step)
    }

    /// `T_a(δ_x)` and the kind of step used.
    pub fn step_from(&mut self, a: u32, x: u32) -> Result<(StepKind, SparseMeasure), GeomError> {
        let s = self.step_dirac(a, x)?;
        Ok((s.kind, s.image.clone()))
    }

    /// `T_a(η)`, extended linearly from Dirac masses.
    pub fn flow_step(&mut self, a: u32, eta: &SparseMeasure) -> Result<SparseMeasure, GeomError> {
        Ok(self.flow_step_traced(a, eta)?.0)
    }

    fn flow_step_traced(
        &mut self,
        a: u32,
        eta: &SparseMeasure,
    ) -> Result<(SparseMeasure, BTreeSet<StepKind>), GeomError> {
        let mut out = SparseMeasure::default();
        let mut kinds = BTreeSet::new();
        for (x, w) in eta.iter() {
            let s = self.step_dirac(a, x)?;
            kinds.insert(s.kind);
            out.add_scaled(&s.image, w);
        }
        Ok((out, kinds))
    }

    /// `T_a^k(η)`.
    pub fn iterate(&mut self, a: u32, eta: &SparseMeasure, k: u32) -> Result<SparseMeasure, GeomError> {
        let mut m = eta.clone();
        for _ in 0..k {
            m = self.flow_step(a, &m)?;
        }
        Ok(m)
    }

    /// `μ_x(a)`: iterates until a fixed point, checked by one more step.
    pub fn mask(&mut self, a: u32, x: u32) -> Result<Rc<Mask>, GeomError> {
        if let Some(m) = self.masks.get(&(a, x)) {
            return Ok(m.clone());
        }
        let r = self.r_index(a, x)?;
        let mut eta = SparseMeasure::dirac(x);
        let mut trace = Vec::new();
        let mut changes = 0u32;
        loop {
            let (next, kinds) = self.flow_step_traced(a, &eta)?;
            if next == eta {
                break;
            }
            changes += 1;
            trace.push(TraceStep { kinds: kinds.into_iter().collect(), support: next.support() });
            eta = next;
            if changes > r + 2 {
                return Err(GeomError::NoFixedPoint { vertices: alloc::vec![a, x] });
            }
        }
        let mask = Rc::new(Mask { a, x, measure: eta, stationarity: changes, r, trace });
        self.masks.insert((a, x), mask.clone());
        Ok(mask)
    }

    /// Total mass of a measure, for conservation checks.
    pub fn mass(eta: &SparseMeasure) -> BigRational {
        eta.total()
    }
}
