use alloc::string::String;

/// All thresholds used by the flow and the cocycle, in one record.
///
/// `paper(δ)` fills every field from δ; named overrides are for fast
/// experiments and are never reported as the default.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantsProfile {
    pub name: String,
    pub delta: u32,
    /// Flow step length, `5δ`.
    pub step: u32,
    /// Metric slack in slices, `2δ`.
    pub alpha: u32,
    /// Cone angle and length bound for slices, `80δ`.
    pub slice_cone: u32,
    /// Cone bound for supports, `160δ`.
    pub support_cone: u32,
    /// Threshold for selecting the terminal cone point, `900δ`.
    pub ending_select: u64,
    /// Threshold for classifying an ending step, `1000δ`.
    pub ending_classify: u64,
    /// Cone bound for masks at finite-valence vertices, `1160δ`.
    pub theta0: u32,
    /// Checkpoint angle threshold, `(2000δ)²`.
    pub checkpoint: u64,
    /// Angle needed for the non-confluence case, `10(160δ)²`.
    pub non_confluence: u64,
    /// Angle forcing every geodesic through a vertex, `12δ`.
    pub goulet: u64,
    /// Cone parameter for conical thinness of triangles, `50δ`.
    pub thinness: u32,
}

impl ConstantsProfile {
    pub fn paper(delta: u32) -> Self {
        let d = u64::from(delta);
        ConstantsProfile {
            name: "paper".into(),
            delta,
            step: 5 * delta,
            alpha: 2 * delta,
            slice_cone: 80 * delta,
            support_cone: 160 * delta,
            ending_select: 900 * d,
            ending_classify: 1000 * d,
            theta0: 1160 * delta,
            checkpoint: (2000 * d) * (2000 * d),
            non_confluence: 10 * (160 * d) * (160 * d),
            goulet: 12 * d,
            thinness: 50 * delta,
        }
    }

    /// Scaled-down thresholds for small experiments.
    pub fn small(delta: u32) -> Self {
        let d = u64::from(delta);
        ConstantsProfile {
            name: "small".into(),
            delta,
            step: 5 * delta,
            alpha: 2 * delta,
            slice_cone: 80 * delta,
            support_cone: 160 * delta,
            ending_select: 9 * d,
            ending_classify: 10 * d,
            theta0: 1160 * delta,
            checkpoint: 20 * d,
            non_confluence: 16 * d,
            goulet: 12 * d,
            thinness: 50 * delta,
        }
    }

    pub fn by_name(name: &str, delta: u32) -> Option<Self> {
        match name {
            "paper" => Some(Self::paper(delta)),
            "small" => Some(Self::small(delta)),
            _ => None,
        }
    }

    pub fn is_paper(&self) -> bool {
        let mut p = Self::paper(self.delta);
        p.name.clone_from(&self.name);
        *self == p && self.name == "paper"
    }

    /// Depth to which angle searches run when comparing against `threshold`.
    pub fn angle_cap(&self, threshold: u64) -> u64 {
        u64::from(self.support_cone).max(threshold) + 1
    }
}
