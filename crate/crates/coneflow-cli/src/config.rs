//! Versioned experiment configuration, read from TOML.

use std::path::PathBuf;

use coneflow::fine_graph::ConstantsProfile;
use coneflow::group_models::{FiniteSpec, GroupSpec, PeripheralSpec};
use coneflow::induction::HCocycleKind;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub group: GroupConfig,
    #[serde(default)]
    pub peripherals: Vec<PeripheralConfig>,
    #[serde(default)]
    pub ball: BallConfig,
    #[serde(default)]
    pub profile: ProfileConfig,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default)]
    pub h_cocycle: Vec<HCocycleConfig>,
    #[serde(default)]
    pub dichotomy: DichotomyConfig,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupConfig {
    Cyclic { order: usize, label: String },
    Finite { elements: Vec<String>, table: Vec<Vec<usize>>, generators: Vec<(String, usize)> },
    Free { labels: Vec<String> },
    FreeAbelian { labels: Vec<String> },
    FreeProduct { factors: Vec<GroupConfig> },
}

impl GroupConfig {
    pub fn spec(&self) -> GroupSpec {
        match self {
            GroupConfig::Cyclic { order, label } => GroupSpec::cyclic(*order, label),
            GroupConfig::Finite { elements, table, generators } => GroupSpec::Finite(FiniteSpec {
                elements: elements.clone(),
                table: table.clone(),
                generators: generators.clone(),
            }),
            GroupConfig::Free { labels } => GroupSpec::Free { labels: labels.clone() },
            GroupConfig::FreeAbelian { labels } => GroupSpec::FreeAbelian { labels: labels.clone() },
            GroupConfig::FreeProduct { factors } => GroupSpec::FreeProduct(factors.iter().map(Self::spec).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum PeripheralConfig {
    Factor { factor: usize },
    Generators { generators: Vec<String> },
    Elements { elements: Vec<String> },
}

impl PeripheralConfig {
    pub fn spec(&self) -> PeripheralSpec {
        match self {
            PeripheralConfig::Factor { factor } => PeripheralSpec::Factor(*factor),
            PeripheralConfig::Generators { generators } => PeripheralSpec::Generators(generators.clone()),
            PeripheralConfig::Elements { elements } => PeripheralSpec::Elements(elements.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BallConfig {
    pub radius: u32,
    pub coset_depth: u32,
}

impl Default for BallConfig {
    fn default() -> Self {
        BallConfig { radius: 4, coset_depth: 8 }
    }
}

/// A named profile, optionally with individual thresholds replaced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileConfig {
    /// `paper` (default) or `small`; anything else needs `base`.
    pub name: Option<String>,
    /// Profile the overrides start from when `name` is not built in.
    pub base: Option<String>,
    /// Measured on the ball when absent.
    pub delta: Option<u32>,
    pub step: Option<u32>,
    pub alpha: Option<u32>,
    pub slice_cone: Option<u32>,
    pub support_cone: Option<u32>,
    pub ending_select: Option<u64>,
    pub ending_classify: Option<u64>,
    pub theta0: Option<u32>,
    pub checkpoint: Option<u64>,
    pub non_confluence: Option<u64>,
    pub goulet: Option<u64>,
    pub thinness: Option<u32>,
}

impl ProfileConfig {
    pub fn overrides_any(&self) -> bool {
        self.step.is_some()
            || self.alpha.is_some()
            || self.slice_cone.is_some()
            || self.support_cone.is_some()
            || self.ending_select.is_some()
            || self.ending_classify.is_some()
            || self.theta0.is_some()
            || self.checkpoint.is_some()
            || self.non_confluence.is_some()
            || self.goulet.is_some()
            || self.thinness.is_some()
    }

    /// The resulting profile for a given `δ`.
    pub fn resolve(&self, delta: u32) -> Result<ConstantsProfile, HarnessError> {
        let name = self.name.clone().unwrap_or_else(|| "paper".into());
        let base_name = match ConstantsProfile::by_name(&name, delta) {
            Some(_) => name.clone(),
            None => self.base.clone().ok_or_else(|| {
                HarnessError::Config(format!("profile `{name}` is not built in and names no base"))
            })?,
        };
        let mut p = ConstantsProfile::by_name(&base_name, delta)
            .ok_or_else(|| HarnessError::Config(format!("unknown base profile `{base_name}`")))?;
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = self.$f { p.$f = v; })*};
        }
        set!(step, alpha, slice_cone, support_cone, ending_select, ending_classify, theta0, checkpoint, non_confluence, goulet, thinness);
        if self.overrides_any() && name == base_name {
            p.name = format!("{name}+overrides");
        } else {
            p.name = name;
        }
        if p.step == 0 {
            return Err(HarnessError::Config("profile step must be positive".into()));
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub p: Vec<f64>,
    pub seed: u64,
    pub max_vertices: usize,
    pub out: Option<PathBuf>,
    /// Sample count used by every sampled check.
    pub samples: usize,
    /// Triangles for the sampled δ estimate on balls too large for the
    /// exhaustive one.
    pub delta_samples: usize,
    /// Elements whose cocycles are evaluated; sampled when empty.
    pub elements: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: vec![2.0],
            seed: 0,
            max_vertices: 50_000,
            out: None,
            samples: 20,
            delta_samples: 400,
            elements: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HCocycleConfig {
    pub peripheral: usize,
    /// `finite`, `integers` or `free_abelian`.
    pub kind: String,
    #[serde(default)]
    pub rank: Option<u32>,
}

impl HCocycleConfig {
    pub fn kind(&self) -> Result<HCocycleKind, HarnessError> {
        match self.kind.as_str() {
            "finite" => Ok(HCocycleKind::Finite),
            "integers" => Ok(HCocycleKind::Integers),
            "free_abelian" => Ok(HCocycleKind::FreeAbelian(self.rank.unwrap_or(1))),
            other => Err(HarnessError::Config(format!("unknown peripheral cocycle kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DichotomyConfig {
    /// Each family is the powers of one word.
    pub families: Vec<String>,
    pub max_power: u32,
    pub tube_radius: u32,
    /// Rows with `d′` above this must be large in one branch.
    pub threshold: u64,
}

impl Default for DichotomyConfig {
    fn default() -> Self {
        DichotomyConfig { families: Vec::new(), max_power: 12, tube_radius: 2, threshold: 4 }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.schema != SCHEMA_VERSION {
            return Err(HarnessError::Config(format!(
                "schema {} is not supported (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        if self.run.p.iter().any(|&p| !(p > 1.0 && p.is_finite())) {
            return Err(HarnessError::Config("every p must be a finite number above 1".into()));
        }
        if self.run.p.is_empty() {
            return Err(HarnessError::Config("the p list is empty".into()));
        }
        for h in &self.h_cocycle {
            h.kind()?;
            if h.peripheral >= self.peripherals.len() {
                return Err(HarnessError::Config(format!("no peripheral {}", h.peripheral)));
            }
        }
        Ok(())
    }

    /// `Z/2 * Z/3` relative to both factors.
    pub fn modular() -> Self {
        ExperimentConfig {
            schema: SCHEMA_VERSION,
            group: GroupConfig::FreeProduct {
                factors: vec![
                    GroupConfig::Cyclic { order: 2, label: "s".into() },
                    GroupConfig::Cyclic { order: 3, label: "t".into() },
                ],
            },
            peripherals: vec![PeripheralConfig::Factor { factor: 0 }, PeripheralConfig::Factor { factor: 1 }],
            ball: BallConfig { radius: 5, coset_depth: 3 },
            profile: ProfileConfig::default(),
            run: RunConfig::default(),
            h_cocycle: vec![
                HCocycleConfig { peripheral: 0, kind: "finite".into(), rank: None },
                HCocycleConfig { peripheral: 1, kind: "finite".into(), rank: None },
            ],
            dichotomy: DichotomyConfig { families: vec!["st".into()], max_power: 8, tube_radius: 2, threshold: 4 },
        }
    }

    /// The free group on `a, b` relative to `⟨a⟩`.
    pub fn free_rel_a() -> Self {
        ExperimentConfig {
            schema: SCHEMA_VERSION,
            group: GroupConfig::Free { labels: vec!["a".into(), "b".into()] },
            peripherals: vec![PeripheralConfig::Generators { generators: vec!["a".into()] }],
            ball: BallConfig { radius: 4, coset_depth: 8 },
            profile: ProfileConfig::default(),
            run: RunConfig::default(),
            h_cocycle: vec![HCocycleConfig { peripheral: 0, kind: "integers".into(), rank: None }],
            dichotomy: DichotomyConfig { families: vec!["b".into(), "a".into()], max_power: 12, tube_radius: 2, threshold: 4 },
        }
    }
}
