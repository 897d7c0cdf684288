//! Everything a suite needs: the model, the ball, δ and the profile.

use coneflow::fine_graph::{build_ball, estimate_delta, Ball, ConstantsProfile, DeltaEstimate, DeltaMode};
use coneflow::group_models::{GroupElement, GroupModel, Letter, PeripheralSpec, PeripheralStructure};
use coneflow::Vertex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ExperimentConfig;
use crate::HarnessError;

/// Balls up to this size get the exhaustive δ estimate.
pub const EXACT_DELTA_LIMIT: usize = 60;

pub struct Setup {
    pub config: ExperimentConfig,
    pub model: GroupModel,
    pub periph: PeripheralStructure,
    pub ball: Ball,
    pub delta: DeltaEstimate,
    pub profile: ConstantsProfile,
}

impl Setup {
    pub fn new(config: ExperimentConfig) -> Result<Self, HarnessError> {
        config.validate()?;
        let (model, periph) = model_of(&config)?;
        let ball = build_ball(&model, &periph, config.ball.radius, config.ball.coset_depth, config.run.max_vertices)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.run.seed);
        let mode = if ball.len() <= EXACT_DELTA_LIMIT {
            DeltaMode::Exact
        } else {
            DeltaMode::Sampled { samples: config.run.delta_samples }
        };
        let delta = estimate_delta(&ball, mode, &mut rng);
        let profile = config.profile.resolve(config.profile.delta.unwrap_or(delta.delta).max(1))?;
        Ok(Setup { config, model, periph, ball, delta, profile })
    }

    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.run.seed);
        rng.set_stream(stream);
        rng
    }

    pub fn label(&self, v: u32) -> String {
        label(&self.model, &self.ball, v)
    }

    pub fn identity(&self) -> u32 {
        self.ball.id_of(&Vertex::Group(self.model.identity())).expect("balls contain the identity")
    }

    pub fn parse(&self, word: &str) -> Result<GroupElement, HarnessError> {
        Ok(self.model.parse(word)?)
    }
}

/// Group model and peripheral structure named by a configuration.
pub fn model_of(config: &ExperimentConfig) -> Result<(GroupModel, PeripheralStructure), HarnessError> {
    let model = GroupModel::new(&config.group.spec())?;
    let specs: Vec<PeripheralSpec> = config.peripherals.iter().map(|p| p.spec()).collect();
    let periph = PeripheralStructure::new(&model, &specs)?;
    Ok((model, periph))
}

/// Readable name of a ball vertex.
pub fn label(model: &GroupModel, ball: &Ball, v: u32) -> String {
    match ball.vertex(v) {
        Vertex::Group(g) => element_label(model, &g),
        Vertex::Cone(k) => format!("{}H{}", element_label(model, &k.rep), k.index),
        Vertex::Id(n) => n.to_string(),
    }
}

pub fn element_label(model: &GroupModel, g: &GroupElement) -> String {
    if g.is_identity() {
        "1".into()
    } else {
        model.format(g)
    }
}

/// A random element given by a word of length at most `max_len`.
pub fn random_element<R: Rng>(model: &GroupModel, rng: &mut R, max_len: usize) -> GroupElement {
    let letters = model.letters();
    let len = rng.gen_range(0..=max_len);
    let word: Vec<Letter> = (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
    model.canonicalize(&word)
}

/// A random non-trivial element given by a word of length between 1 and
/// `max_len`.
pub fn random_nontrivial<R: Rng>(model: &GroupModel, rng: &mut R, max_len: usize) -> GroupElement {
    loop {
        let g = random_element(model, rng, max_len.max(1));
        if !g.is_identity() {
            return g;
        }
    }
}
