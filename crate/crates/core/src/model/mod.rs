//! Model parameters: interpolated trigram transitions, observation
//! likelihoods over pseudo-token keys, and the suffix model for unknown keys.

mod emission;
mod io;
mod observation;
mod suffix;
mod tags;
mod transition;

pub use emission::{EmissionMode, EmissionModel};
pub use io::{load_model, read_model, save_model, write_model, MODEL_FORMAT_VERSION};
pub use observation::{observation_key, parse_observation_key, OBSERVATION_SEPARATOR};
pub use suffix::{prior_stddev, SuffixModel, DEFAULT_RARE_THRESHOLD, DEFAULT_SUFFIX_LEN};
pub use tags::{TagId, TagInventory, END_NAME, START1_NAME, START2_NAME};
pub use transition::{Lambdas, TransitionCounts, TransitionModel};

use crate::corpus::IobLabel;
use crate::error::ModelError;
use crate::features::PseudoToken;

/// Training options stored with the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelConfig {
    pub suffix_max_len: usize,
    pub rare_threshold: u64,
    pub emission_mode: EmissionMode,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            suffix_max_len: DEFAULT_SUFFIX_LEN,
            rare_threshold: DEFAULT_RARE_THRESHOLD,
            emission_mode: EmissionMode::Tag,
        }
    }
}

/// One training tweet: pseudo-tokens and their gold labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSentence {
    pub observations: Vec<PseudoToken>,
    pub labels: Vec<IobLabel>,
}

/// Raw counts gathered in one pass over the training data.
#[derive(Debug, Clone)]
pub struct EventCounts {
    pub tags: TagInventory,
    pub transitions: TransitionCounts,
    pub emissions: EmissionModel,
}

/// Counts tag n-grams (boundary-padded) and `(key, label)` pairs. Empty
/// sentences are skipped.
pub fn count_events(
    sentences: &[LabeledSentence],
    mode: EmissionMode,
) -> Result<EventCounts, ModelError> {
    for (i, s) in sentences.iter().enumerate() {
        if s.observations.len() != s.labels.len() {
            return Err(ModelError::LengthMismatch {
                sentence: i,
                observations: s.observations.len(),
                labels: s.labels.len(),
            });
        }
    }
    let tags = TagInventory::new(sentences.iter().flat_map(|s| s.labels.iter().cloned()));
    if tags.num_labels() == 0 {
        return Err(ModelError::EmptyCorpus);
    }
    let mut transitions = TransitionCounts::new(&tags);
    let mut emissions = EmissionModel::new(tags.num_labels(), mode);
    for s in sentences.iter().filter(|s| !s.labels.is_empty()) {
        let ids: Vec<TagId> = s
            .labels
            .iter()
            .map(|l| tags.id(l).expect("inventory built from these labels"))
            .collect();
        transitions.add_sentence(&ids);
        for (obs, &tag) in s.observations.iter().zip(&ids) {
            emissions.add(&observation_key(obs), tag, 1);
        }
    }
    Ok(EventCounts {
        tags,
        transitions,
        emissions,
    })
}

/// A fitted tagger model. Immutable once built.
#[derive(Debug, Clone)]
pub struct HmmModel {
    config: ModelConfig,
    tags: TagInventory,
    transitions: TransitionModel,
    emissions: EmissionModel,
    suffixes: SuffixModel,
    log_transitions: Vec<f64>,
}

impl HmmModel {
    pub fn train(sentences: &[LabeledSentence], config: ModelConfig) -> Result<Self, ModelError> {
        let counts = count_events(sentences, config.emission_mode)?;
        Self::from_counts(counts, config)
    }

    pub fn from_counts(counts: EventCounts, config: ModelConfig) -> Result<Self, ModelError> {
        let transitions = TransitionModel::fit(counts.transitions)?;
        let suffixes =
            SuffixModel::build(&counts.emissions, config.suffix_max_len, config.rare_threshold);
        Ok(Self::assemble(
            config,
            counts.tags,
            transitions,
            counts.emissions,
            suffixes,
        ))
    }

    pub(crate) fn assemble(
        config: ModelConfig,
        tags: TagInventory,
        transitions: TransitionModel,
        emissions: EmissionModel,
        suffixes: SuffixModel,
    ) -> Self {
        let log_transitions = transitions.log_table();
        HmmModel {
            config,
            tags,
            transitions,
            emissions,
            suffixes,
            log_transitions,
        }
    }

    pub fn config(&self) -> ModelConfig {
        self.config
    }

    pub fn tags(&self) -> &TagInventory {
        &self.tags
    }

    pub fn transitions(&self) -> &TransitionModel {
        &self.transitions
    }

    pub fn emissions(&self) -> &EmissionModel {
        &self.emissions
    }

    pub fn suffixes(&self) -> &SuffixModel {
        &self.suffixes
    }

    pub fn lambdas(&self) -> Lambdas {
        self.transitions.lambdas()
    }

    pub fn vocab_size(&self) -> usize {
        self.emissions.vocab_size()
    }

    /// `P(tag | prev2, prev1)`, with `prev1` the immediately preceding tag.
    pub fn transition_prob(&self, prev2: TagId, prev1: TagId, tag: TagId) -> f64 {
        self.transitions.prob(prev2, prev1, tag)
    }

    pub(crate) fn log_transition(&self, prev2: usize, prev1: usize, tag: usize) -> f64 {
        let k = self.tags.num_states();
        self.log_transitions[(prev2 * k + prev1) * k + tag]
    }

    /// `P(key | tag)` for a key in the training vocabulary.
    pub fn emission_prob(&self, key: &str, tag: TagId) -> Option<f64> {
        self.emissions.prob(key, tag)
    }

    /// Suffix-model score of an out-of-vocabulary key for `tag`.
    pub fn suffix_prob(&self, key: &str, tag: TagId) -> f64 {
        self.suffixes.prob(key, tag.0)
    }

    pub fn is_known(&self, key: &str) -> bool {
        self.emissions.is_known(key)
    }

    /// Raw-space observation scores for every label: the emission
    /// probabilities for known keys, suffix scores otherwise.
    pub fn observation_scores(&self, key: &str) -> Vec<f64> {
        self.emissions
            .probs(key)
            .unwrap_or_else(|| self.suffixes.scores(key))
    }
}
