//! Train and tag end to end: interchange sentences in, model out; raw tweets
//! in, annotation spans out.

use crate::corpus::{iob_to_spans, EntitySpan, IobSentence, RawTweet, TaggedSentence};
use crate::decoder::decode_tweet;
use crate::error::Error;
use crate::eval::repair_orphan_i;
use crate::features::{featurize_sentence_with, FeatureConfig, GazetteerSet};
use crate::model::{HmmModel, LabeledSentence, ModelConfig};

/// Featurizes interchange-file sentences into training pairs.
pub fn featurize_corpus(
    sentences: &[TaggedSentence],
    gaz: &GazetteerSet,
    features: FeatureConfig,
) -> Result<Vec<LabeledSentence>, Error> {
    sentences
        .iter()
        .map(|s| {
            Ok(LabeledSentence {
                observations: featurize_sentence_with(&s.words, &s.pos_tags, gaz, features)?,
                labels: s.labels.clone(),
            })
        })
        .collect()
}

pub fn train_model(
    sentences: &[TaggedSentence],
    gaz: &GazetteerSet,
    features: FeatureConfig,
    config: ModelConfig,
) -> Result<HmmModel, Error> {
    let data = featurize_corpus(sentences, gaz, features)?;
    Ok(HmmModel::train(&data, config)?)
}

/// A loaded model with the gazetteers it was trained against.
#[derive(Debug, Clone)]
pub struct Tagger {
    pub model: HmmModel,
    pub gazetteers: GazetteerSet,
    pub features: FeatureConfig,
}

impl Tagger {
    pub fn new(model: HmmModel, gazetteers: GazetteerSet) -> Self {
        Tagger {
            model,
            gazetteers,
            features: FeatureConfig::default(),
        }
    }

    /// Decoded labels with orphan `I-XXX` runs repaired.
    pub fn tag<P: AsRef<str>>(&self, tweet: &RawTweet, pos_tags: &[P]) -> Result<IobSentence, Error> {
        let decoded = decode_tweet(tweet, pos_tags, &self.gazetteers, &self.model, self.features)?;
        let (tokens, labels) = decoded.into_parts();
        let labels = repair_orphan_i(&labels);
        Ok(IobSentence::new(tokens, labels)?)
    }

    /// Entity spans of one tweet: decode, repair, collapse to spans.
    pub fn annotate<P: AsRef<str>>(
        &self,
        tweet: &RawTweet,
        pos_tags: &[P],
    ) -> Result<Vec<EntitySpan>, Error> {
        let sentence = self.tag(tweet, pos_tags)?;
        Ok(iob_to_spans(&sentence, &tweet.text)?)
    }
}
