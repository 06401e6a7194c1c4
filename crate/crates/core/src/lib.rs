//! Named-entity tagging of short social-media texts with a trigram hidden
//! Markov model whose observations are `<word, X-tag, meta-tag>` triplets.
//!
//! The pieces, in pipeline order:
//!
//! * [`corpus`]: raw-tweet and annotation files, tokenization, IOB conversion.
//! * [`features`]: meta-tag rules and gazetteer lookup producing pseudo-tokens.
//! * [`model`]: smoothed transitions, observation likelihoods, suffix model,
//!   model files.
//! * [`decoder`]: trigram Viterbi.
//! * [`eval`]: orphan `I-XXX` repair and entity-level scoring.
//! * [`pipeline`]: training and tagging wrappers over the above.

pub mod corpus;
pub mod decoder;
pub mod error;
pub mod eval;
pub mod features;
pub mod model;
pub mod pipeline;

pub use corpus::{
    iob_to_spans, parse_annotation_file, parse_raw_file, spans_to_iob, tokenize, EntitySpan,
    IobLabel, IobSentence, RawTweet, Token,
};
pub use decoder::{decode_tweet, viterbi, Decoded};
pub use error::{CorpusError, DecodeError, Error, FeatureError, ModelError};
pub use eval::{repair_orphan_i, score, EvalReport};
pub use features::{
    assign_meta_tag, assign_x_tag, featurize_sentence, GazCode, GazetteerSet, MetaTag,
    PseudoToken, XTag,
};
pub use model::{observation_key, HmmModel, ModelConfig, TagId};
pub use pipeline::Tagger;
