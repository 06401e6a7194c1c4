//! Second-order Viterbi decoding.
//!
//! States are tag pairs `(t[i-1], t[i])`. The lattice is seeded with the two
//! start-boundary tags and closed with the end-boundary transition. Scores are
//! natural logs; a zero probability is `-inf` and never floored. Labels whose
//! observation score is zero at a position are pruned from that column, which
//! keeps the `O(n·|T|³)` worst case rare in practice.

use crate::corpus::{tokenize, IobLabel, IobSentence, RawTweet};
use crate::error::{DecodeError, Error};
use crate::features::{featurize_sentence_with, FeatureConfig, GazetteerSet, PseudoToken};
use crate::model::{observation_key, HmmModel, TagId};

/// Best label sequence and its joint log-probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub tags: Vec<TagId>,
    pub labels: Vec<IobLabel>,
    pub log_score: f64,
}

/// One lattice column: `score[u * width + v]` for previous-tag slot `u` and
/// current-tag slot `v`, with a backpointer to the slot of `t[i-2]`.
struct Column {
    prev: Vec<usize>,
    cur: Vec<usize>,
    score: Vec<f64>,
    back: Vec<u32>,
}

/// Generic trigram Viterbi over label indices `0..num_labels`, with
/// `num_labels`, `num_labels + 1` and `num_labels + 2` standing for the two
/// start tags and the end tag in calls to `log_trans(prev2, prev1, tag)`.
///
/// Returns the label path and its score. Ties go to the lowest tag index.
pub fn viterbi_path<F>(
    num_labels: usize,
    log_emissions: &[Vec<f64>],
    log_trans: F,
) -> Result<(Vec<usize>, f64), DecodeError>
where
    F: Fn(usize, usize, usize) -> f64,
{
    let n = log_emissions.len();
    if n == 0 {
        return Err(DecodeError::EmptyInput);
    }
    let (start1, start2, end) = (num_labels, num_labels + 1, num_labels + 2);

    let mut columns: Vec<Column> = Vec::with_capacity(n);
    for (i, emit) in log_emissions.iter().enumerate() {
        let cur: Vec<usize> = (0..num_labels).filter(|&t| emit[t] > f64::NEG_INFINITY).collect();
        if cur.is_empty() {
            return Err(DecodeError::NoPath { position: i });
        }
        let prev = match columns.last() {
            None => vec![start2],
            Some(c) => c.cur.clone(),
        };
        let width = cur.len();
        let mut score = vec![f64::NEG_INFINITY; prev.len() * width];
        let mut back = vec![0u32; prev.len() * width];
        match columns.last() {
            None => {
                for (vi, &v) in cur.iter().enumerate() {
                    score[vi] = log_trans(start1, start2, v) + emit[v];
                }
            }
            Some(last) => {
                let last_width = last.cur.len();
                for (ui, &u) in prev.iter().enumerate() {
                    for (vi, &v) in cur.iter().enumerate() {
                        let mut best = f64::NEG_INFINITY;
                        let mut arg = 0u32;
                        for (wi, &w) in last.prev.iter().enumerate() {
                            let s = last.score[wi * last_width + ui] + log_trans(w, u, v);
                            if s > best {
                                best = s;
                                arg = wi as u32;
                            }
                        }
                        score[ui * width + vi] = best + emit[v];
                        back[ui * width + vi] = arg;
                    }
                }
            }
        }
        if score.iter().all(|&s| s == f64::NEG_INFINITY) {
            return Err(DecodeError::NoPath { position: i });
        }
        columns.push(Column {
            prev,
            cur,
            score,
            back,
        });
    }

    let last = columns.last().expect("n > 0");
    let width = last.cur.len();
    let mut best = f64::NEG_INFINITY;
    let mut best_slot = (0, 0);
    for (ui, &u) in last.prev.iter().enumerate() {
        for (vi, &v) in last.cur.iter().enumerate() {
            let s = last.score[ui * width + vi] + log_trans(u, v, end);
            if s > best {
                best = s;
                best_slot = (ui, vi);
            }
        }
    }
    if best == f64::NEG_INFINITY {
        return Err(DecodeError::NoPath { position: n });
    }

    let mut path = vec![0usize; n];
    let (mut ui, mut vi) = best_slot;
    for i in (0..n).rev() {
        let col = &columns[i];
        path[i] = col.cur[vi];
        let w = col.back[ui * col.cur.len() + vi] as usize;
        vi = ui;
        ui = w;
    }
    Ok((path, best))
}

/// Natural-log observation scores of each pseudo-token for every label.
pub fn log_observation_scores(obs: &[PseudoToken], model: &HmmModel) -> Vec<Vec<f64>> {
    obs.iter()
        .map(|o| {
            model
                .observation_scores(&observation_key(o))
                .into_iter()
                .map(f64::ln)
                .collect()
        })
        .collect()
}

/// Most probable label sequence for `obs` under `model`.
pub fn viterbi(obs: &[PseudoToken], model: &HmmModel) -> Result<Decoded, DecodeError> {
    if obs.is_empty() {
        return Err(DecodeError::EmptyInput);
    }
    let emissions = log_observation_scores(obs, model);
    let (path, log_score) = viterbi_path(model.tags().num_labels(), &emissions, |a, b, c| {
        model.log_transition(a, b, c)
    })?;
    let tags: Vec<TagId> = path.iter().map(|&t| TagId(t)).collect();
    let labels = tags
        .iter()
        .map(|&t| model.tags().label(t).expect("path holds labels only").clone())
        .collect();
    Ok(Decoded {
        tags,
        labels,
        log_score,
    })
}

/// Tokenizes, featurizes and decodes one tweet. `pos_tags` has one tag per
/// whitespace token of the text.
pub fn decode_tweet<P: AsRef<str>>(
    tweet: &RawTweet,
    pos_tags: &[P],
    gaz: &GazetteerSet,
    model: &HmmModel,
    features: FeatureConfig,
) -> Result<IobSentence, Error> {
    let tokens = tokenize(&tweet.text);
    let words: Vec<&str> = tokens.iter().map(|t| t.surface.as_str()).collect();
    let obs = featurize_sentence_with(&words, pos_tags, gaz, features)?;
    let labels = if obs.is_empty() {
        Vec::new()
    } else {
        viterbi(&obs, model)?.labels
    };
    Ok(IobSentence::new(tokens, labels)?)
}
