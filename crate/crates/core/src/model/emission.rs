use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::tags::TagId;

/// Denominator of the observation-probability estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmissionMode {
    /// `C(o,t) / C(t)`: a proper distribution over observations per tag.
    #[default]
    Tag,
    /// `C(o,t) / C(o)`: the literal observation-conditioned ratio, kept for
    /// comparison runs.
    Observed,
}

impl fmt::Display for EmissionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmissionMode::Tag => "tag",
            EmissionMode::Observed => "observed",
        })
    }
}

impl FromStr for EmissionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tag" => Ok(EmissionMode::Tag),
            "observed" | "observed-literal" => Ok(EmissionMode::Observed),
            _ => Err(format!("unknown emission mode {s:?} (expected tag or observed)")),
        }
    }
}

/// Joint counts `C(o,t)` of observation keys and labels.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmissionModel {
    mode: EmissionMode,
    vocab: HashMap<String, usize>,
    keys: Vec<String>,
    /// Per key, `(label index, count)` sorted by label.
    counts: Vec<Vec<(usize, u64)>>,
    key_totals: Vec<u64>,
    tag_totals: Vec<u64>,
}

impl EmissionModel {
    pub fn new(num_labels: usize, mode: EmissionMode) -> Self {
        EmissionModel {
            mode,
            tag_totals: vec![0; num_labels],
            ..Default::default()
        }
    }

    pub fn add(&mut self, key: &str, tag: TagId, count: u64) {
        let id = match self.vocab.get(key) {
            Some(&id) => id,
            None => {
                let id = self.keys.len();
                self.vocab.insert(key.to_string(), id);
                self.keys.push(key.to_string());
                self.counts.push(Vec::new());
                self.key_totals.push(0);
                id
            }
        };
        let row = &mut self.counts[id];
        match row.binary_search_by_key(&tag.0, |&(t, _)| t) {
            Ok(pos) => row[pos].1 += count,
            Err(pos) => row.insert(pos, (tag.0, count)),
        }
        self.key_totals[id] += count;
        self.tag_totals[tag.0] += count;
    }

    pub fn mode(&self) -> EmissionMode {
        self.mode
    }

    pub fn is_known(&self, key: &str) -> bool {
        self.vocab.contains_key(key)
    }

    pub fn vocab_size(&self) -> usize {
        self.keys.len()
    }

    /// Observation keys in first-seen order.
    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.keys.iter().map(String::as_str)
    }

    pub fn count(&self, key: &str, tag: TagId) -> u64 {
        self.vocab.get(key).map_or(0, |&id| {
            let row = &self.counts[id];
            row.binary_search_by_key(&tag.0, |&(t, _)| t)
                .map_or(0, |pos| row[pos].1)
        })
    }

    /// `C(o)`: occurrences of `key` in training.
    pub fn key_total(&self, key: &str) -> u64 {
        self.vocab.get(key).map_or(0, |&id| self.key_totals[id])
    }

    /// `C(t)`: tokens labelled `tag`.
    pub fn tag_total(&self, tag: TagId) -> u64 {
        self.tag_totals.get(tag.0).copied().unwrap_or(0)
    }

    pub fn tag_totals(&self) -> &[u64] {
        &self.tag_totals
    }

    /// Per-label counts of one key, sorted by label index.
    pub fn row(&self, key: &str) -> Option<&[(usize, u64)]> {
        self.vocab.get(key).map(|&id| self.counts[id].as_slice())
    }

    /// Observation probability of a known key; `None` for keys outside the
    /// vocabulary, which must go through the suffix model instead.
    pub fn prob(&self, key: &str, tag: TagId) -> Option<f64> {
        let &id = self.vocab.get(key)?;
        let row = &self.counts[id];
        let joint = row
            .binary_search_by_key(&tag.0, |&(t, _)| t)
            .map_or(0, |pos| row[pos].1);
        let den = match self.mode {
            EmissionMode::Tag => self.tag_total(tag),
            EmissionMode::Observed => self.key_totals[id],
        };
        Some(if den == 0 { 0.0 } else { joint as f64 / den as f64 })
    }

    /// Observation probabilities of a known key for every label.
    pub fn probs(&self, key: &str) -> Option<Vec<f64>> {
        let &id = self.vocab.get(key)?;
        let mut out = vec![0.0; self.tag_totals.len()];
        for &(t, joint) in &self.counts[id] {
            let den = match self.mode {
                EmissionMode::Tag => self.tag_totals[t],
                EmissionMode::Observed => self.key_totals[id],
            };
            out[t] = joint as f64 / den as f64;
        }
        Some(out)
    }

    /// `(key, label, count)` triples sorted by key then label.
    pub(crate) fn sorted_entries(&self) -> Vec<(&str, usize, u64)> {
        let mut ids: Vec<usize> = (0..self.keys.len()).collect();
        ids.sort_by(|&a, &b| self.keys[a].cmp(&self.keys[b]));
        ids.into_iter()
            .flat_map(|id| {
                self.counts[id]
                    .iter()
                    .map(move |&(t, c)| (self.keys[id].as_str(), t, c))
            })
            .collect()
    }
}
