//! Suffix-based tag guessing for observation keys never seen in training.
//!
//! Built from rare keys only (corpus frequency at most the rarity threshold).
//! For every suffix of length `0..=max_len` of such a key, label counts are
//! collected and smoothed recursively towards the next shorter suffix:
//!
//! `P(t | s_k) = (MLE(t | s_k) + θ · P(t | s_{k-1})) / (1 + θ)`
//!
//! where the empty suffix carries the rare-key label prior and θ is the
//! sample standard deviation of the label priors.

use std::collections::HashMap;

use log::warn;

use super::emission::EmissionModel;

pub const DEFAULT_SUFFIX_LEN: usize = 10;
pub const DEFAULT_RARE_THRESHOLD: u64 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct SuffixModel {
    max_len: usize,
    rare_threshold: u64,
    theta: f64,
    num_labels: usize,
    counts: HashMap<String, Vec<u64>>,
    probs: HashMap<String, Vec<f64>>,
}

/// Last `n` characters of `s` (all of `s` if shorter).
fn suffix(s: &str, n: usize) -> &str {
    if n == 0 {
        return &s[s.len()..];
    }
    match s.char_indices().rev().nth(n - 1) {
        Some((i, _)) => &s[i..],
        None => s,
    }
}

/// Sample standard deviation of the label priors `C(t) / Σ C`.
pub fn prior_stddev(tag_totals: &[u64]) -> f64 {
    let s = tag_totals.len();
    let total: u64 = tag_totals.iter().sum();
    if s < 2 || total == 0 {
        return 0.0;
    }
    let priors: Vec<f64> = tag_totals.iter().map(|&c| c as f64 / total as f64).collect();
    let mean = priors.iter().sum::<f64>() / s as f64;
    let var = priors.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (s as f64 - 1.0);
    var.sqrt()
}

impl SuffixModel {
    pub fn build(emissions: &EmissionModel, max_len: usize, rare_threshold: u64) -> Self {
        let num_labels = emissions.tag_totals().len();
        let mut counts: HashMap<String, Vec<u64>> = HashMap::new();
        for key in emissions.keys() {
            if emissions.key_total(key) > rare_threshold {
                continue;
            }
            let row = emissions.row(key).unwrap_or_default();
            let len = key.chars().count().min(max_len);
            for n in 0..=len {
                let entry = counts
                    .entry(suffix(key, n).to_string())
                    .or_insert_with(|| vec![0; num_labels]);
                for &(t, c) in row {
                    entry[t] += c;
                }
            }
        }
        if counts.is_empty() {
            warn!("no rare observations in training data; unknown keys fall back to label priors");
            counts.insert(String::new(), emissions.tag_totals().to_vec());
        }
        let theta = prior_stddev(emissions.tag_totals());
        Self::from_counts(counts, theta, max_len, rare_threshold, num_labels)
    }

    pub(crate) fn from_counts(
        counts: HashMap<String, Vec<u64>>,
        theta: f64,
        max_len: usize,
        rare_threshold: u64,
        num_labels: usize,
    ) -> Self {
        let mut model = SuffixModel {
            max_len,
            rare_threshold,
            theta,
            num_labels,
            counts,
            probs: HashMap::new(),
        };
        model.smooth();
        model
    }

    fn smooth(&mut self) {
        let mut suffixes: Vec<&String> = self.counts.keys().collect();
        suffixes.sort_by_key(|s| (s.chars().count(), s.as_str()));
        let mut probs: HashMap<String, Vec<f64>> = HashMap::with_capacity(suffixes.len());
        for s in suffixes {
            let counts = &self.counts[s];
            let total: u64 = counts.iter().sum();
            let mle: Vec<f64> = counts
                .iter()
                .map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 })
                .collect();
            let dist = if s.is_empty() {
                mle
            } else {
                let parent_len = s.chars().count() - 1;
                let parent = &probs[suffix(s, parent_len)];
                mle.iter()
                    .zip(parent)
                    .map(|(m, p)| (m + self.theta * p) / (1.0 + self.theta))
                    .collect()
            };
            probs.insert(s.clone(), dist);
        }
        self.probs = probs;
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn rare_threshold(&self) -> u64 {
        self.rare_threshold
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn num_suffixes(&self) -> usize {
        self.probs.len()
    }

    /// Smoothed `P(· | suffix)` for a stored suffix.
    pub fn distribution(&self, suffix: &str) -> Option<&[f64]> {
        self.probs.get(suffix).map(Vec::as_slice)
    }

    /// Stored suffixes with their smoothed distributions.
    pub fn distributions(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.probs.iter().map(|(s, p)| (s.as_str(), p.as_slice()))
    }

    /// Rare-key label prior (distribution of the empty suffix).
    pub fn prior(&self) -> &[f64] {
        &self.probs[""]
    }

    /// Longest stored suffix of `key`, at most `max_len` characters.
    pub fn longest_suffix<'a>(&self, key: &'a str) -> &'a str {
        let len = key.chars().count().min(self.max_len);
        (0..=len)
            .rev()
            .map(|n| suffix(key, n))
            .find(|s| self.probs.contains_key(*s))
            .unwrap_or("")
    }

    /// Emission-style scores `P(t | s) / P(t)` for every label, where `s` is
    /// the longest stored suffix of `key` and `P(t)` the rare-key prior.
    /// Labels with zero prior score 0.
    pub fn scores(&self, key: &str) -> Vec<f64> {
        let dist = &self.probs[self.longest_suffix(key)];
        dist.iter()
            .zip(self.prior())
            .map(|(p, prior)| if *prior > 0.0 { p / prior } else { 0.0 })
            .collect()
    }

    pub fn prob(&self, key: &str, label: usize) -> f64 {
        self.scores(key).get(label).copied().unwrap_or(0.0)
    }

    /// `(suffix, label, count)` triples sorted by suffix then label.
    pub(crate) fn sorted_counts(&self) -> Vec<(&str, usize, u64)> {
        let mut suffixes: Vec<&String> = self.counts.keys().collect();
        suffixes.sort();
        suffixes
            .into_iter()
            .flat_map(|s| {
                self.counts[s]
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(move |(t, &c)| (s.as_str(), t, c))
            })
            .collect()
    }

    pub(crate) fn num_labels(&self) -> usize {
        self.num_labels
    }
}
