//! Tag n-gram counts and the interpolated trigram transition model.
//!
//! Every sentence is padded as `<s1> <s2> t1 .. tn </s>`. Unigram, bigram and
//! trigram tables count every position, pair and triple of the padded
//! sequence. The unigram estimate used for smoothing only ranges over tags
//! that can follow a context (labels and `</s>`), so
//! `N = tokens + sentences`.

use crate::error::ModelError;

use super::tags::{TagId, TagInventory};

/// Interpolation weights: `unigram + bigram + trigram = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambdas {
    pub unigram: f64,
    pub bigram: f64,
    pub trigram: f64,
}

impl Lambdas {
    pub fn sum(&self) -> f64 {
        self.unigram + self.bigram + self.trigram
    }
}

/// Dense unigram/bigram/trigram count tables over all tags of an inventory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionCounts {
    states: usize,
    num_labels: usize,
    unigram: Vec<u64>,
    bigram: Vec<u64>,
    trigram: Vec<u64>,
}

impl TransitionCounts {
    pub fn new(tags: &TagInventory) -> Self {
        let k = tags.num_states();
        TransitionCounts {
            states: k,
            num_labels: tags.num_labels(),
            unigram: vec![0; k],
            bigram: vec![0; k * k],
            trigram: vec![0; k * k * k],
        }
    }

    fn start1(&self) -> usize {
        self.num_labels
    }

    fn start2(&self) -> usize {
        self.num_labels + 1
    }

    fn end(&self) -> usize {
        self.num_labels + 2
    }

    /// Adds one padded label sequence (label indices, no boundary tags).
    pub fn add_sentence(&mut self, labels: &[TagId]) {
        let mut padded = Vec::with_capacity(labels.len() + 3);
        padded.push(self.start1());
        padded.push(self.start2());
        padded.extend(labels.iter().map(|t| t.0));
        padded.push(self.end());
        let k = self.states;
        for &t in &padded {
            self.unigram[t] += 1;
        }
        for w in padded.windows(2) {
            self.bigram[w[0] * k + w[1]] += 1;
        }
        for w in padded.windows(3) {
            self.trigram[(w[0] * k + w[1]) * k + w[2]] += 1;
        }
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn unigram(&self, t: TagId) -> u64 {
        self.unigram[t.0]
    }

    pub fn bigram(&self, a: TagId, b: TagId) -> u64 {
        self.bigram[a.0 * self.states + b.0]
    }

    pub fn trigram(&self, a: TagId, b: TagId, c: TagId) -> u64 {
        self.trigram[(a.0 * self.states + b.0) * self.states + c.0]
    }

    pub(crate) fn set_unigram(&mut self, t: usize, count: u64) {
        self.unigram[t] = count;
    }

    pub(crate) fn set_bigram(&mut self, a: usize, b: usize, count: u64) {
        self.bigram[a * self.states + b] = count;
    }

    pub(crate) fn set_trigram(&mut self, a: usize, b: usize, c: usize, count: u64) {
        self.trigram[(a * self.states + b) * self.states + c] = count;
    }

    /// Count mass of tags that can be predicted (labels and `</s>`).
    pub fn continuation_total(&self) -> u64 {
        self.unigram[..self.num_labels].iter().sum::<u64>() + self.unigram[self.end()]
    }

    pub fn is_empty(&self) -> bool {
        self.trigram.iter().all(|&c| c == 0)
    }

    /// Non-zero entries in index order, for serialization.
    pub(crate) fn nonzero_unigrams(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.unigram.iter().copied().enumerate().filter(|&(_, c)| c > 0)
    }

    pub(crate) fn nonzero_bigrams(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        let k = self.states;
        self.bigram
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(move |(i, c)| (i / k, i % k, c))
    }

    pub(crate) fn nonzero_trigrams(&self) -> impl Iterator<Item = (usize, usize, usize, u64)> + '_ {
        let k = self.states;
        self.trigram
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(move |(i, c)| (i / (k * k), (i / k) % k, i % k, c))
    }

    fn is_continuation(&self, t: usize) -> bool {
        t < self.num_labels || t == self.end()
    }

    /// Deleted interpolation: each seen trigram votes its count for whichever
    /// of the leave-one-out trigram, bigram or unigram ratios is largest.
    /// Ties go to the higher-order estimate.
    pub fn fit_lambdas(&self) -> Result<Lambdas, ModelError> {
        if self.is_empty() {
            return Err(ModelError::EmptyCorpus);
        }
        let ratio = |num: u64, den: u64| {
            if den <= 1 {
                0.0
            } else {
                (num as f64 - 1.0) / (den as f64 - 1.0)
            }
        };
        let n = self.continuation_total();
        let (mut l1, mut l2, mut l3) = (0u64, 0u64, 0u64);
        for (a, b, c, count) in self.nonzero_trigrams() {
            let k = self.states;
            let r3 = ratio(count, self.bigram[a * k + b]);
            let r2 = ratio(self.bigram[b * k + c], self.unigram[b]);
            let r1 = ratio(self.unigram[c], n);
            if r3 >= r2 && r3 >= r1 {
                l3 += count;
            } else if r2 >= r1 {
                l2 += count;
            } else {
                l1 += count;
            }
        }
        let total = (l1 + l2 + l3) as f64;
        Ok(Lambdas {
            unigram: l1 as f64 / total,
            bigram: l2 as f64 / total,
            trigram: l3 as f64 / total,
        })
    }
}

/// Smoothed `P(t | t-2, t-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionModel {
    counts: TransitionCounts,
    lambdas: Lambdas,
}

impl TransitionModel {
    pub fn fit(counts: TransitionCounts) -> Result<Self, ModelError> {
        let lambdas = counts.fit_lambdas()?;
        Ok(TransitionModel { counts, lambdas })
    }

    pub(crate) fn from_parts(counts: TransitionCounts, lambdas: Lambdas) -> Self {
        TransitionModel { counts, lambdas }
    }

    pub fn counts(&self) -> &TransitionCounts {
        &self.counts
    }

    pub fn lambdas(&self) -> Lambdas {
        self.lambdas
    }

    /// `λ3·P(tag | prev2, prev1) + λ2·P(tag | prev1) + λ1·P(tag)`, each
    /// maximum-likelihood term taken as 0 when its denominator is 0.
    pub fn prob(&self, prev2: TagId, prev1: TagId, tag: TagId) -> f64 {
        self.prob_raw(prev2.0, prev1.0, tag.0)
    }

    pub(crate) fn prob_raw(&self, a: usize, b: usize, c: usize) -> f64 {
        let c_ = &self.counts;
        let k = c_.states;
        let mle = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let tri = mle(c_.trigram[(a * k + b) * k + c], c_.bigram[a * k + b]);
        let bi = mle(c_.bigram[b * k + c], c_.unigram[b]);
        let uni = if c_.is_continuation(c) {
            mle(c_.unigram[c], c_.continuation_total())
        } else {
            0.0
        };
        self.lambdas.trigram * tri + self.lambdas.bigram * bi + self.lambdas.unigram * uni
    }

    /// Natural-log transition table indexed `[(prev2 * K + prev1) * K + tag]`.
    pub(crate) fn log_table(&self) -> Vec<f64> {
        let k = self.counts.states;
        let mut table = vec![f64::NEG_INFINITY; k * k * k];
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    table[(a * k + b) * k + c] = self.prob_raw(a, b, c).ln();
                }
            }
        }
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::IobLabel;
    use std::collections::HashMap;

    fn inventory() -> TagInventory {
        TagInventory::new(["B-X", "I-X", "O"].iter().map(|s| s.parse::<IobLabel>().unwrap()))
    }

    fn ids(inv: &TagInventory, names: &[&str]) -> Vec<TagId> {
        names.iter().map(|n| inv.parse(n).unwrap()).collect()
    }

    fn hand_counts() -> (TagInventory, TransitionCounts) {
        let inv = inventory();
        let mut counts = TransitionCounts::new(&inv);
        for s in [&["B-X", "I-X", "O"][..], &["O"], &["B-X", "O"]] {
            counts.add_sentence(&ids(&inv, s));
        }
        (inv, counts)
    }

    #[test]
    fn padded_counts_for_two_outside_tokens() {
        let inv = inventory();
        let mut counts = TransitionCounts::new(&inv);
        counts.add_sentence(&ids(&inv, &["O", "O"]));
        let (s1, s2, e) = (inv.start1(), inv.start2(), inv.end());
        let o = inv.parse("O").unwrap();
        assert_eq!(counts.trigram(s1, s2, o), 1);
        assert_eq!(counts.trigram(s2, o, o), 1);
        assert_eq!(counts.trigram(o, o, e), 1);
        assert_eq!(counts.nonzero_trigrams().count(), 3);
    }

    #[test]
    fn single_token_sentence() {
        let inv = inventory();
        let mut counts = TransitionCounts::new(&inv);
        let b = inv.parse("B-X").unwrap();
        counts.add_sentence(&[b]);
        let got: Vec<_> = counts.nonzero_trigrams().collect();
        assert_eq!(
            got,
            vec![
                (inv.start1().0, inv.start2().0, b.0, 1),
                (inv.start2().0, b.0, inv.end().0, 1)
            ]
        );
    }

    #[test]
    fn empty_table_rejected() {
        let counts = TransitionCounts::new(&inventory());
        assert!(matches!(counts.fit_lambdas(), Err(ModelError::EmptyCorpus)));
    }

    /// Independent deleted-interpolation trace over tuple-keyed hash maps.
    fn naive_lambdas(sentences: &[&[&str]]) -> (f64, f64, f64) {
        let mut uni: HashMap<&str, u64> = HashMap::new();
        let mut bi: HashMap<(&str, &str), u64> = HashMap::new();
        let mut tri: HashMap<(&str, &str, &str), u64> = HashMap::new();
        for s in sentences {
            let mut p = vec!["<s1>", "<s2>"];
            p.extend_from_slice(s);
            p.push("</s>");
            for t in &p {
                *uni.entry(t).or_default() += 1;
            }
            for w in p.windows(2) {
                *bi.entry((w[0], w[1])).or_default() += 1;
            }
            for w in p.windows(3) {
                *tri.entry((w[0], w[1], w[2])).or_default() += 1;
            }
        }
        let n: u64 = uni
            .iter()
            .filter(|(t, _)| !t.starts_with("<s"))
            .map(|(_, c)| c)
            .sum();
        let f = |a: u64, b: u64| if b <= 1 { 0.0 } else { (a as f64 - 1.0) / (b as f64 - 1.0) };
        let mut l = [0u64; 3];
        for (&(a, b, c), &cnt) in &tri {
            let r = [f(uni[c], n), f(bi[&(b, c)], uni[b]), f(cnt, bi[&(a, b)])];
            let best = if r[2] >= r[1] && r[2] >= r[0] {
                2
            } else if r[1] >= r[0] {
                1
            } else {
                0
            };
            l[best] += cnt;
        }
        let total = (l[0] + l[1] + l[2]) as f64;
        (l[0] as f64 / total, l[1] as f64 / total, l[2] as f64 / total)
    }

    #[test]
    fn hand_corpus_lambdas() {
        let (_, counts) = hand_counts();
        let lambdas = counts.fit_lambdas().unwrap();
        let third = 1.0 / 3.0;
        assert!((lambdas.unigram - third).abs() < 1e-15);
        assert!((lambdas.bigram - third).abs() < 1e-15);
        assert!((lambdas.trigram - third).abs() < 1e-15);
        let (u, b, t) = naive_lambdas(&[&["B-X", "I-X", "O"], &["O"], &["B-X", "O"]]);
        assert_eq!((lambdas.unigram, lambdas.bigram, lambdas.trigram), (u, b, t));
    }

    #[test]
    fn naive_agrees_on_skewed_corpus() {
        let corpus: Vec<&[&str]> = vec![
            &["O", "O", "O", "B-X"],
            &["B-X", "I-X", "I-X", "O", "O"],
            &["O", "O", "O"],
            &["O", "B-X", "I-X"],
            &["O", "O", "O", "O", "O", "O"],
        ];
        let inv = inventory();
        let mut counts = TransitionCounts::new(&inv);
        for s in &corpus {
            counts.add_sentence(&ids(&inv, s));
        }
        let l = counts.fit_lambdas().unwrap();
        assert_eq!((l.unigram, l.bigram, l.trigram), naive_lambdas(&corpus));
        assert!((l.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_single_tag_corpus() {
        let inv = inventory();
        let mut counts = TransitionCounts::new(&inv);
        for _ in 0..4 {
            counts.add_sentence(&ids(&inv, &["O", "O", "O"]));
        }
        let l = counts.fit_lambdas().unwrap();
        assert!((l.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hand_corpus_probabilities() {
        let (inv, counts) = hand_counts();
        let model = TransitionModel::fit(counts).unwrap();
        let t = |n: &str| inv.parse(n).unwrap();
        assert!((model.prob(t("B-X"), t("I-X"), t("O")) - 7.0 / 9.0).abs() < 1e-15);
        assert!((model.prob(t("<s2>"), t("O"), t("</s>")) - 7.0 / 9.0).abs() < 1e-15);
        assert!((model.prob(t("<s1>"), t("<s2>"), t("B-X")) - 14.0 / 27.0).abs() < 1e-15);
        // boundary start tags are never predicted
        assert_eq!(model.prob(t("<s1>"), t("<s2>"), t("<s2>")), 0.0);
    }

    #[test]
    fn seen_contexts_are_stochastic() {
        let (inv, counts) = hand_counts();
        let model = TransitionModel::fit(counts.clone()).unwrap();
        let all: Vec<TagId> = (0..inv.num_states()).map(TagId).collect();
        for &a in &all {
            for &b in &all {
                if counts.bigram(a, b) == 0 || b == inv.end() {
                    continue;
                }
                let s: f64 = all.iter().map(|&c| model.prob(a, b, c)).sum();
                assert!((s - 1.0).abs() < 1e-9, "{a} {b} {s}");
            }
        }
    }

    #[test]
    fn one_path_gets_probability_one() {
        let inv = inventory();
        let mut counts = TransitionCounts::new(&inv);
        counts.add_sentence(&ids(&inv, &["O"]));
        let model = TransitionModel::fit(counts).unwrap();
        let o = inv.parse("O").unwrap();
        assert!((model.prob(inv.start1(), inv.start2(), o) - 1.0).abs() < 1e-15);
        assert!((model.prob(inv.start2(), o, inv.end()) - 1.0).abs() < 1e-15);
    }
}
