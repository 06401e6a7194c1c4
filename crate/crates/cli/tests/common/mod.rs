//! Synthetic tweet corpora drawn from a known first-order label HMM, with
//! entity words partly listed in gazetteers, plus an exact Viterbi decoder
//! over the true generator parameters.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use hmm_ner::corpus::{iob_to_spans, tokenize, EntitySpan, IobLabel, IobSentence, RawTweet};
use rand::distributions::{Distribution, WeightedIndex};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SYLLABLES: [&str; 16] = [
    "ka", "ra", "mi", "su", "de", "lo", "ni", "pa", "ve", "to", "shi", "an", "ja", "ru", "bo", "gul",
];
const O_POS: [&str; 6] = ["NN", "VB", "DT", "IN", "JJ", "RB"];
const FOUR_TYPES: [&str; 4] = ["PER", "LOC", "ORG", "DATE"];

#[derive(Debug, Clone)]
pub struct Sample {
    pub words: Vec<String>,
    pub pos: Vec<String>,
    pub labels: Vec<usize>,
}

pub struct Generator {
    pub labels: Vec<IobLabel>,
    start: Vec<f64>,
    /// `trans[from][to]`; the last column is the end of the sentence.
    trans: Vec<Vec<f64>>,
    emit: Vec<Vec<(String, String, f64)>>,
    emit_lookup: Vec<HashMap<(String, String), f64>>,
    /// Gazetteer file stem to entries.
    pub gazetteers: BTreeMap<&'static str, Vec<String>>,
    max_len: usize,
}

fn zipf(n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|i| 1.0 / (i as f64 + 1.0)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

fn pseudo_word(rng: &mut StdRng, ending: &str, capital: bool, seen: &mut HashSet<String>) -> String {
    loop {
        let n = rng.gen_range(2..=4);
        let mut w: String = (0..n).map(|_| SYLLABLES[rng.gen_range(0..SYLLABLES.len())]).collect();
        w.push_str(ending);
        if capital {
            let mut c = w.chars();
            let first = c.next().unwrap().to_uppercase().collect::<String>();
            w = first + c.as_str();
        }
        if seen.insert(w.clone()) {
            return w;
        }
    }
}

impl Generator {
    /// `num_types` entity types give `2 * num_types + 1` labels. With four
    /// types they are PER, LOC, ORG and DATE.
    pub fn new(num_types: usize, seed: u64) -> Self {
        let mut rng = StdRng::seed_from_u64(seed);
        let type_names: Vec<String> = (0..num_types)
            .map(|k| match (num_types, k) {
                (4, k) => FOUR_TYPES[k].to_string(),
                (_, k) => format!("T{k:02}"),
            })
            .collect();
        let mut labels = vec![IobLabel::Outside];
        for t in &type_names {
            labels.push(IobLabel::Begin(t.clone()));
            labels.push(IobLabel::Inside(t.clone()));
        }
        let n = labels.len();
        let b = |k: usize| 1 + 2 * k;
        let i = |k: usize| 2 + 2 * k;

        let mut start = vec![0.0; n];
        start[0] = 0.5;
        for k in 0..num_types {
            start[b(k)] = 0.5 / num_types as f64;
        }
        let mut trans = vec![vec![0.0; n + 1]; n];
        trans[0][0] = 0.80;
        trans[0][n] = 0.05;
        for k in 0..num_types {
            trans[0][b(k)] = 0.15 / num_types as f64;
            trans[b(k)][i(k)] = 0.55;
            trans[b(k)][0] = 0.38;
            trans[b(k)][n] = 0.07;
            trans[i(k)][i(k)] = 0.25;
            trans[i(k)][0] = 0.65;
            trans[i(k)][n] = 0.10;
        }

        let mut seen = HashSet::new();
        let mut emit: Vec<Vec<(String, String, f64)>> = vec![Vec::new(); n];
        let mut gazetteers: BTreeMap<&'static str, Vec<String>> = BTreeMap::new();

        // outside words: lowercase, one POS each, a few numbers and
        // capitalized function words for ambiguity
        let o_words: Vec<(String, String)> = (0..400)
            .map(|j| match j {
                0..=4 => (["The", "This", "We", "I", "Our"][j].to_string(), "DT".to_string()),
                5..=9 => (["2", "10", "100", "3", "25"][j - 5].to_string(), "CD".to_string()),
                _ => (
                    pseudo_word(&mut rng, "", false, &mut seen),
                    O_POS[rng.gen_range(0..O_POS.len())].to_string(),
                ),
            })
            .collect();
        let mut order: Vec<usize> = (0..o_words.len()).collect();
        // frequent slots go to a shuffled mix so numbers are not all top-ranked
        for j in (1..order.len()).rev() {
            order.swap(j, rng.gen_range(0..=j));
        }
        for (rank, p) in zipf(o_words.len()).into_iter().enumerate() {
            let (w, pos) = &o_words[order[rank]];
            emit[0].push((w.clone(), pos.clone(), p));
        }

        let mut shared_names: Vec<String> = Vec::new();
        for k in 0..num_types {
            let name = type_names[k].as_str();
            let (b_words, i_words): (Vec<String>, Vec<String>) = if name == "DATE" {
                let months = [
                    "January", "February", "March", "April", "May", "June", "July", "August",
                    "September", "October", "November", "December", "Monday", "Tuesday",
                    "Wednesday", "Thursday", "Friday", "Saturday", "Sunday",
                ];
                let b: Vec<String> = months.iter().map(|s| s.to_string()).collect();
                let i: Vec<String> = (1..=31)
                    .map(|d| d.to_string())
                    .chain((2010..=2016).map(|y| y.to_string()))
                    .collect();
                (b, i)
            } else {
                let endings = ["esh", "pur", "corp", "ita", "abad", "ganj"];
                let ending = endings[k % endings.len()];
                let mut b: Vec<String> =
                    (0..600).map(|_| pseudo_word(&mut rng, ending, true, &mut seen)).collect();
                let mut i: Vec<String> =
                    (0..600).map(|_| pseudo_word(&mut rng, "", true, &mut seen)).collect();
                // LOC shares names with PER; ORG continuations reuse outside words
                if name == "PER" {
                    shared_names = b[2..42].to_vec();
                } else if name == "LOC" {
                    b[3..43].clone_from_slice(&shared_names);
                } else if name == "ORG" {
                    for (j, slot) in i.iter_mut().take(30).enumerate() {
                        *slot = o_words[10 + j].0.clone();
                    }
                }
                (b, i)
            };
            for (slot, words) in [(b(k), &b_words), (i(k), &i_words)] {
                let weights = zipf(words.len());
                for (w, p) in words.iter().zip(weights) {
                    if name == "DATE" && slot == i(k) {
                        emit[slot].push((w.clone(), "CD".into(), p));
                    } else {
                        emit[slot].push((w.clone(), "NNP".into(), p * 0.7));
                        emit[slot].push((w.clone(), "NN".into(), p * 0.3));
                    }
                }
            }
            let lists: &[(&'static str, &Vec<String>)] = match name {
                "PER" => &[("bperson", &b_words), ("iperson", &i_words)],
                "LOC" => &[("blocation", &b_words), ("ilocation", &i_words)],
                "ORG" => &[("facilities", &b_words)],
                "DATE" => &[("months", &b_words)],
                _ => &[],
            };
            for (file, words) in lists {
                let entry = gazetteers.entry(file).or_default();
                // every fifth word is left out of the list
                for (j, w) in words.iter().enumerate() {
                    if j % 5 != 4 {
                        entry.push(w.to_lowercase());
                    }
                }
            }
        }

        let emit_lookup = emit
            .iter()
            .map(|row| {
                let mut m: HashMap<(String, String), f64> = HashMap::new();
                for (w, p, prob) in row {
                    *m.entry((w.clone(), p.clone())).or_default() += prob;
                }
                m
            })
            .collect();
        Generator {
            labels,
            start,
            trans,
            emit,
            emit_lookup,
            gazetteers,
            max_len: 40,
        }
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn sample(&self, rng: &mut StdRng) -> Sample {
        let n = self.labels.len();
        let mut labels = Vec::new();
        let mut cur = WeightedIndex::new(&self.start).unwrap().sample(rng);
        loop {
            labels.push(cur);
            if labels.len() == self.max_len {
                break;
            }
            let next = WeightedIndex::new(&self.trans[cur]).unwrap().sample(rng);
            if next == n {
                break;
            }
            cur = next;
        }
        self.emit_words(rng, labels)
    }

    /// A sentence of exactly `len` tokens (the end transition is never taken).
    pub fn sample_fixed(&self, rng: &mut StdRng, len: usize) -> Sample {
        let n = self.labels.len();
        let mut labels = Vec::with_capacity(len);
        let mut cur = WeightedIndex::new(&self.start).unwrap().sample(rng);
        while labels.len() < len {
            labels.push(cur);
            cur = WeightedIndex::new(&self.trans[cur][..n]).unwrap().sample(rng);
        }
        self.emit_words(rng, labels)
    }

    fn emit_words(&self, rng: &mut StdRng, labels: Vec<usize>) -> Sample {
        let mut words = Vec::with_capacity(labels.len());
        let mut pos = Vec::with_capacity(labels.len());
        for &l in &labels {
            let row = &self.emit[l];
            let idx = WeightedIndex::new(row.iter().map(|e| e.2)).unwrap().sample(rng);
            words.push(row[idx].0.clone());
            pos.push(row[idx].1.clone());
        }
        Sample { words, pos, labels }
    }

    pub fn corpus(&self, size: usize, seed: u64) -> Vec<Sample> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..size).map(|_| self.sample(&mut rng)).collect()
    }

    /// Exact most probable label sequence under the generating model.
    pub fn oracle_decode(&self, words: &[String], pos: &[String]) -> Vec<usize> {
        let n = self.labels.len();
        let emit = |i: usize, l: usize| -> f64 {
            self.emit_lookup[l]
                .get(&(words[i].clone(), pos[i].clone()))
                .copied()
                .unwrap_or(0.0)
                .ln()
        };
        let mut delta: Vec<f64> = (0..n).map(|l| self.start[l].ln() + emit(0, l)).collect();
        let mut back: Vec<Vec<usize>> = Vec::new();
        for i in 1..words.len() {
            let mut next = vec![f64::NEG_INFINITY; n];
            let mut arg = vec![0usize; n];
            for l in 0..n {
                let e = emit(i, l);
                if e == f64::NEG_INFINITY {
                    continue;
                }
                for (k, d) in delta.iter().enumerate() {
                    let s = d + self.trans[k][l].ln() + e;
                    if s > next[l] {
                        next[l] = s;
                        arg[l] = k;
                    }
                }
            }
            delta = next;
            back.push(arg);
        }
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (l, d) in delta.iter().enumerate() {
            let s = d + self.trans[l][n].ln();
            if s > best_score {
                best_score = s;
                best = l;
            }
        }
        let mut path = vec![best];
        for arg in back.iter().rev() {
            let prev = arg[*path.last().unwrap()];
            path.push(prev);
        }
        path.reverse();
        path
    }

    pub fn label_names(&self, labels: &[usize]) -> Vec<IobLabel> {
        labels.iter().map(|&l| self.labels[l].clone()).collect()
    }

    pub fn write_gazetteers(&self, dir: &Path) {
        fs::create_dir_all(dir).unwrap();
        for (file, entries) in &self.gazetteers {
            let mut text = String::from("# synthetic list\n");
            for e in entries {
                text.push_str(e);
                text.push('\n');
            }
            fs::write(dir.join(format!("{file}.txt")), text).unwrap();
        }
    }
}

pub fn tweet_id(i: usize) -> String {
    format!("T{i:06}")
}

pub fn raw_tweet(i: usize, s: &Sample) -> RawTweet {
    RawTweet {
        tweet_id: tweet_id(i),
        user_id: format!("U{:03}", i % 97),
        text: s.words.join(" "),
    }
}

/// Entity spans of a labeled tweet.
pub fn spans_of(tweet: &RawTweet, labels: Vec<IobLabel>) -> Vec<EntitySpan> {
    let sentence = IobSentence::new(tokenize(&tweet.text), labels).unwrap();
    iob_to_spans(&sentence, &tweet.text).unwrap()
}

pub fn raw_file(tweets: &[RawTweet]) -> String {
    let mut out = String::new();
    for t in tweets {
        let _ = writeln!(out, "{}\t{}\t{}", t.tweet_id, t.user_id, t.text);
    }
    out
}

pub fn annotation_file(tweets: &[RawTweet], spans: &[Vec<EntitySpan>]) -> String {
    let mut out = String::new();
    for (t, ss) in tweets.iter().zip(spans) {
        for s in ss {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                t.tweet_id, t.user_id, s.ne_tag, s.raw_string, s.start_index, s.length
            );
        }
    }
    out
}

pub fn iob_file(gen: &Generator, samples: &[Sample]) -> String {
    let mut out = String::new();
    for s in samples {
        for ((w, p), &l) in s.words.iter().zip(&s.pos).zip(&s.labels) {
            let _ = writeln!(out, "{w}\t{p}\t{}", gen.labels[l]);
        }
        out.push('\n');
    }
    out
}

/// A POS "tagger" for the CLI hook: looks each token up in a word→tag file.
pub fn write_pos_lookup(dir: &Path, samples: &[Sample]) -> String {
    let mut table: BTreeMap<&str, &str> = BTreeMap::new();
    for s in samples {
        for (w, p) in s.words.iter().zip(&s.pos) {
            table.entry(w).or_insert(p);
        }
    }
    let mut text = String::new();
    for (w, p) in table {
        let _ = writeln!(text, "{w}\t{p}");
    }
    let path = dir.join("pos_table.tsv");
    fs::write(&path, text).unwrap();
    format!(
        "awk -F'\\t' 'NR==FNR {{ t[$1]=$2; next }} {{ print (($0 in t) ? t[$0] : \"NN\") }}' {} -",
        path.display()
    )
}
