//! Text model file.
//!
//! ```text
//! hmm-ner-model<TAB>1
//! [config]
//! suffix_max_len<TAB>10
//! rare_threshold<TAB>2
//! emission_mode<TAB>tag
//! [labels]<TAB>N            N lines: label
//! [smoothing]
//! unigram<TAB>λ1
//! bigram<TAB>λ2
//! trigram<TAB>λ3
//! theta<TAB>θ
//! [unigrams]<TAB>N          N lines: tag<TAB>count
//! [bigrams]<TAB>N           N lines: tag<TAB>tag<TAB>count
//! [trigrams]<TAB>N          N lines: tag<TAB>tag<TAB>tag<TAB>count
//! [emissions]<TAB>N         N lines: key<TAB>label<TAB>count
//! [suffixes]<TAB>N          N lines: suffix<TAB>label<TAB>count
//! checksum<TAB>sha256 of every preceding byte, lowercase hex
//! ```
//!
//! Boundary tags are written `<s1>`, `<s2>` and `</s>`. Floats use the
//! shortest representation that parses back to the same bits, and every
//! derived probability is recomputed from the stored counts, so a reloaded
//! model answers every query bit-identically.

use std::collections::HashMap;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use super::emission::{EmissionMode, EmissionModel};
use super::suffix::SuffixModel;
use super::tags::{TagId, TagInventory};
use super::transition::{Lambdas, TransitionCounts, TransitionModel};
use super::{HmmModel, ModelConfig};
use crate::corpus::IobLabel;
use crate::error::ModelError;

pub const MODEL_FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "hmm-ner-model";
const CHECKSUM_PREFIX: &str = "checksum\t";

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn render(model: &HmmModel) -> String {
    use std::fmt::Write as _;
    let tags = model.tags();
    let name = |i: usize| tags.name(TagId(i));
    let cfg = model.config();
    let mut out = String::new();
    // writing to a String cannot fail
    let _ = writeln!(out, "{MAGIC}\t{MODEL_FORMAT_VERSION}");
    let _ = writeln!(out, "[config]");
    let _ = writeln!(out, "suffix_max_len\t{}", cfg.suffix_max_len);
    let _ = writeln!(out, "rare_threshold\t{}", cfg.rare_threshold);
    let _ = writeln!(out, "emission_mode\t{}", cfg.emission_mode);

    let _ = writeln!(out, "[labels]\t{}", tags.num_labels());
    for label in tags.labels() {
        let _ = writeln!(out, "{label}");
    }

    let l = model.lambdas();
    let _ = writeln!(out, "[smoothing]");
    let _ = writeln!(out, "unigram\t{}", l.unigram);
    let _ = writeln!(out, "bigram\t{}", l.bigram);
    let _ = writeln!(out, "trigram\t{}", l.trigram);
    let _ = writeln!(out, "theta\t{}", model.suffixes().theta());

    let counts = model.transitions().counts();
    let uni: Vec<_> = counts.nonzero_unigrams().collect();
    let _ = writeln!(out, "[unigrams]\t{}", uni.len());
    for (a, c) in uni {
        let _ = writeln!(out, "{}\t{c}", name(a));
    }
    let bi: Vec<_> = counts.nonzero_bigrams().collect();
    let _ = writeln!(out, "[bigrams]\t{}", bi.len());
    for (a, b, c) in bi {
        let _ = writeln!(out, "{}\t{}\t{c}", name(a), name(b));
    }
    let tri: Vec<_> = counts.nonzero_trigrams().collect();
    let _ = writeln!(out, "[trigrams]\t{}", tri.len());
    for (a, b, t, c) in tri {
        let _ = writeln!(out, "{}\t{}\t{}\t{c}", name(a), name(b), name(t));
    }

    let em = model.emissions().sorted_entries();
    let _ = writeln!(out, "[emissions]\t{}", em.len());
    for (key, t, c) in em {
        let _ = writeln!(out, "{key}\t{}\t{c}", name(t));
    }

    let sx = model.suffixes().sorted_counts();
    let _ = writeln!(out, "[suffixes]\t{}", sx.len());
    for (s, t, c) in sx {
        let _ = writeln!(out, "{s}\t{}\t{c}", name(t));
    }

    let digest = Sha256::digest(out.as_bytes());
    let _ = writeln!(out, "{CHECKSUM_PREFIX}{}", hex(&digest));
    out
}

pub fn write_model<W: Write>(model: &HmmModel, mut out: W) -> Result<(), ModelError> {
    out.write_all(render(model).as_bytes())?;
    out.flush()?;
    Ok(())
}

pub fn save_model(model: &HmmModel, path: &Path) -> Result<(), ModelError> {
    if path.as_os_str().is_empty() {
        return Err(ModelError::EmptyPath);
    }
    fs::write(path, render(model))?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<HmmModel, ModelError> {
    if path.as_os_str().is_empty() {
        return Err(ModelError::EmptyPath);
    }
    read_model(fs::File::open(path)?)
}

pub fn read_model<R: Read>(mut input: R) -> Result<HmmModel, ModelError> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    parse(&text)
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn err(&self, reason: impl Into<String>) -> ModelError {
        ModelError::Format {
            line: self.line,
            reason: reason.into(),
        }
    }

    fn next(&mut self) -> Result<&'a str, ModelError> {
        match self.iter.next() {
            Some((i, l)) => {
                self.line = i + 1;
                Ok(l)
            }
            None => {
                self.line += 1;
                Err(self.err("unexpected end of file"))
            }
        }
    }

    fn fields<const N: usize>(&mut self) -> Result<[&'a str; N], ModelError> {
        let line = self.next()?;
        let parts: Vec<&str> = line.split('\t').collect();
        parts
            .try_into()
            .map_err(|_| self.err(format!("expected {N} tab-separated fields")))
    }

    fn keyed(&mut self, key: &str) -> Result<&'a str, ModelError> {
        let [k, v] = self.fields::<2>()?;
        if k != key {
            return Err(self.err(format!("expected {key:?}, found {k:?}")));
        }
        Ok(v)
    }

    fn keyed_number<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, ModelError> {
        let v = self.keyed(key)?;
        self.number(v)
    }

    fn section(&mut self, name: &str) -> Result<usize, ModelError> {
        let header = format!("[{name}]");
        let [h, n] = self.fields::<2>()?;
        if h != header {
            return Err(self.err(format!("expected section {header}")));
        }
        self.number(n)
    }

    fn number<T: std::str::FromStr>(&self, s: &str) -> Result<T, ModelError> {
        s.parse()
            .map_err(|_| self.err(format!("invalid number {s:?}")))
    }

    fn tag(&self, tags: &TagInventory, s: &str) -> Result<usize, ModelError> {
        tags.parse(s)
            .map(TagId::index)
            .map_err(|_| self.err(format!("unknown tag {s:?}")))
    }

    fn label(&self, tags: &TagInventory, s: &str) -> Result<usize, ModelError> {
        let id = self.tag(tags, s)?;
        if id >= tags.num_labels() {
            return Err(self.err(format!("boundary tag {s:?} not allowed here")));
        }
        Ok(id)
    }
}

fn parse(text: &str) -> Result<HmmModel, ModelError> {
    let header = text.lines().next().unwrap_or("");
    let version = match header.split_once('\t') {
        Some((MAGIC, v)) => v.parse::<u32>().map_err(|_| ModelError::Format {
            line: 1,
            reason: format!("invalid version {v:?}"),
        })?,
        _ => {
            return Err(ModelError::Format {
                line: 1,
                reason: "not a model file".into(),
            })
        }
    };
    if version > MODEL_FORMAT_VERSION {
        return Err(ModelError::UnsupportedVersion {
            found: version,
            supported: MODEL_FORMAT_VERSION,
        });
    }

    let split = text
        .rfind(&format!("\n{CHECKSUM_PREFIX}"))
        .ok_or_else(|| ModelError::Format {
            line: text.lines().count() + 1,
            reason: "missing checksum (truncated file?)".into(),
        })?;
    let (body, trailer) = text.split_at(split + 1);
    let expected = trailer[CHECKSUM_PREFIX.len()..].trim_end_matches(['\n', '\r']);
    if hex(&Sha256::digest(body.as_bytes())) != expected {
        return Err(ModelError::Checksum);
    }

    let mut lines = Lines {
        iter: body.lines().enumerate(),
        line: 0,
    };
    lines.next()?;

    let [cfg] = lines.fields::<1>()?;
    if cfg != "[config]" {
        return Err(lines.err("expected section [config]"));
    }
    let suffix_max_len = lines.keyed_number("suffix_max_len")?;
    let rare_threshold = lines.keyed_number("rare_threshold")?;
    let mode = lines.keyed("emission_mode")?;
    let emission_mode = mode
        .parse::<EmissionMode>()
        .map_err(|e| lines.err(e))?;
    let config = ModelConfig {
        suffix_max_len,
        rare_threshold,
        emission_mode,
    };

    let n = lines.section("labels")?;
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let l = lines.next()?;
        labels.push(l.parse::<IobLabel>().map_err(|e| lines.err(e.to_string()))?);
    }
    let tags = TagInventory::new(labels.iter().cloned());
    if tags.labels() != labels.as_slice() {
        return Err(lines.err("labels not sorted and unique"));
    }

    let [sm] = lines.fields::<1>()?;
    if sm != "[smoothing]" {
        return Err(lines.err("expected section [smoothing]"));
    }
    let lambdas = Lambdas {
        unigram: lines.keyed_number("unigram")?,
        bigram: lines.keyed_number("bigram")?,
        trigram: lines.keyed_number("trigram")?,
    };
    let theta: f64 = lines.keyed_number("theta")?;

    let mut counts = TransitionCounts::new(&tags);
    for _ in 0..lines.section("unigrams")? {
        let [a, c] = lines.fields::<2>()?;
        counts.set_unigram(lines.tag(&tags, a)?, lines.number(c)?);
    }
    for _ in 0..lines.section("bigrams")? {
        let [a, b, c] = lines.fields::<3>()?;
        counts.set_bigram(lines.tag(&tags, a)?, lines.tag(&tags, b)?, lines.number(c)?);
    }
    for _ in 0..lines.section("trigrams")? {
        let [a, b, t, c] = lines.fields::<4>()?;
        counts.set_trigram(
            lines.tag(&tags, a)?,
            lines.tag(&tags, b)?,
            lines.tag(&tags, t)?,
            lines.number(c)?,
        );
    }

    let mut emissions = EmissionModel::new(tags.num_labels(), emission_mode);
    for _ in 0..lines.section("emissions")? {
        let [key, t, c] = lines.fields::<3>()?;
        emissions.add(key, TagId(lines.label(&tags, t)?), lines.number(c)?);
    }

    let mut suffix_counts: HashMap<String, Vec<u64>> = HashMap::new();
    for _ in 0..lines.section("suffixes")? {
        let [s, t, c] = lines.fields::<3>()?;
        let t = lines.label(&tags, t)?;
        suffix_counts
            .entry(s.to_string())
            .or_insert_with(|| vec![0; tags.num_labels()])[t] = lines.number(c)?;
    }
    if !suffix_counts.contains_key("") {
        return Err(lines.err("suffix table lacks the empty suffix"));
    }
    if lines.iter.next().is_some() {
        return Err(lines.err("trailing data before checksum"));
    }

    let suffixes = SuffixModel::from_counts(
        suffix_counts,
        theta,
        suffix_max_len,
        rare_threshold,
        tags.num_labels(),
    );
    debug_assert_eq!(suffixes.num_labels(), tags.num_labels());
    let transitions = TransitionModel::from_parts(counts, lambdas);
    Ok(HmmModel::assemble(config, tags, transitions, emissions, suffixes))
}
