//! Python bindings: tokenization, feature rules, gazetteers, model
//! training/loading/tagging, orphan repair and span scoring.

use std::collections::BTreeMap;
use std::path::PathBuf;

use hmm_ner::corpus::{AnnotationMap, EntitySpan, IobLabel, RawTweet, TaggedSentence, TweetSpans};
use hmm_ner::eval::TypeScore;
use hmm_ner::features::{
    assign_meta_tag_with, AldtRule, FeatureConfig, GazCode, GazetteerSet, MetaTag, PseudoToken,
    XTag,
};
use hmm_ner::model::{load_model, observation_key, read_model, save_model, write_model, ModelConfig};
use hmm_ner::pipeline::{train_model, Tagger};
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

pyo3::create_exception!(hmm_ner_py, HmmNerError, PyException);

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    HmmNerError::new_err(e.to_string())
}

fn parse_aldt(s: &str) -> PyResult<AldtRule> {
    match s {
        "all-dots" => Ok(AldtRule::AllDots),
        "all-digits" => Ok(AldtRule::AllDigits),
        _ => Err(PyValueError::new_err(format!(
            "unknown ALDT rule {s:?} (expected all-dots or all-digits)"
        ))),
    }
}

fn parse_labels(labels: &[String]) -> PyResult<Vec<IobLabel>> {
    labels
        .iter()
        .map(|l| l.parse().map_err(|e| PyValueError::new_err(format!("{e}"))))
        .collect()
}

fn gaz_code(name: &str) -> PyResult<GazCode> {
    GazCode::from_code(name)
        .or_else(|| GazCode::from_list_name(name))
        .ok_or_else(|| PyValueError::new_err(format!("unknown gazetteer list {name:?}")))
}

/// Whitespace tokens as `(surface, start, end)` character offsets.
#[pyfunction]
fn tokenize(text: &str) -> Vec<(String, usize, usize)> {
    hmm_ner::tokenize(text)
        .into_iter()
        .map(|t| (t.surface, t.start, t.end))
        .collect()
}

/// Surface-shape code of `token` at sentence index `position`.
#[pyfunction]
#[pyo3(signature = (token, position, aldt = "all-dots"))]
fn assign_meta_tag(token: &str, position: usize, aldt: &str) -> PyResult<&'static str> {
    Ok(assign_meta_tag_with(token, position, parse_aldt(aldt)?).code())
}

#[pyfunction]
fn repair_orphan_i(labels: Vec<String>) -> PyResult<Vec<String>> {
    let labels = parse_labels(&labels)?;
    Ok(hmm_ner::repair_orphan_i(&labels)
        .iter()
        .map(ToString::to_string)
        .collect())
}

fn annotation_map(rows: Vec<(String, String, usize, usize)>) -> AnnotationMap {
    let mut map = AnnotationMap::new();
    for (tweet_id, ne_tag, start, length) in rows {
        map.entry(tweet_id)
            .or_insert_with(|| TweetSpans {
                user_id: String::new(),
                spans: Vec::new(),
            })
            .spans
            .push(EntitySpan {
                ne_tag,
                raw_string: String::new(),
                start_index: start,
                length,
            });
    }
    map
}

fn score_dict<'py>(py: Python<'py>, s: &TypeScore) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("tp", s.true_positives)?;
    d.set_item("fp", s.false_positives)?;
    d.set_item("fn", s.false_negatives)?;
    d.set_item("precision", s.precision())?;
    d.set_item("recall", s.recall())?;
    d.set_item("f", s.f_measure())?;
    Ok(d)
}

/// Exact-match entity scoring. Spans are `(tweet_id, ne_tag, start, length)`.
/// Returns `{"overall": {...}, "per_type": {type: {...}}}` with percentages.
#[pyfunction]
fn score<'py>(
    py: Python<'py>,
    gold: Vec<(String, String, usize, usize)>,
    predicted: Vec<(String, String, usize, usize)>,
) -> PyResult<Bound<'py, PyDict>> {
    let report = hmm_ner::score(&annotation_map(gold), &annotation_map(predicted));
    let per_type = PyDict::new(py);
    for (ty, s) in &report.per_type {
        per_type.set_item(ty, score_dict(py, s)?)?;
    }
    let out = PyDict::new(py);
    out.set_item("overall", score_dict(py, &report.overall)?)?;
    out.set_item("per_type", per_type)?;
    out.set_item("tsv", report.to_tsv())?;
    Ok(out)
}

/// The ten gazetteer lists.
#[pyclass(name = "Gazetteer", from_py_object)]
#[derive(Clone, Default)]
struct PyGazetteer {
    inner: GazetteerSet,
}

#[pymethods]
impl PyGazetteer {
    #[new]
    fn new() -> Self {
        Self::default()
    }

    /// Loads `<list>.txt` files (bperson.txt, blocation.txt, ...) from `path`.
    #[staticmethod]
    fn from_dir(path: PathBuf) -> PyResult<Self> {
        Ok(PyGazetteer {
            inner: GazetteerSet::from_dir(&path)?,
        })
    }

    /// `list` is a code (`BPER`) or a file stem (`bperson`).
    fn add(&mut self, list: &str, entry: &str) -> PyResult<()> {
        self.inner.insert(gaz_code(list)?, entry);
        Ok(())
    }

    /// Code of the first list containing `token`, if any.
    fn lookup(&self, token: &str) -> Option<&'static str> {
        self.inner.lookup(token).map(GazCode::code)
    }

    fn __len__(&self) -> usize {
        GazCode::ALL.iter().map(|&c| self.inner.len(c)).sum()
    }
}

/// A trained tagger: model parameters plus the gazetteers used for features.
#[pyclass(name = "Model")]
struct PyModel {
    tagger: Tagger,
}

impl PyModel {
    fn pos_for(&self, text: &str, pos_tags: Option<Vec<String>>) -> Vec<String> {
        pos_tags.unwrap_or_else(|| vec!["UNK".to_string(); hmm_ner::tokenize(text).len()])
    }

    fn tweet(text: &str) -> RawTweet {
        RawTweet {
            tweet_id: String::new(),
            user_id: String::new(),
            text: text.to_string(),
        }
    }
}

#[pymethods]
impl PyModel {
    /// Trains from sentences given as lists of `(word, pos, label)` triples.
    #[staticmethod]
    #[pyo3(signature = (
        sentences,
        gazetteer = None,
        suffix_len = 10,
        rare_threshold = 2,
        emission_mode = "tag",
        aldt = "all-dots",
    ))]
    fn train(
        sentences: Vec<Vec<(String, String, String)>>,
        gazetteer: Option<PyGazetteer>,
        suffix_len: usize,
        rare_threshold: u64,
        emission_mode: &str,
        aldt: &str,
    ) -> PyResult<Self> {
        let mut data = Vec::with_capacity(sentences.len());
        for s in sentences {
            let mut t = TaggedSentence::default();
            for (word, pos, label) in s {
                t.words.push(word);
                t.pos_tags.push(pos);
                t.labels.push(label.parse().map_err(|e| PyValueError::new_err(format!("{e}")))?);
            }
            data.push(t);
        }
        let gaz = gazetteer.map(|g| g.inner).unwrap_or_default();
        let features = FeatureConfig {
            aldt: parse_aldt(aldt)?,
        };
        let config = ModelConfig {
            suffix_max_len: suffix_len,
            rare_threshold,
            emission_mode: emission_mode.parse().map_err(PyValueError::new_err)?,
        };
        let model = train_model(&data, &gaz, features, config).map_err(err)?;
        let mut tagger = Tagger::new(model, gaz);
        tagger.features = features;
        Ok(PyModel { tagger })
    }

    #[staticmethod]
    #[pyo3(signature = (path, gazetteer = None, aldt = "all-dots"))]
    fn load(path: PathBuf, gazetteer: Option<PyGazetteer>, aldt: &str) -> PyResult<Self> {
        let model = load_model(&path).map_err(err)?;
        let mut tagger = Tagger::new(model, gazetteer.map(|g| g.inner).unwrap_or_default());
        tagger.features.aldt = parse_aldt(aldt)?;
        Ok(PyModel { tagger })
    }

    #[staticmethod]
    #[pyo3(signature = (data, gazetteer = None, aldt = "all-dots"))]
    fn from_bytes(data: &[u8], gazetteer: Option<PyGazetteer>, aldt: &str) -> PyResult<Self> {
        let model = read_model(data).map_err(err)?;
        let mut tagger = Tagger::new(model, gazetteer.map(|g| g.inner).unwrap_or_default());
        tagger.features.aldt = parse_aldt(aldt)?;
        Ok(PyModel { tagger })
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        save_model(&self.tagger.model, &path).map_err(err)
    }

    fn to_bytes(&self) -> PyResult<Vec<u8>> {
        let mut buf = Vec::new();
        write_model(&self.tagger.model, &mut buf).map_err(err)?;
        Ok(buf)
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.tagger
            .model
            .tags()
            .labels()
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    /// `(unigram, bigram, trigram)` interpolation weights.
    #[getter]
    fn lambdas(&self) -> (f64, f64, f64) {
        let l = self.tagger.model.lambdas();
        (l.unigram, l.bigram, l.trigram)
    }

    #[getter]
    fn vocab_size(&self) -> usize {
        self.tagger.model.vocab_size()
    }

    /// `P(tag | prev2, prev1)`; boundary tags are `<s1>`, `<s2>` and `</s>`.
    fn transition_prob(&self, prev2: &str, prev1: &str, tag: &str) -> PyResult<f64> {
        let tags = self.tagger.model.tags();
        let id = |name: &str| tags.parse(name).map_err(err);
        Ok(self.tagger.model.transition_prob(id(prev2)?, id(prev1)?, id(tag)?))
    }

    /// Observation scores of a `(word, xtag, meta)` triplet per label:
    /// emission probabilities for known keys, suffix-model scores otherwise.
    fn observation_scores(&self, word: &str, xtag: &str, meta: &str) -> PyResult<BTreeMap<String, f64>> {
        let meta: MetaTag = meta.parse().map_err(PyValueError::new_err)?;
        let key = observation_key(&PseudoToken {
            word: word.to_string(),
            x_tag: XTag::parse(xtag),
            meta_tag: meta,
        });
        let model = &self.tagger.model;
        Ok(model
            .tags()
            .labels()
            .iter()
            .map(ToString::to_string)
            .zip(model.observation_scores(&key))
            .collect())
    }

    /// IOB labels of the whitespace tokens of `text`, orphan runs repaired.
    /// Without `pos_tags` every token gets the placeholder `UNK`.
    #[pyo3(signature = (text, pos_tags = None))]
    fn tag(&self, text: &str, pos_tags: Option<Vec<String>>) -> PyResult<Vec<String>> {
        let pos = self.pos_for(text, pos_tags);
        let sentence = self.tagger.tag(&Self::tweet(text), &pos).map_err(err)?;
        Ok(sentence.labels().iter().map(ToString::to_string).collect())
    }

    /// Entity spans of `text` as `(ne_tag, raw_string, start, length)`.
    #[pyo3(signature = (text, pos_tags = None))]
    fn annotate(
        &self,
        text: &str,
        pos_tags: Option<Vec<String>>,
    ) -> PyResult<Vec<(String, String, usize, usize)>> {
        let pos = self.pos_for(text, pos_tags);
        let spans = self.tagger.annotate(&Self::tweet(text), &pos).map_err(err)?;
        Ok(spans
            .into_iter()
            .map(|s| (s.ne_tag, s.raw_string, s.start_index, s.length))
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(labels={}, vocab_size={})",
            self.tagger.model.tags().num_labels(),
            self.tagger.model.vocab_size()
        )
    }
}

#[pymodule]
fn hmm_ner_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("HmmNerError", m.py().get_type::<HmmNerError>())?;
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(assign_meta_tag, m)?)?;
    m.add_function(wrap_pyfunction!(repair_orphan_i, m)?)?;
    m.add_function(wrap_pyfunction!(score, m)?)?;
    m.add_class::<PyGazetteer>()?;
    m.add_class::<PyModel>()?;
    Ok(())
}
