use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use hmm_ner::corpus::{
    emit_annotation_file, parse_annotation_file, parse_raw_file, read_iob_file, spans_to_iob,
    write_iob_file, IngestReport, RawTweet, TaggedSentence,
};
use hmm_ner::error::{Error, ModelError};
use hmm_ner::eval::score;
use hmm_ner::features::{GazCode, GazetteerSet, MetaTag, PseudoToken, XTag};
use hmm_ner::model::{load_model, observation_key, write_model, HmmModel, TagId};
use hmm_ner::pipeline::{train_model, Tagger};
use log::{info, warn};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::manifest::Manifest;
use crate::pos::PosSource;
use crate::{Failure, ReportFormat, EXIT_FAILURE, EXIT_USAGE};

/// Decoding and training failures on well-formed input exit with 1; bad
/// input and I/O exit with 2.
fn classify(e: Error, context: String) -> Failure {
    let code = match &e {
        Error::Decode(_) | Error::Model(ModelError::EmptyCorpus) => EXIT_FAILURE,
        _ => EXIT_USAGE,
    };
    Failure {
        code,
        error: anyhow::Error::new(e).context(context),
    }
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn gazetteer_files() -> Vec<String> {
    GazCode::ALL
        .iter()
        .map(|g| format!("{}.txt", g.list_name()))
        .collect()
}

fn load_gazetteers(dir: Option<&Path>) -> anyhow::Result<GazetteerSet> {
    match dir {
        Some(d) => GazetteerSet::from_dir(d).with_context(|| format!("loading gazetteers from {}", d.display())),
        None => {
            warn!("no gazetteer directory given; gazetteer features disabled");
            Ok(GazetteerSet::new())
        }
    }
}

fn record_gazetteers(manifest: &mut Manifest, dir: Option<&Path>) -> anyhow::Result<()> {
    if let Some(d) = dir {
        let files = gazetteer_files();
        let names: Vec<&str> = files.iter().map(String::as_str).collect();
        manifest.input_dir("gazetteers", d, &names)?;
    }
    Ok(())
}

fn load_model_file(path: &Path) -> Result<HmmModel, Failure> {
    load_model(path).map_err(|e| classify(e.into(), format!("loading model {}", path.display())))
}

pub fn convert(config: &RunConfig) -> Result<(), Failure> {
    let raw_path = config.require(&config.paths.raw, "--raw")?;
    let ann_path = config.require(&config.paths.annotations, "--ann")?;
    let out_path = config.require(&config.paths.output, "--out")?;
    let resolved = config.resolve()?;
    let pos = PosSource::new(config.pos_command.as_deref());

    let tweets = parse_raw_file(&read_text(raw_path)?)
        .with_context(|| format!("parsing {}", raw_path.display()))?;
    let mut annotations = parse_annotation_file(&read_text(ann_path)?)
        .with_context(|| format!("parsing {}", ann_path.display()))?;

    let mut report = IngestReport::default();
    let mut sentences = Vec::with_capacity(tweets.len());
    for tweet in &tweets {
        let spans = annotations
            .remove(&tweet.tweet_id)
            .map(|t| t.spans)
            .unwrap_or_default();
        let sentence = spans_to_iob(tweet, &spans, &mut report)
            .with_context(|| format!("aligning spans of tweet {}", tweet.tweet_id))?;
        let (tokens, labels) = sentence.into_parts();
        let words: Vec<String> = tokens.into_iter().map(|t| t.surface).collect();
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let pos_tags = pos
            .tag(&refs)
            .with_context(|| format!("POS tagging tweet {}", tweet.tweet_id))?;
        sentences.push(TaggedSentence {
            words,
            pos_tags,
            labels,
        });
    }
    for (id, leftover) in annotations {
        warn!(
            "annotation for unknown tweet id {id} skipped ({} spans)",
            leftover.spans.len()
        );
        report.unknown_tweet_ids.push(id);
    }

    let mut buf = Vec::new();
    write_iob_file(&mut buf, &sentences)?;
    write_bytes(out_path, &buf)?;

    println!("tweets\t{}", tweets.len());
    println!("spans\t{}", report.spans_seen);
    println!("aligned\t{}", report.spans_aligned);
    println!("dropped\t{}", report.spans_dropped);
    println!("raw_string_mismatches\t{}", report.raw_string_mismatches);
    println!("unknown_tweet_ids\t{}", report.unknown_tweet_ids.len());

    let mut manifest = Manifest::new("convert", resolved);
    manifest.input("raw", raw_path)?;
    manifest.input("annotations", ann_path)?;
    manifest.output("iob", out_path)?;
    manifest.summary("tweets", tweets.len() as i64);
    manifest.summary("spans_seen", report.spans_seen as i64);
    manifest.summary("spans_aligned", report.spans_aligned as i64);
    manifest.summary("spans_dropped", report.spans_dropped as i64);
    manifest.summary("raw_string_mismatches", report.raw_string_mismatches as i64);
    manifest.summary(
        "unknown_tweet_ids",
        toml::Value::Array(
            report
                .unknown_tweet_ids
                .iter()
                .map(|s| toml::Value::String(s.clone()))
                .collect(),
        ),
    );
    manifest.write_beside(out_path)?;
    Ok(())
}

pub fn train(config: &RunConfig) -> Result<(), Failure> {
    let iob_path = config.require(&config.paths.iob, "--iob")?;
    let model_path = config.require(&config.paths.model, "--model")?;
    let gaz_dir = config.paths.gazetteers.as_deref();
    let resolved = config.resolve()?;
    let model_config = config.model_config()?;
    let features = config.feature_config()?;

    let sentences = read_iob_file(&read_text(iob_path)?)
        .with_context(|| format!("parsing {}", iob_path.display()))?;
    let gaz = load_gazetteers(gaz_dir)?;
    let model = train_model(&sentences, &gaz, features, model_config)
        .map_err(|e| classify(e, format!("training on {}", iob_path.display())))?;

    let mut buf = Vec::new();
    write_model(&model, &mut buf).map_err(|e| classify(e.into(), "serializing model".into()))?;
    write_bytes(model_path, &buf)?;

    let lambdas = model.lambdas();
    println!("labels\t{}", model.tags().num_labels());
    println!("vocab\t{}", model.vocab_size());
    println!("lambda_unigram\t{}", lambdas.unigram);
    println!("lambda_bigram\t{}", lambdas.bigram);
    println!("lambda_trigram\t{}", lambdas.trigram);
    println!("theta\t{}", model.suffixes().theta());
    info!("model written to {}", model_path.display());

    let mut manifest = Manifest::new("train", resolved);
    manifest.input("iob", iob_path)?;
    record_gazetteers(&mut manifest, gaz_dir)?;
    manifest.output("model", model_path)?;
    manifest.summary("sentences", sentences.len() as i64);
    manifest.summary("labels", model.tags().num_labels() as i64);
    manifest.summary("vocab", model.vocab_size() as i64);
    manifest.summary("lambda_unigram", lambdas.unigram);
    manifest.summary("lambda_bigram", lambdas.bigram);
    manifest.summary("lambda_trigram", lambdas.trigram);
    manifest.write_beside(model_path)?;
    Ok(())
}

fn tag_one(
    tagger: &Tagger,
    pos: &PosSource,
    tweet: &RawTweet,
) -> Result<Vec<hmm_ner::EntitySpan>, Failure> {
    let tokens = hmm_ner::tokenize(&tweet.text);
    let words: Vec<&str> = tokens.iter().map(|t| t.surface.as_str()).collect();
    let pos_tags = pos
        .tag(&words)
        .with_context(|| format!("POS tagging tweet {}", tweet.tweet_id))?;
    tagger
        .annotate(tweet, &pos_tags)
        .map_err(|e| classify(e, format!("tagging tweet {}", tweet.tweet_id)))
}

pub fn tag(config: &RunConfig, threads: usize) -> Result<(), Failure> {
    let raw_path = config.require(&config.paths.raw, "--raw")?;
    let model_path = config.require(&config.paths.model, "--model")?;
    let out_path = config.require(&config.paths.output, "--out")?;
    let gaz_dir = config.paths.gazetteers.as_deref();
    let resolved = config.resolve()?;
    let pos = PosSource::new(config.pos_command.as_deref());

    let tweets = parse_raw_file(&read_text(raw_path)?)
        .with_context(|| format!("parsing {}", raw_path.display()))?;
    let model = load_model_file(model_path)?;
    let gaz = load_gazetteers(gaz_dir)?;
    let mut tagger = Tagger::new(model, gaz);
    tagger.features = config.feature_config()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("starting worker threads")?;
    // indexed collect keeps input order whatever the scheduling
    let results: Vec<Result<Vec<hmm_ner::EntitySpan>, Failure>> =
        pool.install(|| tweets.par_iter().map(|t| tag_one(&tagger, &pos, t)).collect());
    let mut spans = BTreeMap::new();
    let mut entities = 0usize;
    for (tweet, result) in tweets.iter().zip(results) {
        let found = result?;
        entities += found.len();
        spans.insert(tweet.tweet_id.clone(), found);
    }

    let mut buf = Vec::new();
    emit_annotation_file(&mut buf, &tweets, &spans)?;
    write_bytes(out_path, &buf)?;
    info!("{} entities in {} tweets", entities, tweets.len());

    let mut manifest = Manifest::new("tag", resolved);
    manifest.input("raw", raw_path)?;
    manifest.input("model", model_path)?;
    record_gazetteers(&mut manifest, gaz_dir)?;
    manifest.output("annotations", out_path)?;
    manifest.summary("tweets", tweets.len() as i64);
    manifest.summary("entities", entities as i64);
    manifest.write_beside(out_path)?;
    Ok(())
}

pub fn eval(
    gold_path: &Path,
    pred_path: &Path,
    format: ReportFormat,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let gold = parse_annotation_file(&read_text(gold_path)?)
        .with_context(|| format!("parsing {}", gold_path.display()))?;
    let pred = parse_annotation_file(&read_text(pred_path)?)
        .with_context(|| format!("parsing {}", pred_path.display()))?;
    let report = score(&gold, &pred);
    let text = match format {
        ReportFormat::Table => report.to_table(),
        ReportFormat::Tsv => report.to_tsv(),
    };
    print!("{text}");
    if let Some(out) = out {
        write_bytes(out, text.as_bytes())?;
        let mut manifest = Manifest::new("eval", RunConfig::default().resolve()?);
        manifest.input("gold", gold_path)?;
        manifest.input("predicted", pred_path)?;
        manifest.output("report", out)?;
        manifest.summary("precision", report.overall.precision());
        manifest.summary("recall", report.overall.recall());
        manifest.summary("f_measure", report.overall.f_measure());
        manifest.write_beside(out)?;
    }
    Ok(())
}

/// A parsed `inspect` query.
#[derive(Debug, PartialEq)]
enum Query {
    Summary,
    Transition(String, String),
    Emission(String),
    Suffix(String),
}

fn parse_key(word: &str, xtag: &str, meta: &str) -> anyhow::Result<String> {
    let meta: MetaTag = meta.parse().map_err(|e: String| anyhow!(e))?;
    Ok(observation_key(&PseudoToken {
        word: word.into(),
        x_tag: XTag::parse(xtag),
        meta_tag: meta,
    }))
}

fn parse_query(query: &str) -> anyhow::Result<Query> {
    let parts: Vec<&str> = query.split_whitespace().collect();
    match parts.as_slice() {
        ["summary"] => Ok(Query::Summary),
        ["trans", a, b] => Ok(Query::Transition(a.to_string(), b.to_string())),
        ["emit", w, x, m] => Ok(Query::Emission(parse_key(w, x, m)?)),
        ["suffix", w, x, m] => Ok(Query::Suffix(parse_key(w, x, m)?)),
        _ => bail!(
            "bad query {query:?}; expected `summary`, `trans PREV2 PREV1`, \
             `emit WORD XTAG META` or `suffix WORD XTAG META`"
        ),
    }
}

fn label_rows(model: &HmmModel, values: &[f64], out: &mut String) {
    for (t, v) in model.tags().label_ids().zip(values) {
        let _ = writeln!(out, "{}\t{v}", model.tags().name(t));
    }
}

fn suffix_block(model: &HmmModel, key: &str, out: &mut String) {
    let suffixes = model.suffixes();
    let suffix = suffixes.longest_suffix(key);
    let _ = writeln!(out, "suffix\t{suffix:?}");
    let dist = suffixes.distribution(suffix).unwrap_or_default();
    let _ = writeln!(out, "# P(tag | suffix)");
    label_rows(model, dist, out);
    let _ = writeln!(out, "# score P(tag | suffix) / P(tag)");
    label_rows(model, &suffixes.scores(key), out);
}

fn answer(model: &HmmModel, query: &Query) -> anyhow::Result<String> {
    let mut out = String::new();
    let tags = model.tags();
    match query {
        Query::Summary => {
            let l = model.lambdas();
            let _ = writeln!(out, "labels\t{}", tags.num_labels());
            let _ = writeln!(out, "vocab\t{}", model.vocab_size());
            let _ = writeln!(out, "lambda_unigram\t{}", l.unigram);
            let _ = writeln!(out, "lambda_bigram\t{}", l.bigram);
            let _ = writeln!(out, "lambda_trigram\t{}", l.trigram);
            let _ = writeln!(out, "theta\t{}", model.suffixes().theta());
            let _ = writeln!(out, "suffixes\t{}", model.suffixes().num_suffixes());
        }
        Query::Transition(a, b) => {
            let a = tags.parse(a)?;
            let b = tags.parse(b)?;
            let next: Vec<TagId> = tags.label_ids().chain([tags.end()]).collect();
            let mut sum = 0.0;
            for c in next {
                let p = model.transition_prob(a, b, c);
                sum += p;
                let _ = writeln!(out, "{}\t{p}", tags.name(c));
            }
            let _ = writeln!(out, "sum\t{sum}");
        }
        Query::Emission(key) => match model.emissions().probs(key) {
            Some(probs) => {
                let _ = writeln!(out, "known\t{}", model.emissions().key_total(key));
                label_rows(model, &probs, &mut out);
            }
            None => {
                let _ = writeln!(out, "unknown key; suffix model");
                suffix_block(model, key, &mut out);
            }
        },
        Query::Suffix(key) => suffix_block(model, key, &mut out),
    }
    Ok(out)
}

pub fn inspect(config: &RunConfig, query: &str) -> Result<(), Failure> {
    let query = parse_query(query)?;
    let model_path = config.require(&config.paths.model, "--model")?;
    let model = load_model_file(model_path)?;
    print!("{}", answer(&model, &query)?);
    Ok(())
}
