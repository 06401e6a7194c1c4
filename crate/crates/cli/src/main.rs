//! `hmm-ner`: convert annotated tweets to IOB, train a model, tag raw
//! tweets, score predictions and probe model files.
//!
//! Exit codes: 0 on success, 1 when decoding or training fails on valid
//! input, 2 for usage, I/O and input-format errors.

mod commands;
mod config;
mod manifest;
mod pos;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Paths, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "hmm-ner", version, about = "Trigram HMM named-entity tagger for tweets")]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Log level (error, warn, info, debug, trace).
    #[arg(long, global = true)]
    log_level: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Default)]
struct ModelFlags {
    /// Longest suffix used by the unknown-word model.
    #[arg(long)]
    suffix_len: Option<usize>,
    /// Keys seen at most this often feed the suffix model.
    #[arg(long)]
    rare_threshold: Option<u64>,
    /// Emission denominator: `tag` or `observed-literal`.
    #[arg(long)]
    emission_mode: Option<String>,
}

#[derive(Debug, Args, Default)]
struct FeatureFlags {
    /// Predicate of the ALDT meta-tag rule: `all-dots` or `all-digits`.
    #[arg(long)]
    aldt: Option<String>,
    /// Shell command tagging tokens (one per line in, one tag per line out).
    #[arg(long = "pos")]
    pos_command: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Raw tweets plus span annotations to the IOB interchange file.
    Convert {
        #[arg(long)]
        raw: Option<PathBuf>,
        #[arg(long = "ann")]
        annotations: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "pos")]
        pos_command: Option<String>,
    },
    /// Train a model from an IOB interchange file.
    Train {
        #[arg(long)]
        iob: Option<PathBuf>,
        /// Directory holding the gazetteer lists.
        #[arg(long = "gaz")]
        gazetteers: Option<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        model_flags: ModelFlags,
        #[arg(long)]
        aldt: Option<String>,
    },
    /// Tag raw tweets and write the annotation file.
    Tag {
        #[arg(long)]
        raw: Option<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long = "gaz")]
        gazetteers: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        features: FeatureFlags,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Entity-level precision, recall and F-measure.
    Eval {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
        format: ReportFormat,
        /// Also write the report (and its manifest) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Probe a model: `trans PREV2 PREV1`, `emit WORD XTAG META`,
    /// `suffix WORD XTAG META` or `summary`.
    Inspect {
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        query: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Table,
    Tsv,
}

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: EXIT_USAGE,
            error: e.into(),
        }
    }
}

fn init_logging(level: Option<&str>) {
    let level = level.unwrap_or("warn");
    env_logger::Builder::new()
        .parse_filters(level)
        .format_timestamp(None)
        .format_target(false)
        .init();
}

fn flags_config(cli: &Cli) -> RunConfig {
    let mut flags = RunConfig {
        log_level: cli.log_level.clone(),
        ..RunConfig::default()
    };
    match &cli.command {
        Command::Convert {
            raw,
            annotations,
            out,
            pos_command,
        } => {
            flags.paths = Paths {
                raw: raw.clone(),
                annotations: annotations.clone(),
                output: out.clone(),
                ..Paths::default()
            };
            flags.pos_command = pos_command.clone();
        }
        Command::Train {
            iob,
            gazetteers,
            model,
            model_flags,
            aldt,
        } => {
            flags.paths = Paths {
                iob: iob.clone(),
                gazetteers: gazetteers.clone(),
                model: model.clone(),
                ..Paths::default()
            };
            flags.suffix_len = model_flags.suffix_len;
            flags.rare_threshold = model_flags.rare_threshold;
            flags.emission_mode = model_flags.emission_mode.clone();
            flags.aldt = aldt.clone();
        }
        Command::Tag {
            raw,
            model,
            gazetteers,
            out,
            features,
            ..
        } => {
            flags.paths = Paths {
                raw: raw.clone(),
                model: model.clone(),
                gazetteers: gazetteers.clone(),
                output: out.clone(),
                ..Paths::default()
            };
            flags.aldt = features.aldt.clone();
            flags.pos_command = features.pos_command.clone();
        }
        Command::Eval { .. } => {}
        Command::Inspect { model, .. } => {
            flags.paths.model = model.clone();
        }
    }
    flags
}

fn run(cli: Cli) -> Result<(), Failure> {
    let base = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let config = base.overlay(flags_config(&cli));
    init_logging(config.log_level.as_deref());
    match cli.command {
        Command::Convert { .. } => commands::convert(&config),
        Command::Train { .. } => commands::train(&config),
        Command::Tag { threads, .. } => commands::tag(&config, threads),
        Command::Eval {
            gold,
            pred,
            format,
            out,
        } => commands::eval(&gold, &pred, format, out.as_deref()),
        Command::Inspect { query, .. } => commands::inspect(&config, &query),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
