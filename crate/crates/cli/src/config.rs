//! Run configuration: an optional TOML file, overridden field by field by
//! command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use hmm_ner::features::{AldtRule, FeatureConfig};
use hmm_ner::model::{EmissionMode, ModelConfig, DEFAULT_RARE_THRESHOLD, DEFAULT_SUFFIX_LEN};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub raw: Option<PathBuf>,
    pub annotations: Option<PathBuf>,
    pub iob: Option<PathBuf>,
    pub gazetteers: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub paths: Paths,
    pub suffix_len: Option<usize>,
    pub rare_threshold: Option<u64>,
    /// `tag` or `observed-literal`.
    pub emission_mode: Option<String>,
    /// `all-dots` or `all-digits`.
    pub aldt: Option<String>,
    /// POS tagger command; tokens one per line on stdin, tags on stdout.
    pub pos_command: Option<String>,
    pub log_level: Option<String>,
}

/// Fully resolved settings, as echoed into run manifests.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub suffix_len: usize,
    pub rare_threshold: u64,
    pub emission_mode: String,
    pub aldt: String,
    pub pos_command: Option<String>,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Fields set in `flags` replace ours.
    pub fn overlay(mut self, flags: RunConfig) -> Self {
        macro_rules! take {
            ($($f:ident).+) => {
                if flags.$($f).+.is_some() {
                    self.$($f).+ = flags.$($f).+;
                }
            };
        }
        take!(paths.raw);
        take!(paths.annotations);
        take!(paths.iob);
        take!(paths.gazetteers);
        take!(paths.model);
        take!(paths.output);
        take!(suffix_len);
        take!(rare_threshold);
        take!(emission_mode);
        take!(aldt);
        take!(pos_command);
        take!(log_level);
        self
    }

    pub fn resolve(&self) -> anyhow::Result<Resolved> {
        let mode = self.emission_mode()?;
        let aldt = self.aldt()?;
        Ok(Resolved {
            suffix_len: self.suffix_len.unwrap_or(DEFAULT_SUFFIX_LEN),
            rare_threshold: self.rare_threshold.unwrap_or(DEFAULT_RARE_THRESHOLD),
            emission_mode: match mode {
                EmissionMode::Tag => "tag",
                EmissionMode::Observed => "observed-literal",
            }
            .into(),
            aldt: match aldt {
                AldtRule::AllDots => "all-dots",
                AldtRule::AllDigits => "all-digits",
            }
            .into(),
            pos_command: self.pos_command.clone(),
        })
    }

    fn emission_mode(&self) -> anyhow::Result<EmissionMode> {
        match self.emission_mode.as_deref() {
            None => Ok(EmissionMode::Tag),
            Some(s) => s
                .parse()
                .map_err(|_| anyhow::anyhow!("unknown emission mode {s:?}")),
        }
    }

    fn aldt(&self) -> anyhow::Result<AldtRule> {
        match self.aldt.as_deref() {
            None | Some("all-dots") => Ok(AldtRule::AllDots),
            Some("all-digits") => Ok(AldtRule::AllDigits),
            Some(s) => bail!("unknown ALDT rule {s:?} (expected all-dots or all-digits)"),
        }
    }

    pub fn model_config(&self) -> anyhow::Result<ModelConfig> {
        Ok(ModelConfig {
            suffix_max_len: self.suffix_len.unwrap_or(DEFAULT_SUFFIX_LEN),
            rare_threshold: self.rare_threshold.unwrap_or(DEFAULT_RARE_THRESHOLD),
            emission_mode: self.emission_mode()?,
        })
    }

    pub fn feature_config(&self) -> anyhow::Result<FeatureConfig> {
        Ok(FeatureConfig { aldt: self.aldt()? })
    }

    /// A required path, or a usage error naming the flag.
    pub fn require<'a>(&self, path: &'a Option<PathBuf>, flag: &str) -> anyhow::Result<&'a Path> {
        match path {
            Some(p) => Ok(p),
            None => bail!("missing {flag} (flag or config file)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: RunConfig = toml::from_str(
            "suffix_len = 4\naldt = \"all-digits\"\n[paths]\nmodel = \"a.model\"\nraw = \"r.txt\"\n",
        )
        .unwrap();
        let flags = RunConfig {
            suffix_len: Some(6),
            paths: Paths {
                model: Some("b.model".into()),
                ..Paths::default()
            },
            ..RunConfig::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.suffix_len, Some(6));
        assert_eq!(merged.paths.model.as_deref(), Some(Path::new("b.model")));
        assert_eq!(merged.paths.raw.as_deref(), Some(Path::new("r.txt")));
        assert_eq!(merged.feature_config().unwrap().aldt, AldtRule::AllDigits);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<RunConfig>("sufix_len = 4").is_err());
    }

    #[test]
    fn defaults_resolve() {
        let r = RunConfig::default().resolve().unwrap();
        assert_eq!(r.suffix_len, 10);
        assert_eq!(r.rare_threshold, 2);
        assert_eq!(r.emission_mode, "tag");
        assert_eq!(r.aldt, "all-dots");
    }
}
