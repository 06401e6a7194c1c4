//! POS tags for raw tweets: a fixed placeholder, or an external tagger run
//! through `sh -c` with one token per line in and one tag per line out.

use std::io::Write;
use std::process::{Command, Stdio};

use anyhow::{bail, Context};

pub const PLACEHOLDER_POS: &str = "UNK";

#[derive(Debug, Clone)]
pub enum PosSource {
    Placeholder,
    Command(String),
}

impl PosSource {
    pub fn new(command: Option<&str>) -> Self {
        match command {
            Some(cmd) => PosSource::Command(cmd.to_string()),
            None => PosSource::Placeholder,
        }
    }

    pub fn tag(&self, words: &[&str]) -> anyhow::Result<Vec<String>> {
        match self {
            _ if words.is_empty() => Ok(Vec::new()),
            PosSource::Placeholder => Ok(vec![PLACEHOLDER_POS.to_string(); words.len()]),
            PosSource::Command(cmd) => run_tagger(cmd, words),
        }
    }
}

fn run_tagger(cmd: &str, words: &[&str]) -> anyhow::Result<Vec<String>> {
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(cmd)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::inherit())
        .spawn()
        .with_context(|| format!("starting POS command {cmd:?}"))?;
    let mut stdin = child.stdin.take().expect("piped stdin");
    let input: String = words.iter().map(|w| format!("{w}\n")).collect();
    // write from a separate thread so a tagger that streams output cannot block us
    let writer = std::thread::spawn(move || stdin.write_all(input.as_bytes()));
    let output = child.wait_with_output()?;
    writer
        .join()
        .expect("writer thread")
        .with_context(|| format!("writing to POS command {cmd:?}"))?;
    if !output.status.success() {
        bail!("POS command {cmd:?} failed with {}", output.status);
    }
    let stdout = String::from_utf8(output.stdout).context("POS command output is not UTF-8")?;
    let tags: Vec<String> = stdout
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect();
    if tags.len() != words.len() {
        bail!(
            "POS command {cmd:?} returned {} tags for {} tokens",
            tags.len(),
            words.len()
        );
    }
    Ok(tags)
}
