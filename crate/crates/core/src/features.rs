//! Token-level features: the meta-tag rule cascade, gazetteer lookup for the
//! X-tag, and assembly of `<word, X-tag, meta-tag>` pseudo-tokens.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

use log::{info, warn};

use crate::error::FeatureError;
use crate::model::OBSERVATION_SEPARATOR;

/// Surface-shape code of a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetaTag {
    /// Default when no rule fires.
    Yyyy,
    /// Initial capital.
    Icap,
    /// Abbreviation in sentence-initial position.
    Abbr,
    /// Hashtag followed by a capital.
    Chas,
    Hash,
    /// Leading `@`.
    Atsy,
    /// Trailing colon with an initial capital.
    Ccol,
    Coln,
    /// Hyphenated with an initial capital.
    Chyp,
    Hyph,
    /// Exactly four digits.
    Dfor,
    Dtwo,
    Done,
    /// Contains a digit.
    Digt,
    /// One comma plus digits.
    Dcom,
    /// Trailing comma with an initial capital.
    Clco,
    Lcom,
    /// Several commas with an initial capital.
    Cmco,
    /// All dots (or all digits under [`AldtRule::AllDigits`]).
    Aldt,
}

impl MetaTag {
    pub const ALL: [MetaTag; 19] = [
        MetaTag::Yyyy,
        MetaTag::Icap,
        MetaTag::Abbr,
        MetaTag::Chas,
        MetaTag::Hash,
        MetaTag::Atsy,
        MetaTag::Ccol,
        MetaTag::Coln,
        MetaTag::Chyp,
        MetaTag::Hyph,
        MetaTag::Dfor,
        MetaTag::Dtwo,
        MetaTag::Done,
        MetaTag::Digt,
        MetaTag::Dcom,
        MetaTag::Clco,
        MetaTag::Lcom,
        MetaTag::Cmco,
        MetaTag::Aldt,
    ];

    pub fn code(self) -> &'static str {
        match self {
            MetaTag::Yyyy => "YYYY",
            MetaTag::Icap => "ICAP",
            MetaTag::Abbr => "ABBR",
            MetaTag::Chas => "CHAS",
            MetaTag::Hash => "HASH",
            MetaTag::Atsy => "ATSY",
            MetaTag::Ccol => "CCOL",
            MetaTag::Coln => "COLN",
            MetaTag::Chyp => "CHYP",
            MetaTag::Hyph => "HYPH",
            MetaTag::Dfor => "DFOR",
            MetaTag::Dtwo => "DTWO",
            MetaTag::Done => "DONE",
            MetaTag::Digt => "DIGT",
            MetaTag::Dcom => "DCOM",
            MetaTag::Clco => "CLCO",
            MetaTag::Lcom => "LCOM",
            MetaTag::Cmco => "CMCO",
            MetaTag::Aldt => "ALDT",
        }
    }
}

impl fmt::Display for MetaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for MetaTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetaTag::ALL
            .into_iter()
            .find(|m| m.code() == s)
            .ok_or_else(|| format!("unknown meta-tag {s:?}"))
    }
}

/// Which predicate the final `ALDT` rule tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AldtRule {
    /// Every character is `.`.
    #[default]
    AllDots,
    /// Every character is a digit. Overrides the DFOR/DTWO/DONE codes.
    AllDigits,
}

fn starts_upper(chars: &[char]) -> bool {
    chars.first().is_some_and(|c| c.is_uppercase())
}

/// Two or more characters, only uppercase letters and periods, at least one letter.
fn is_abbreviation(chars: &[char]) -> bool {
    chars.len() >= 2
        && chars.iter().all(|&c| c == '.' || c.is_uppercase())
        && chars.iter().any(|c| c.is_uppercase())
}

/// Meta-tag of `token` at sentence index `position`, with the default `ALDT` rule.
pub fn assign_meta_tag(token: &str, position: usize) -> MetaTag {
    assign_meta_tag_with(token, position, AldtRule::AllDots)
}

/// Runs every rule block in order; each block that matches overwrites the
/// tag, so the last matching block decides.
pub fn assign_meta_tag_with(token: &str, position: usize, aldt: AldtRule) -> MetaTag {
    let chars: Vec<char> = token.chars().collect();
    let cap = starts_upper(&chars);
    let mut tag = MetaTag::Yyyy;

    if cap {
        tag = MetaTag::Icap;
    }

    if position == 0 && is_abbreviation(&chars) {
        tag = MetaTag::Abbr;
    }

    if chars.first() == Some(&'#') {
        tag = if chars.get(1).is_some_and(|c| c.is_uppercase()) {
            MetaTag::Chas
        } else {
            MetaTag::Hash
        };
    }

    if chars.first() == Some(&'@') {
        tag = MetaTag::Atsy;
    }

    if chars.last() == Some(&':') {
        tag = if cap { MetaTag::Ccol } else { MetaTag::Coln };
    }

    let hyphen = chars.iter().position(|&c| c == '-');
    if hyphen.is_some() && cap {
        tag = MetaTag::Chyp;
    } else if hyphen.is_some_and(|i| i >= 3) {
        tag = MetaTag::Hyph;
    }

    let all_digits = !chars.is_empty() && chars.iter().all(|c| c.is_ascii_digit());
    let has_digit = chars.iter().any(|c| c.is_ascii_digit());
    if all_digits && chars.len() == 4 {
        tag = MetaTag::Dfor;
    } else if all_digits && chars.len() == 2 {
        tag = MetaTag::Dtwo;
    } else if all_digits && chars.len() == 1 {
        tag = MetaTag::Done;
    } else if has_digit {
        tag = MetaTag::Digt;
    }

    let commas = chars.iter().filter(|&&c| c == ',').count();
    let ends_comma = chars.last() == Some(&',');
    if commas == 1 && has_digit {
        tag = MetaTag::Dcom;
    } else if ends_comma && cap {
        tag = MetaTag::Clco;
    } else if ends_comma && commas == 1 {
        tag = MetaTag::Lcom;
    } else if commas > 1 && cap {
        tag = MetaTag::Cmco;
    }

    let aldt_fires = match aldt {
        AldtRule::AllDots => !chars.is_empty() && chars.iter().all(|&c| c == '.'),
        AldtRule::AllDigits => all_digits,
    };
    if aldt_fires {
        tag = MetaTag::Aldt;
    }

    tag
}

/// The ten gazetteer lists, in lookup-precedence order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GazCode {
    Bper,
    Iper,
    Bloc,
    Iloc,
    Faci,
    Mont,
    Days,
    Perd,
    Coun,
    Mony,
}

impl GazCode {
    pub const ALL: [GazCode; 10] = [
        GazCode::Bper,
        GazCode::Iper,
        GazCode::Bloc,
        GazCode::Iloc,
        GazCode::Faci,
        GazCode::Mont,
        GazCode::Days,
        GazCode::Perd,
        GazCode::Coun,
        GazCode::Mony,
    ];

    pub fn code(self) -> &'static str {
        match self {
            GazCode::Bper => "BPER",
            GazCode::Iper => "IPER",
            GazCode::Bloc => "BLOC",
            GazCode::Iloc => "ILOC",
            GazCode::Faci => "FACI",
            GazCode::Mont => "MONT",
            GazCode::Days => "DAYS",
            GazCode::Perd => "PERD",
            GazCode::Coun => "COUN",
            GazCode::Mony => "MONY",
        }
    }

    /// File stem of the list inside a gazetteer directory.
    pub fn list_name(self) -> &'static str {
        match self {
            GazCode::Bper => "bperson",
            GazCode::Iper => "iperson",
            GazCode::Bloc => "blocation",
            GazCode::Iloc => "ilocation",
            GazCode::Faci => "facilities",
            GazCode::Mont => "months",
            GazCode::Days => "days",
            GazCode::Perd => "period",
            GazCode::Coun => "count_expr",
            GazCode::Mony => "monetary",
        }
    }

    pub fn from_code(code: &str) -> Option<GazCode> {
        GazCode::ALL.into_iter().find(|g| g.code() == code)
    }

    pub fn from_list_name(name: &str) -> Option<GazCode> {
        GazCode::ALL.into_iter().find(|g| g.list_name() == name)
    }

    fn index(self) -> usize {
        self as usize
    }
}

const STRIPPED: [char; 5] = [',', '.', ':', '#', '@'];

/// Lookup form of a token: symbols removed (only when the raw token has at
/// least two characters) and case folded.
pub fn gazetteer_form(token: &str) -> String {
    let stripped: String = if token.chars().count() >= 2 {
        token.chars().filter(|c| !STRIPPED.contains(c)).collect()
    } else {
        token.to_string()
    };
    stripped.to_lowercase()
}

/// Ten case-folded word lists. Immutable once loaded.
#[derive(Debug, Clone, Default)]
pub struct GazetteerSet {
    lists: [HashSet<String>; 10],
}

impl GazetteerSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, code: GazCode, entry: &str) {
        let form = gazetteer_form(entry.trim());
        if !form.is_empty() {
            self.lists[code.index()].insert(form);
        }
    }

    pub fn contains(&self, code: GazCode, token: &str) -> bool {
        self.lists[code.index()].contains(&gazetteer_form(token))
    }

    /// First list, in precedence order, that contains `token`.
    pub fn lookup(&self, token: &str) -> Option<GazCode> {
        let form = gazetteer_form(token);
        if form.is_empty() {
            return None;
        }
        GazCode::ALL
            .into_iter()
            .find(|code| self.lists[code.index()].contains(&form))
    }

    pub fn len(&self, code: GazCode) -> usize {
        self.lists[code.index()].len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.iter().all(HashSet::is_empty)
    }

    /// Adds entries from list-file text: one per line, `#` starts a comment line.
    pub fn extend_from_str(&mut self, code: GazCode, text: &str) {
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            self.insert(code, line);
        }
    }

    /// Loads `<dir>/<list_name>.txt` for each list. Missing files give empty lists.
    pub fn from_dir(dir: &Path) -> io::Result<Self> {
        if !dir.is_dir() {
            return Err(io::Error::new(
                io::ErrorKind::NotFound,
                format!("gazetteer directory {} not found", dir.display()),
            ));
        }
        let mut set = GazetteerSet::new();
        for code in GazCode::ALL {
            let path = dir.join(format!("{}.txt", code.list_name()));
            match fs::read_to_string(&path) {
                Ok(text) => set.extend_from_str(code, &text),
                Err(e) if e.kind() == io::ErrorKind::NotFound => {
                    warn!("gazetteer list {} missing, using an empty list", path.display());
                }
                Err(e) => return Err(e),
            }
            info!("gazetteer {}: {} entries", code.list_name(), set.len(code));
        }
        Ok(set)
    }
}

/// POS tag, or the code of the gazetteer list that matched the token.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum XTag {
    Pos(String),
    Gazetteer(GazCode),
}

impl XTag {
    pub fn as_str(&self) -> &str {
        match self {
            XTag::Pos(p) => p,
            XTag::Gazetteer(g) => g.code(),
        }
    }

    /// Reads back an X-tag string; gazetteer codes are reserved words.
    pub fn parse(s: &str) -> XTag {
        GazCode::from_code(s).map_or_else(|| XTag::Pos(s.to_string()), XTag::Gazetteer)
    }
}

impl fmt::Display for XTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn assign_x_tag(token: &str, pos_tag: &str, gaz: &GazetteerSet) -> XTag {
    match gaz.lookup(token) {
        Some(code) => XTag::Gazetteer(code),
        None => XTag::Pos(pos_tag.to_string()),
    }
}

/// The observation symbol `<word, X-tag, meta-tag>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PseudoToken {
    pub word: String,
    pub x_tag: XTag,
    pub meta_tag: MetaTag,
}

impl fmt::Display for PseudoToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}, {}>", self.word, self.x_tag, self.meta_tag)
    }
}

fn check_field(field: &'static str, value: &str) -> Result<(), FeatureError> {
    if value.is_empty() {
        return Err(FeatureError::EmptyField(field));
    }
    if value
        .chars()
        .any(|c| c == OBSERVATION_SEPARATOR || c == '\t' || c == '\n' || c == '\r')
    {
        return Err(FeatureError::ReservedCharacter {
            field,
            value: value.to_string(),
        });
    }
    Ok(())
}

/// Feature options that are not part of the gazetteer data.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FeatureConfig {
    pub aldt: AldtRule,
}

/// Builds the pseudo-token sequence for one tweet.
pub fn featurize_sentence<W, P>(
    words: &[W],
    pos_tags: &[P],
    gaz: &GazetteerSet,
) -> Result<Vec<PseudoToken>, FeatureError>
where
    W: AsRef<str>,
    P: AsRef<str>,
{
    featurize_sentence_with(words, pos_tags, gaz, FeatureConfig::default())
}

pub fn featurize_sentence_with<W, P>(
    words: &[W],
    pos_tags: &[P],
    gaz: &GazetteerSet,
    config: FeatureConfig,
) -> Result<Vec<PseudoToken>, FeatureError>
where
    W: AsRef<str>,
    P: AsRef<str>,
{
    if words.len() != pos_tags.len() {
        return Err(FeatureError::LengthMismatch {
            tokens: words.len(),
            tags: pos_tags.len(),
        });
    }
    words
        .iter()
        .zip(pos_tags)
        .enumerate()
        .map(|(i, (word, pos))| {
            let (word, pos) = (word.as_ref(), pos.as_ref());
            check_field("word", word)?;
            check_field("POS tag", pos)?;
            if GazCode::from_code(pos).is_some() {
                return Err(FeatureError::ReservedPosTag(pos.to_string()));
            }
            Ok(PseudoToken {
                word: word.to_string(),
                x_tag: assign_x_tag(word, pos, gaz),
                meta_tag: assign_meta_tag_with(word, i, config.aldt),
            })
        })
        .collect()
}
