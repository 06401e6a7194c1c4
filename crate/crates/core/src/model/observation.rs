use crate::features::{MetaTag, PseudoToken, XTag};

/// Joins the three fields of an observation key. It cannot occur in any
/// field; featurization rejects fields that contain it.
pub const OBSERVATION_SEPARATOR: char = '\u{241F}';

/// `word␟x_tag␟meta_tag`.
pub fn observation_key(token: &PseudoToken) -> String {
    let mut key = String::with_capacity(token.word.len() + 16);
    key.push_str(&token.word);
    key.push(OBSERVATION_SEPARATOR);
    key.push_str(token.x_tag.as_str());
    key.push(OBSERVATION_SEPARATOR);
    key.push_str(token.meta_tag.code());
    key
}

/// Inverse of [`observation_key`].
pub fn parse_observation_key(key: &str) -> Option<PseudoToken> {
    let mut parts = key.split(OBSERVATION_SEPARATOR);
    let word = parts.next()?;
    let x_tag = parts.next()?;
    let meta = parts.next()?;
    if parts.next().is_some() || word.is_empty() || x_tag.is_empty() {
        return None;
    }
    Some(PseudoToken {
        word: word.to_string(),
        x_tag: XTag::parse(x_tag),
        meta_tag: meta.parse::<MetaTag>().ok()?,
    })
}
