//! Corpus I/O: the raw-tweet and six-column annotation files, whitespace
//! tokenization with character offsets, and conversion between span
//! annotations and IOB label sequences.
//!
//! All offsets are counted in Unicode scalar values, not bytes.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use log::warn;

use crate::error::CorpusError;

/// One line of the raw-text file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTweet {
    pub tweet_id: String,
    pub user_id: String,
    pub text: String,
}

/// A typed entity occurrence inside a tweet, addressed by character offset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntitySpan {
    pub ne_tag: String,
    pub raw_string: String,
    pub start_index: usize,
    pub length: usize,
}

impl EntitySpan {
    pub fn end_index(&self) -> usize {
        self.start_index + self.length
    }
}

impl fmt::Display for EntitySpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}+{}", self.ne_tag, self.start_index, self.length)
    }
}

/// Spans of one tweet together with the tweet's user id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TweetSpans {
    pub user_id: String,
    pub spans: Vec<EntitySpan>,
}

/// Annotation file contents keyed by tweet id.
pub type AnnotationMap = BTreeMap<String, TweetSpans>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub start: usize,
    pub end: usize,
}

/// An IOB label: `O`, `B-XXX` or `I-XXX`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IobLabel {
    Outside,
    Begin(String),
    Inside(String),
}

impl IobLabel {
    /// Entity type of a `B-` or `I-` label.
    pub fn entity_type(&self) -> Option<&str> {
        match self {
            IobLabel::Outside => None,
            IobLabel::Begin(t) | IobLabel::Inside(t) => Some(t),
        }
    }

    pub fn is_outside(&self) -> bool {
        matches!(self, IobLabel::Outside)
    }
}

impl fmt::Display for IobLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IobLabel::Outside => f.write_str("O"),
            IobLabel::Begin(t) => write!(f, "B-{t}"),
            IobLabel::Inside(t) => write!(f, "I-{t}"),
        }
    }
}

impl FromStr for IobLabel {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let typed = |rest: &str| {
            if rest.is_empty() || rest.chars().any(char::is_whitespace) {
                Err(CorpusError::BadLabel(s.to_string()))
            } else {
                Ok(rest.to_string())
            }
        };
        if s == "O" {
            Ok(IobLabel::Outside)
        } else if let Some(rest) = s.strip_prefix("B-") {
            typed(rest).map(IobLabel::Begin)
        } else if let Some(rest) = s.strip_prefix("I-") {
            typed(rest).map(IobLabel::Inside)
        } else {
            Err(CorpusError::BadLabel(s.to_string()))
        }
    }
}

/// Tokens of a tweet paired with one IOB label each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IobSentence {
    tokens: Vec<Token>,
    labels: Vec<IobLabel>,
}

impl IobSentence {
    pub fn new(tokens: Vec<Token>, labels: Vec<IobLabel>) -> Result<Self, CorpusError> {
        if tokens.len() != labels.len() {
            return Err(CorpusError::LengthMismatch {
                tokens: tokens.len(),
                labels: labels.len(),
            });
        }
        Ok(IobSentence { tokens, labels })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn labels(&self) -> &[IobLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn into_parts(self) -> (Vec<Token>, Vec<IobLabel>) {
        (self.tokens, self.labels)
    }
}

/// Counters and warnings collected while aligning annotations to tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub tweets: usize,
    pub spans_seen: usize,
    pub spans_aligned: usize,
    /// Spans that covered no token and were dropped.
    pub spans_dropped: usize,
    /// Spans whose raw string differs from the text at their offsets.
    pub raw_string_mismatches: usize,
    /// Tweet ids present in the annotation file but absent from the raw file.
    pub unknown_tweet_ids: Vec<String>,
    pub warnings: Vec<String>,
}

impl IngestReport {
    fn warn(&mut self, message: String) {
        warn!("{message}");
        self.warnings.push(message);
    }
}

fn strip_cr(line: &str) -> &str {
    line.strip_suffix('\r').unwrap_or(line)
}

/// Parses the raw-text file: one tweet per line, `tweet_id<TAB>user_id<TAB>text`.
///
/// Blank lines are skipped. The text field may itself contain tabs.
pub fn parse_raw_file(input: &str) -> Result<Vec<RawTweet>, CorpusError> {
    let mut seen = HashSet::new();
    let mut tweets = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_cr(line);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.splitn(3, '\t').collect();
        if fields.len() != 3 {
            return Err(CorpusError::FieldCount {
                line: line_no,
                expected: 3,
                found: fields.len(),
            });
        }
        if fields[0].is_empty() {
            return Err(CorpusError::EmptyTweetId { line: line_no });
        }
        if !seen.insert(fields[0].to_string()) {
            return Err(CorpusError::DuplicateTweetId {
                id: fields[0].to_string(),
                line: line_no,
            });
        }
        tweets.push(RawTweet {
            tweet_id: fields[0].to_string(),
            user_id: fields[1].to_string(),
            text: fields[2].to_string(),
        });
    }
    Ok(tweets)
}

fn parse_count(field: &str, line: usize, column: &'static str) -> Result<usize, CorpusError> {
    field.trim().parse().map_err(|_| CorpusError::BadInteger {
        line,
        column,
        value: field.to_string(),
    })
}

/// Parses the six-column annotation file
/// (`tweet_id, user_id, NE_tag, raw_string, start_index, length`).
///
/// Spans are grouped per tweet and sorted by start index.
pub fn parse_annotation_file(input: &str) -> Result<AnnotationMap, CorpusError> {
    let mut map = AnnotationMap::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_cr(line);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 6 {
            return Err(CorpusError::FieldCount {
                line: line_no,
                expected: 6,
                found: fields.len(),
            });
        }
        if fields[0].is_empty() {
            return Err(CorpusError::EmptyTweetId { line: line_no });
        }
        let start_index = parse_count(fields[4], line_no, "start index")?;
        let length = parse_count(fields[5], line_no, "length")?;
        if length == 0 {
            return Err(CorpusError::ZeroLength { line: line_no });
        }
        let entry = map
            .entry(fields[0].to_string())
            .or_insert_with(|| TweetSpans {
                user_id: fields[1].to_string(),
                spans: Vec::new(),
            });
        entry.spans.push(EntitySpan {
            ne_tag: fields[2].to_string(),
            raw_string: fields[3].to_string(),
            start_index,
            length,
        });
    }
    for entry in map.values_mut() {
        sort_spans(&mut entry.spans);
    }
    Ok(map)
}

fn sort_spans(spans: &mut [EntitySpan]) {
    spans.sort_by(|a, b| {
        (a.start_index, a.length, &a.ne_tag).cmp(&(b.start_index, b.length, &b.ne_tag))
    });
}

/// Splits on whitespace; each maximal non-space run becomes a token.
/// Surface strings are kept verbatim, punctuation included.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut current: Option<(usize, String)> = None;
    let mut pos = 0;
    for ch in text.chars() {
        if ch.is_whitespace() {
            if let Some((start, surface)) = current.take() {
                tokens.push(Token {
                    surface,
                    start,
                    end: pos,
                });
            }
        } else {
            current.get_or_insert_with(|| (pos, String::new())).1.push(ch);
        }
        pos += 1;
    }
    if let Some((start, surface)) = current {
        tokens.push(Token {
            surface,
            start,
            end: pos,
        });
    }
    tokens
}

/// Substring by character offsets `[start, end)`.
pub(crate) fn char_slice(text: &str, start: usize, end: usize) -> String {
    text.chars().skip(start).take(end.saturating_sub(start)).collect()
}

/// Labels the tokens of `tweet` from its entity spans.
///
/// The first token overlapping a span gets `B-XXX`, later overlapping tokens
/// get `I-XXX`. Partial overlap counts as membership. A token already claimed
/// by an earlier span stays with it; a span left with no token is dropped and
/// counted in `report`.
pub fn spans_to_iob(
    tweet: &RawTweet,
    spans: &[EntitySpan],
    report: &mut IngestReport,
) -> Result<IobSentence, CorpusError> {
    let text_len = tweet.text.chars().count();
    let mut ordered: Vec<&EntitySpan> = spans.iter().collect();
    ordered.sort_by_key(|s| (s.start_index, s.length));

    for span in &ordered {
        if span.length == 0 || span.end_index() > text_len {
            return Err(CorpusError::SpanOutOfBounds {
                tweet_id: tweet.tweet_id.clone(),
                tag: span.ne_tag.clone(),
                start: span.start_index,
                length: span.length,
                text_len,
            });
        }
    }
    for pair in ordered.windows(2) {
        if pair[1].start_index < pair[0].end_index() {
            return Err(CorpusError::OverlappingSpans {
                tweet_id: tweet.tweet_id.clone(),
                first: pair[0].to_string(),
                second: pair[1].to_string(),
            });
        }
    }

    let tokens = tokenize(&tweet.text);
    let mut labels = vec![IobLabel::Outside; tokens.len()];
    let mut claimed = vec![false; tokens.len()];
    report.spans_seen += ordered.len();

    for span in ordered {
        let actual = char_slice(&tweet.text, span.start_index, span.end_index());
        if actual != span.raw_string {
            report.raw_string_mismatches += 1;
            report.warn(format!(
                "tweet {}: span {} names {:?} but text has {:?}",
                tweet.tweet_id, span, span.raw_string, actual
            ));
        }
        let mut first = true;
        for (i, tok) in tokens.iter().enumerate() {
            let overlaps = tok.start < span.end_index() && tok.end > span.start_index;
            if !overlaps || claimed[i] {
                continue;
            }
            claimed[i] = true;
            labels[i] = if first {
                IobLabel::Begin(span.ne_tag.clone())
            } else {
                IobLabel::Inside(span.ne_tag.clone())
            };
            first = false;
        }
        if first {
            report.spans_dropped += 1;
            report.warn(format!(
                "tweet {}: span {} covers no token, dropped",
                tweet.tweet_id, span
            ));
        } else {
            report.spans_aligned += 1;
        }
    }
    report.tweets += 1;
    IobSentence::new(tokens, labels)
}

/// Collapses each `B-XXX (I-XXX)*` run into one span over `text`.
///
/// Fails on an `I-XXX` not preceded by `B-XXX` or `I-XXX` of the same type.
pub fn iob_to_spans(sentence: &IobSentence, text: &str) -> Result<Vec<EntitySpan>, CorpusError> {
    let mut spans = Vec::new();
    // (type, start, end) of the entity being extended
    let mut open: Option<(&str, usize, usize)> = None;
    let close = |open: &mut Option<(&str, usize, usize)>, spans: &mut Vec<EntitySpan>| {
        if let Some((tag, start, end)) = open.take() {
            spans.push(EntitySpan {
                ne_tag: tag.to_string(),
                raw_string: char_slice(text, start, end),
                start_index: start,
                length: end - start,
            });
        }
    };
    for (i, (tok, label)) in sentence.tokens.iter().zip(&sentence.labels).enumerate() {
        match label {
            IobLabel::Outside => close(&mut open, &mut spans),
            IobLabel::Begin(tag) => {
                close(&mut open, &mut spans);
                open = Some((tag, tok.start, tok.end));
            }
            IobLabel::Inside(tag) => match open.as_mut() {
                Some((open_tag, _, end)) if *open_tag == tag.as_str() => *end = tok.end,
                _ => {
                    return Err(CorpusError::OrphanInside {
                        label: label.to_string(),
                        position: i,
                    })
                }
            },
        }
    }
    close(&mut open, &mut spans);
    Ok(spans)
}

fn write_row<W: Write>(out: &mut W, tweet_id: &str, user_id: &str, span: &EntitySpan) -> io::Result<()> {
    writeln!(
        out,
        "{}\t{}\t{}\t{}\t{}\t{}",
        tweet_id, user_id, span.ne_tag, span.raw_string, span.start_index, span.length
    )
}

/// Writes annotation rows in tweet order, then by start index.
pub fn emit_annotation_file<W: Write>(
    mut out: W,
    tweets: &[RawTweet],
    spans: &BTreeMap<String, Vec<EntitySpan>>,
) -> io::Result<()> {
    for tweet in tweets {
        let Some(tweet_spans) = spans.get(&tweet.tweet_id) else {
            continue;
        };
        let mut sorted = tweet_spans.clone();
        sort_spans(&mut sorted);
        for span in &sorted {
            write_row(&mut out, &tweet.tweet_id, &tweet.user_id, span)?;
        }
    }
    out.flush()
}

/// Writes a parsed annotation map back out, ordered by tweet id then start index.
pub fn emit_annotation_map<W: Write>(mut out: W, map: &AnnotationMap) -> io::Result<()> {
    for (tweet_id, entry) in map {
        let mut sorted = entry.spans.clone();
        sort_spans(&mut sorted);
        for span in &sorted {
            write_row(&mut out, tweet_id, &entry.user_id, span)?;
        }
    }
    out.flush()
}

/// A sentence of the IOB interchange file: surface, POS and label per token.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TaggedSentence {
    pub words: Vec<String>,
    pub pos_tags: Vec<String>,
    pub labels: Vec<IobLabel>,
}

impl TaggedSentence {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Reads the CoNLL-style interchange file: `surface<TAB>POS<TAB>label` per
/// line, blank line between tweets.
pub fn read_iob_file(input: &str) -> Result<Vec<TaggedSentence>, CorpusError> {
    let mut sentences = Vec::new();
    let mut current = TaggedSentence::default();
    for (idx, line) in input.lines().enumerate() {
        let line = strip_cr(line);
        if line.trim().is_empty() {
            if !current.is_empty() {
                sentences.push(std::mem::take(&mut current));
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 || fields[1].is_empty() {
            return Err(CorpusError::FieldCount {
                line: idx + 1,
                expected: 3,
                found: fields.iter().filter(|f| !f.is_empty()).count(),
            });
        }
        current.words.push(fields[0].to_string());
        current.pos_tags.push(fields[1].to_string());
        current.labels.push(fields[2].parse()?);
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    Ok(sentences)
}

pub fn write_iob_file<W: Write>(mut out: W, sentences: &[TaggedSentence]) -> io::Result<()> {
    for sentence in sentences {
        for ((word, pos), label) in sentence
            .words
            .iter()
            .zip(&sentence.pos_tags)
            .zip(&sentence.labels)
        {
            writeln!(out, "{word}\t{pos}\t{label}")?;
        }
        writeln!(out)?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tweet(text: &str) -> RawTweet {
        RawTweet {
            tweet_id: "T1".into(),
            user_id: "U1".into(),
            text: text.into(),
        }
    }

    fn span(tag: &str, raw: &str, start: usize, length: usize) -> EntitySpan {
        EntitySpan {
            ne_tag: tag.into(),
            raw_string: raw.into(),
            start_index: start,
            length,
        }
    }

    fn labels(names: &[&str]) -> Vec<IobLabel> {
        names.iter().map(|n| n.parse().unwrap()).collect()
    }

    #[test]
    fn raw_file_maps_fields() {
        let tweets = parse_raw_file("T1\tU1\tDelhi is big\n").unwrap();
        assert_eq!(tweets, vec![tweet("Delhi is big")]);
        assert!(parse_raw_file("").unwrap().is_empty());
    }

    #[test]
    fn raw_file_errors() {
        assert_eq!(
            parse_raw_file("T1\tU1\tok\nT2\tU2\n").unwrap_err().to_string(),
            "expected 3 fields at line 2, found 2"
        );
        assert!(matches!(
            parse_raw_file("T1\tU1\ta\nT1\tU2\tb\n"),
            Err(CorpusError::DuplicateTweetId { line: 2, .. })
        ));
        assert!(matches!(
            parse_raw_file("\tU1\ta\n"),
            Err(CorpusError::EmptyTweetId { line: 1 })
        ));
    }

    #[test]
    fn annotation_file_rows() {
        let map = parse_annotation_file("T1\tU1\tLOCATION\tDelhi\t0\t5\n").unwrap();
        assert_eq!(map["T1"].user_id, "U1");
        assert_eq!(map["T1"].spans, vec![span("LOCATION", "Delhi", 0, 5)]);
        assert!(parse_annotation_file("").unwrap().is_empty());
    }

    #[test]
    fn annotation_file_errors() {
        assert_eq!(
            parse_annotation_file("T1\tU1\tLOCATION\tDelhi\t0\t0\n").unwrap_err(),
            CorpusError::ZeroLength { line: 1 }
        );
        assert!(matches!(
            parse_annotation_file("T1\tU1\tLOCATION\tDelhi\t0\t-5\n"),
            Err(CorpusError::BadInteger { line: 1, .. })
        ));
        assert!(matches!(
            parse_annotation_file("\n\nT1\tU1\tLOCATION\tDelhi\tx\t5\n"),
            Err(CorpusError::BadInteger { line: 3, .. })
        ));
    }

    #[test]
    fn annotation_spans_sorted_by_start() {
        let map = parse_annotation_file(
            "T1\tU1\tPERSON\tModi\t10\t4\nT1\tU1\tLOCATION\tDelhi\t0\t5\n",
        )
        .unwrap();
        let starts: Vec<usize> = map["T1"].spans.iter().map(|s| s.start_index).collect();
        assert_eq!(starts, vec![0, 10]);
    }

    #[test]
    fn tokenize_offsets() {
        let toks = tokenize("Delhi is  big");
        let got: Vec<(&str, usize, usize)> = toks
            .iter()
            .map(|t| (t.surface.as_str(), t.start, t.end))
            .collect();
        assert_eq!(got, vec![("Delhi", 0, 5), ("is", 6, 8), ("big", 10, 13)]);
        assert!(tokenize("").is_empty());
        let toks = tokenize("#Delhi!");
        assert_eq!(toks.len(), 1);
        assert_eq!((toks[0].start, toks[0].end), (0, 7));
    }

    #[test]
    fn tokenize_counts_characters_not_bytes() {
        let toks = tokenize("café Münich");
        assert_eq!((toks[1].start, toks[1].end), (5, 11));
        assert_eq!(char_slice("café Münich", 5, 11), "Münich");
    }

    #[test]
    fn spans_to_iob_examples() {
        let mut report = IngestReport::default();
        let t = tweet("New Delhi is big");
        let s = spans_to_iob(&t, &[span("LOCATION", "New Delhi", 0, 9)], &mut report).unwrap();
        assert_eq!(s.labels(), labels(&["B-LOCATION", "I-LOCATION", "O", "O"]).as_slice());

        let s = spans_to_iob(&t, &[], &mut report).unwrap();
        assert!(s.labels().iter().all(IobLabel::is_outside));

        let t = tweet("in NewDelhi");
        let s = spans_to_iob(&t, &[span("LOCATION", "NewDelhi", 3, 8)], &mut report).unwrap();
        assert_eq!(s.labels(), labels(&["O", "B-LOCATION"]).as_slice());
        assert_eq!(report.spans_dropped, 0);
        assert_eq!(report.raw_string_mismatches, 0);
    }

    #[test]
    fn partial_overlap_joins_span() {
        let mut report = IngestReport::default();
        let t = tweet("at #Delhi, today");
        let s = spans_to_iob(&t, &[span("LOCATION", "Delhi", 4, 5)], &mut report).unwrap();
        assert_eq!(s.labels(), labels(&["O", "B-LOCATION", "O"]).as_slice());
    }

    #[test]
    fn span_over_whitespace_is_dropped() {
        let mut report = IngestReport::default();
        let t = tweet("a   b");
        let s = spans_to_iob(&t, &[span("PERSON", " ", 2, 1)], &mut report).unwrap();
        assert!(s.labels().iter().all(IobLabel::is_outside));
        assert_eq!(report.spans_dropped, 1);
        assert_eq!(report.warnings.len(), 1);
    }

    #[test]
    fn overlapping_and_out_of_bounds_spans_rejected() {
        let mut report = IngestReport::default();
        let t = tweet("New Delhi");
        let err = spans_to_iob(
            &t,
            &[span("LOCATION", "New Delhi", 0, 9), span("PERSON", "Delhi", 4, 5)],
            &mut report,
        );
        assert!(matches!(err, Err(CorpusError::OverlappingSpans { .. })));
        let err = spans_to_iob(&t, &[span("LOCATION", "Delhi", 4, 10)], &mut report);
        assert!(matches!(err, Err(CorpusError::SpanOutOfBounds { .. })));
    }

    #[test]
    fn raw_string_mismatch_is_reported() {
        let mut report = IngestReport::default();
        let t = tweet("New Delhi");
        spans_to_iob(&t, &[span("LOCATION", "Delhi", 0, 3)], &mut report).unwrap();
        assert_eq!(report.raw_string_mismatches, 1);
    }

    #[test]
    fn iob_to_spans_examples() {
        let text = "New Delhi is big";
        let s = IobSentence::new(tokenize(text), labels(&["B-LOCATION", "I-LOCATION", "O", "O"]))
            .unwrap();
        assert_eq!(
            iob_to_spans(&s, text).unwrap(),
            vec![span("LOCATION", "New Delhi", 0, 9)]
        );

        let s = IobSentence::new(tokenize(text), labels(&["O"; 4])).unwrap();
        assert!(iob_to_spans(&s, text).unwrap().is_empty());

        let text = "Modi Delhi";
        let s = IobSentence::new(tokenize(text), labels(&["B-PERSON", "B-LOCATION"])).unwrap();
        assert_eq!(
            iob_to_spans(&s, text).unwrap(),
            vec![span("PERSON", "Modi", 0, 4), span("LOCATION", "Delhi", 5, 5)]
        );
    }

    #[test]
    fn iob_to_spans_rejects_orphans() {
        let text = "a b";
        let s = IobSentence::new(tokenize(text), labels(&["O", "I-PERSON"])).unwrap();
        assert_eq!(
            iob_to_spans(&s, text).unwrap_err(),
            CorpusError::OrphanInside {
                label: "I-PERSON".into(),
                position: 1
            }
        );
        let s = IobSentence::new(tokenize(text), labels(&["B-LOCATION", "I-PERSON"])).unwrap();
        assert!(iob_to_spans(&s, text).is_err());
    }

    #[test]
    fn sentence_length_checked() {
        assert_eq!(
            IobSentence::new(tokenize("a b"), labels(&["O"])).unwrap_err(),
            CorpusError::LengthMismatch {
                tokens: 2,
                labels: 1
            }
        );
    }

    #[test]
    fn emit_rows() {
        let tweets = vec![tweet("Delhi and Modi")];
        let mut spans = BTreeMap::new();
        let mut out = Vec::new();
        emit_annotation_file(&mut out, &tweets, &spans).unwrap();
        assert!(out.is_empty());

        spans.insert(
            "T1".to_string(),
            vec![span("PERSON", "Modi", 10, 4), span("LOCATION", "Delhi", 0, 5)],
        );
        emit_annotation_file(&mut out, &tweets, &spans).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "T1\tU1\tLOCATION\tDelhi\t0\t5\nT1\tU1\tPERSON\tModi\t10\t4\n"
        );
    }

    #[test]
    fn label_parsing() {
        assert_eq!("O".parse::<IobLabel>().unwrap(), IobLabel::Outside);
        assert_eq!(
            "B-LOC".parse::<IobLabel>().unwrap(),
            IobLabel::Begin("LOC".into())
        );
        for bad in ["", "X-LOC", "B-", "I", "o"] {
            assert!(bad.parse::<IobLabel>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn iob_file_round_trip() {
        let input = "New\tNNP\tB-LOCATION\nDelhi\tNNP\tI-LOCATION\n\nhi\tUH\tO\n\n";
        let sentences = read_iob_file(input).unwrap();
        assert_eq!(sentences.len(), 2);
        assert_eq!(sentences[0].pos_tags, vec!["NNP", "NNP"]);
        let mut out = Vec::new();
        write_iob_file(&mut out, &sentences).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), input);
    }

    #[test]
    fn iob_file_requires_pos_column() {
        assert!(matches!(
            read_iob_file("New\tB-LOCATION\n"),
            Err(CorpusError::FieldCount { line: 1, .. })
        ));
    }
}
