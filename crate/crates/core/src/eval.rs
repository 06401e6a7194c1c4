//! Repair of orphan `I-XXX` runs and entity-level precision/recall/F scoring.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use log::warn;

use crate::corpus::{AnnotationMap, EntitySpan, IobLabel};

/// Replaces every `I-XXX` not continuing a `B-XXX`/`I-XXX` of the same type
/// with `O`. Runs at sentence start or after `O` are the usual case; a run
/// after an entity of a different type is treated the same way.
pub fn repair_orphan_i(labels: &[IobLabel]) -> Vec<IobLabel> {
    let mut out: Vec<IobLabel> = Vec::with_capacity(labels.len());
    for label in labels {
        let repaired = match label {
            IobLabel::Inside(tag) => {
                let continues = out.last().and_then(IobLabel::entity_type) == Some(tag.as_str());
                if continues {
                    label.clone()
                } else {
                    IobLabel::Outside
                }
            }
            _ => label.clone(),
        };
        out.push(repaired);
    }
    out
}

/// Counts and percentages for one entity type (or the overall total).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TypeScore {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
}

fn percent(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

impl TypeScore {
    pub fn precision(&self) -> f64 {
        percent(self.true_positives, self.true_positives + self.false_positives)
    }

    pub fn recall(&self) -> f64 {
        percent(self.true_positives, self.true_positives + self.false_negatives)
    }

    pub fn f_measure(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r > 0.0 {
            2.0 * p * r / (p + r)
        } else {
            0.0
        }
    }

    fn add(&mut self, other: &TypeScore) {
        self.true_positives += other.true_positives;
        self.false_positives += other.false_positives;
        self.false_negatives += other.false_negatives;
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalReport {
    pub per_type: BTreeMap<String, TypeScore>,
    pub overall: TypeScore,
    /// Predicted spans listed more than once; each counted once.
    pub duplicate_predictions: usize,
}

/// How a predicted span is matched against gold spans.
pub trait MatchCriterion {
    /// Identity of a span for matching; two spans match when keys are equal.
    fn key(&self, span: &EntitySpan) -> (String, usize, usize);
}

/// Same type, same start, same length.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactMatch;

impl MatchCriterion for ExactMatch {
    fn key(&self, span: &EntitySpan) -> (String, usize, usize) {
        (span.ne_tag.clone(), span.start_index, span.length)
    }
}

pub fn score(gold: &AnnotationMap, predicted: &AnnotationMap) -> EvalReport {
    score_with(gold, predicted, &ExactMatch)
}

pub fn score_with<M: MatchCriterion>(
    gold: &AnnotationMap,
    predicted: &AnnotationMap,
    criterion: &M,
) -> EvalReport {
    let mut report = EvalReport::default();
    let tweet_ids: BTreeSet<&String> = gold.keys().chain(predicted.keys()).collect();
    for id in tweet_ids {
        let collect = |map: &AnnotationMap, dups: &mut usize| {
            let mut set = BTreeSet::new();
            for span in map.get(id).map(|t| t.spans.as_slice()).unwrap_or_default() {
                if !set.insert(criterion.key(span)) {
                    *dups += 1;
                }
            }
            set
        };
        let mut ignored = 0;
        let gold_set = collect(gold, &mut ignored);
        let pred_set = collect(predicted, &mut report.duplicate_predictions);
        for key in &pred_set {
            let entry = report.per_type.entry(key.0.clone()).or_default();
            if gold_set.contains(key) {
                entry.true_positives += 1;
            } else {
                entry.false_positives += 1;
            }
        }
        for key in gold_set.difference(&pred_set) {
            report.per_type.entry(key.0.clone()).or_default().false_negatives += 1;
        }
    }
    if report.duplicate_predictions > 0 {
        warn!(
            "{} duplicate predicted spans counted once",
            report.duplicate_predictions
        );
    }
    let mut overall = TypeScore::default();
    for s in report.per_type.values() {
        overall.add(s);
    }
    report.overall = overall;
    report
}

pub const OVERALL_NAME: &str = "OVERALL";

impl EvalReport {
    /// `TYPE<TAB>P<TAB>R<TAB>F` per type, then the overall line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let rows = self
            .per_type
            .iter()
            .map(|(k, v)| (k.as_str(), v))
            .chain(std::iter::once((OVERALL_NAME, &self.overall)));
        for (name, s) in rows {
            let _ = writeln!(
                out,
                "{name}\t{:.2}\t{:.2}\t{:.2}",
                s.precision(),
                s.recall(),
                s.f_measure()
            );
        }
        out
    }

    /// Fixed-width table with counts and percentages.
    pub fn to_table(&self) -> String {
        let width = self
            .per_type
            .keys()
            .map(String::len)
            .chain(std::iter::once(OVERALL_NAME.len()))
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>6}  {:>6}  {:>6}  {:>7}  {:>7}  {:>7}",
            "TYPE", "TP", "FP", "FN", "P", "R", "F"
        );
        let rows = self
            .per_type
            .iter()
            .map(|(k, v)| (k.as_str(), v))
            .chain(std::iter::once((OVERALL_NAME, &self.overall)));
        for (name, s) in rows {
            let _ = writeln!(
                out,
                "{:<width$}  {:>6}  {:>6}  {:>6}  {:>7.2}  {:>7.2}  {:>7.2}",
                name,
                s.true_positives,
                s.false_positives,
                s.false_negatives,
                s.precision(),
                s.recall(),
                s.f_measure()
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TweetSpans;

    fn labels(names: &[&str]) -> Vec<IobLabel> {
        names.iter().map(|n| n.parse().unwrap()).collect()
    }

    #[test]
    fn orphan_runs_after_outside() {
        assert_eq!(
            repair_orphan_i(&labels(&["O", "I-LOC", "I-LOC", "O"])),
            labels(&["O", "O", "O", "O"])
        );
        assert_eq!(
            repair_orphan_i(&labels(&["B-LOC", "I-LOC"])),
            labels(&["B-LOC", "I-LOC"])
        );
        assert_eq!(repair_orphan_i(&labels(&["I-PER"])), labels(&["O"]));
    }

    #[test]
    fn orphan_run_after_other_type() {
        assert_eq!(
            repair_orphan_i(&labels(&["B-PER", "I-LOC", "I-LOC", "B-LOC", "I-LOC"])),
            labels(&["B-PER", "O", "O", "B-LOC", "I-LOC"])
        );
    }

    fn annotations(rows: &[(&str, &str, usize, usize)]) -> AnnotationMap {
        let mut map = AnnotationMap::new();
        for &(id, tag, start, length) in rows {
            map.entry(id.to_string())
                .or_insert_with(|| TweetSpans {
                    user_id: "U".into(),
                    spans: vec![],
                })
                .spans
                .push(EntitySpan {
                    ne_tag: tag.into(),
                    raw_string: String::new(),
                    start_index: start,
                    length,
                });
        }
        map
    }

    #[test]
    fn identical_files_score_perfectly() {
        let g = annotations(&[("T1", "PER", 0, 4), ("T2", "LOC", 3, 5)]);
        let r = score(&g, &g);
        assert_eq!(r.overall.precision(), 100.0);
        assert_eq!(r.overall.recall(), 100.0);
        assert_eq!(r.overall.f_measure(), 100.0);
    }

    #[test]
    fn empty_prediction() {
        let g = annotations(&[("T1", "PER", 0, 4)]);
        let r = score(&g, &AnnotationMap::new());
        assert_eq!(
            (r.overall.precision(), r.overall.recall(), r.overall.f_measure()),
            (0.0, 0.0, 0.0)
        );
        assert_eq!(r.overall.false_negatives, 1);
    }

    #[test]
    fn one_hit_one_miss_one_false_alarm() {
        let g = annotations(&[("T1", "PER", 0, 4), ("T1", "LOC", 10, 5)]);
        let p = annotations(&[("T1", "PER", 0, 4), ("T1", "LOC", 11, 5)]);
        let r = score(&g, &p);
        assert_eq!(r.overall.true_positives, 1);
        assert_eq!(r.overall.false_positives, 1);
        assert_eq!(r.overall.false_negatives, 1);
        assert_eq!(r.to_tsv().lines().last().unwrap(), "OVERALL\t50.00\t50.00\t50.00");
        let per = &r.per_type["LOC"];
        assert_eq!((per.false_positives, per.false_negatives), (1, 1));
    }

    #[test]
    fn wrong_type_is_not_a_match() {
        let g = annotations(&[("T1", "PER", 0, 4)]);
        let p = annotations(&[("T1", "LOC", 0, 4)]);
        assert_eq!(score(&g, &p).overall.true_positives, 0);
    }

    #[test]
    fn duplicates_counted_once() {
        let g = annotations(&[("T1", "PER", 0, 4)]);
        let p = annotations(&[("T1", "PER", 0, 4), ("T1", "PER", 0, 4)]);
        let r = score(&g, &p);
        assert_eq!(r.duplicate_predictions, 1);
        assert_eq!(r.overall.precision(), 100.0);
    }

    #[test]
    fn table_rendering() {
        let g = annotations(&[("T1", "PERSON", 0, 4)]);
        let table = score(&g, &g).to_table();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("PERSON "));
        assert!(lines[2].ends_with("100.00   100.00   100.00"));
    }
}
