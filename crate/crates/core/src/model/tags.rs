use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::corpus::IobLabel;
use crate::error::ModelError;

/// Index of a tag in a [`TagInventory`]. Labels come first, then the two
/// start-boundary tags and the end-boundary tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TagId(pub(crate) usize);

impl TagId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for TagId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

pub const START1_NAME: &str = "<s1>";
pub const START2_NAME: &str = "<s2>";
pub const END_NAME: &str = "</s>";

/// The IOB labels seen in training (`O` first, then `B-` and `I-` labels by type), plus three reserved
/// boundary tags. Indices never change once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagInventory {
    labels: Vec<IobLabel>,
    index: HashMap<IobLabel, usize>,
}

impl TagInventory {
    pub fn new<I: IntoIterator<Item = IobLabel>>(labels: I) -> Self {
        let labels: Vec<IobLabel> = labels.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        TagInventory { labels, index }
    }

    /// Number of IOB labels, boundary tags excluded.
    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    /// Number of tags including the three boundary tags.
    pub fn num_states(&self) -> usize {
        self.labels.len() + 3
    }

    pub fn labels(&self) -> &[IobLabel] {
        &self.labels
    }

    pub fn label_ids(&self) -> impl Iterator<Item = TagId> {
        (0..self.labels.len()).map(TagId)
    }

    /// Every tag, labels then boundaries.
    pub fn all_ids(&self) -> impl Iterator<Item = TagId> {
        (0..self.num_states()).map(TagId)
    }

    pub fn start1(&self) -> TagId {
        TagId(self.labels.len())
    }

    pub fn start2(&self) -> TagId {
        TagId(self.labels.len() + 1)
    }

    pub fn end(&self) -> TagId {
        TagId(self.labels.len() + 2)
    }

    pub fn is_boundary(&self, tag: TagId) -> bool {
        tag.0 >= self.labels.len()
    }

    pub fn id(&self, label: &IobLabel) -> Option<TagId> {
        self.index.get(label).copied().map(TagId)
    }

    pub fn label(&self, tag: TagId) -> Option<&IobLabel> {
        self.labels.get(tag.0)
    }

    /// Resolves a label or boundary-tag name.
    pub fn parse(&self, name: &str) -> Result<TagId, ModelError> {
        match name {
            START1_NAME => Ok(self.start1()),
            START2_NAME => Ok(self.start2()),
            END_NAME => Ok(self.end()),
            _ => name
                .parse::<IobLabel>()
                .ok()
                .and_then(|l| self.id(&l))
                .ok_or_else(|| ModelError::UnknownTag(name.to_string())),
        }
    }

    pub fn name(&self, tag: TagId) -> String {
        let n = self.labels.len();
        match tag.0 {
            i if i < n => self.labels[i].to_string(),
            i if i == n => START1_NAME.to_string(),
            i if i == n + 1 => START2_NAME.to_string(),
            _ => END_NAME.to_string(),
        }
    }
}
