//! Hierarchical hash codes of documents and their level-wise Jaccard
//! distance.
//!
//! A hash code is an ordered list of `L` sets. Level 0 holds the topics
//! with the highest weight in the document, level 1 the next group, and so
//! on. Groups are separated at the `L - 1` largest drops between
//! consecutive weights, so topics with similar presence share a level:
//!
//! ```text
//! q = [t0=0.28, t1=0.05, t2=0.44, t3=0.23]
//! sorted:  t2 0.44 | t0 0.28  t3 0.23 | t1 0.05
//! drops:        0.16        0.05    0.18
//! levels:  {t2}  {t0, t3}  {t1}
//! ```
//!
//! Replacing every topic by the synsets annotating it turns the code into a
//! language-independent [`ConceptHash`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{SynsetId, TopicAnnotation};
use crate::topics::{TopicDistribution, TopicId};

pub const DEFAULT_LEVELS: usize = 3;
/// Topics considered before grouping; the rest of the simplex is dropped.
pub const DEFAULT_CAP: usize = 12;

/// What the elements of a hash code identify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    /// Topic ids of one language-specific model.
    Topic,
    /// Synset ids shared across languages.
    Synset,
    /// Category labels of a label-aligned (LabeledLDA) model.
    Label,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Topic => "topic",
            Space::Synset => "synset",
            Space::Label => "label",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HashCode<T> {
    space: Space,
    levels: Vec<BTreeSet<T>>,
}

pub type TopicHash = HashCode<TopicId>;
pub type ConceptHash = HashCode<SynsetId>;

impl<T: Ord> HashCode<T> {
    pub fn new(space: Space, levels: Vec<BTreeSet<T>>) -> Self {
        HashCode { space, levels }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn levels(&self) -> &[BTreeSet<T>] {
        &self.levels
    }

    pub fn level(&self, l: usize) -> &BTreeSet<T> {
        &self.levels[l]
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(BTreeSet::is_empty)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &T)> {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(l, set)| set.iter().map(move |e| (l, e)))
    }
}

impl ConceptHash {
    /// Convenience constructor from string slices.
    pub fn from_strs(space: Space, levels: &[&[&str]]) -> Self {
        HashCode::new(
            space,
            levels
                .iter()
                .map(|lvl| lvl.iter().map(|s| s.to_string()).collect())
                .collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct HashJson {
    space: Space,
    levels: Vec<Vec<String>>,
}

impl<T: Ord + ToString> HashCode<T> {
    /// Canonical JSON: each level sorted lexicographically as strings.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.canonical())?)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.canonical()).expect("hash codes always serialize")
    }

    fn canonical(&self) -> HashJson {
        let levels = self
            .levels
            .iter()
            .map(|set| {
                let mut v: Vec<String> = set.iter().map(ToString::to_string).collect();
                v.sort();
                v
            })
            .collect();
        HashJson {
            space: self.space,
            levels,
        }
    }
}

impl TopicHash {
    pub fn from_json_value(value: serde_json::Value) -> Result<Self> {
        let raw: HashJson = serde_json::from_value(value)?;
        if raw.space != Space::Topic {
            return Err(Error::IncompatibleHash(format!("expected topic space, found {}", raw.space)));
        }
        let levels = raw
            .levels
            .into_iter()
            .map(|lvl| {
                lvl.iter()
                    .map(|s| {
                        s.parse::<TopicId>()
                            .map_err(|_| Error::format("hash", format!("bad topic id `{s}`")))
                    })
                    .collect::<Result<BTreeSet<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HashCode::new(Space::Topic, levels))
    }
}

impl ConceptHash {
    /// Parses a synset- or label-space hash.
    pub fn from_json_value(value: serde_json::Value) -> Result<Self> {
        let raw: HashJson = serde_json::from_value(value)?;
        if raw.space == Space::Topic {
            return Err(Error::IncompatibleHash(
                "expected a concept-space hash, found topic space".into(),
            ));
        }
        Ok(HashCode::new(
            raw.space,
            raw.levels.into_iter().map(|l| l.into_iter().collect()).collect(),
        ))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_json_value(serde_json::from_str(s)?)
    }
}

/// Groups the heaviest topics of `theta` into `levels` relevance levels.
///
/// The `cap` heaviest topics are sorted by descending weight (ties by
/// ascending id) and split at the `levels - 1` largest positive drops
/// between neighbours; equal drops split at the earlier position. With
/// fewer positive drops than needed, the trailing levels stay empty.
pub fn build_topic_hash(theta: &TopicDistribution, levels: usize, cap: usize) -> TopicHash {
    assert!(levels >= 1, "at least one level is required");
    assert!(cap >= levels, "cap must be >= the number of levels");
    let weights = theta.weights();
    let mut ranked: Vec<TopicId> = (0..weights.len()).collect();
    ranked.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    ranked.truncate(cap.min(weights.len()));

    let mut drops: Vec<(usize, f64)> = ranked
        .windows(2)
        .enumerate()
        .map(|(i, pair)| (i, weights[pair[0]] - weights[pair[1]]))
        .filter(|&(_, gap)| gap > 0.0)
        .collect();
    drops.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut cuts: Vec<usize> = drops.iter().take(levels - 1).map(|&(i, _)| i).collect();
    cuts.sort_unstable();

    let mut out = vec![BTreeSet::new(); levels];
    let mut level = 0;
    let mut next_cut = cuts.iter().peekable();
    for (pos, &topic) in ranked.iter().enumerate() {
        out[level].insert(topic);
        if next_cut.peek() == Some(&&pos) {
            next_cut.next();
            level += 1;
        }
    }
    HashCode::new(Space::Topic, out)
}

/// Replaces every topic by its synsets; a level becomes the union over its
/// topics. Topics without an annotation contribute nothing.
///
/// Levels are not made disjoint again: two topics on different levels may
/// share synsets.
pub fn to_synset_hash(topic_hash: &TopicHash, annotations: &[TopicAnnotation]) -> ConceptHash {
    let levels = topic_hash
        .levels()
        .iter()
        .map(|topics| {
            topics
                .iter()
                .filter_map(|&k| annotations.get(k))
                .flat_map(|a| a.synsets.iter().cloned())
                .collect()
        })
        .collect();
    HashCode::new(Space::Synset, levels)
}

/// Replaces every topic of a label-aligned model by its category label.
pub fn to_label_hash(topic_hash: &TopicHash, topic_labels: &[String]) -> ConceptHash {
    let levels = topic_hash
        .levels()
        .iter()
        .map(|topics| {
            topics
                .iter()
                .filter_map(|&k| topic_labels.get(k).cloned())
                .collect()
        })
        .collect();
    HashCode::new(Space::Label, levels)
}

/// Jaccard distance of two sets; 0 when both are empty.
pub fn jaccard_distance<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    1.0 - inter as f64 / union as f64
}

/// Sum over levels of the Jaccard distance between corresponding level
/// sets. Lies in `[0, L]`.
pub fn distance<T: Ord>(a: &HashCode<T>, b: &HashCode<T>) -> Result<f64> {
    if a.num_levels() != b.num_levels() {
        return Err(Error::IncompatibleHash(format!(
            "{} levels vs {} levels",
            a.num_levels(),
            b.num_levels()
        )));
    }
    if a.space != b.space {
        return Err(Error::IncompatibleHash(format!("{} space vs {} space", a.space, b.space)));
    }
    Ok(level_distance_sum(a, b))
}

pub(crate) fn level_distance_sum<T: Ord>(a: &HashCode<T>, b: &HashCode<T>) -> f64 {
    a.levels
        .iter()
        .zip(&b.levels)
        .map(|(x, y)| jaccard_distance(x, y))
        .sum()
}
