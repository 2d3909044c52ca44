//! Inverted index over concept hash codes with exact ranked retrieval.
//!
//! Candidates come from per-level posting lists. A document outside the
//! candidate set shares no element with the probe on any level, so its
//! distance depends only on which of its levels are empty. Those documents
//! are grouped by emptiness pattern, which lets a query complete the
//! ranking exactly without scanning them one by one.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hashing::{level_distance_sum, ConceptHash, Space};
use crate::lexicon::SynsetId;

pub type DocId = String;

const INDEX_FORMAT: &str = "xlingsim-index";
const INDEX_VERSION: u32 = 1;

/// Key shared by documents without any level-0 concept.
pub const EMPTY_CLUSTER_KEY: &str = "∅";
const KEY_SEPARATOR: &str = "|";

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    hash: ConceptHash,
    lang: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityIndex {
    space: Space,
    num_levels: usize,
    store: BTreeMap<DocId, Entry>,
    /// One inverted list per level.
    postings: Vec<BTreeMap<SynsetId, BTreeSet<DocId>>>,
    /// Documents grouped by the bitmask of their nonempty levels.
    shapes: BTreeMap<u64, BTreeSet<DocId>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hit {
    pub id: DocId,
    pub distance: f64,
}

fn shape_of(hash: &ConceptHash) -> u64 {
    hash.levels()
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_empty())
        .fold(0, |mask, (l, _)| mask | (1 << l))
}

impl SimilarityIndex {
    pub fn new(space: Space, num_levels: usize) -> Result<Self> {
        if space == Space::Topic {
            return Err(Error::IncompatibleHash(
                "topic-space hashes are language specific and cannot be indexed".into(),
            ));
        }
        if num_levels == 0 || num_levels > 64 {
            return Err(Error::InvalidArgument(format!("unsupported level count {num_levels}")));
        }
        Ok(SimilarityIndex {
            space,
            num_levels,
            store: BTreeMap::new(),
            postings: vec![BTreeMap::new(); num_levels],
            shapes: BTreeMap::new(),
        })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn num_levels(&self) -> usize {
        self.num_levels
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.store.contains_key(id)
    }

    pub fn get(&self, id: &str) -> Option<&ConceptHash> {
        self.store.get(id).map(|e| &e.hash)
    }

    pub fn lang(&self, id: &str) -> Option<&str> {
        self.store.get(id).and_then(|e| e.lang.as_deref())
    }

    /// Indexed documents in id order.
    pub fn docs(&self) -> impl Iterator<Item = (&str, &ConceptHash)> {
        self.store.iter().map(|(id, e)| (id.as_str(), &e.hash))
    }

    /// Documents listed under `synset` at `level`.
    pub fn posting(&self, level: usize, synset: &str) -> Option<&BTreeSet<DocId>> {
        self.postings.get(level).and_then(|p| p.get(synset))
    }

    pub fn postings(&self, level: usize) -> impl Iterator<Item = (&str, &BTreeSet<DocId>)> {
        self.postings[level].iter().map(|(s, ids)| (s.as_str(), ids))
    }

    fn check(&self, hash: &ConceptHash) -> Result<()> {
        if hash.space() != self.space || hash.num_levels() != self.num_levels {
            return Err(Error::IncompatibleHash(format!(
                "index holds {}-level {} hashes, got {}-level {}",
                self.num_levels,
                self.space,
                hash.num_levels(),
                hash.space()
            )));
        }
        Ok(())
    }

    pub fn add(&mut self, id: impl Into<DocId>, hash: ConceptHash) -> Result<()> {
        self.insert(id.into(), hash, None)
    }

    pub fn add_with_lang(&mut self, id: impl Into<DocId>, lang: &str, hash: ConceptHash) -> Result<()> {
        self.insert(id.into(), hash, Some(lang.to_string()))
    }

    fn insert(&mut self, id: DocId, hash: ConceptHash, lang: Option<String>) -> Result<()> {
        self.check(&hash)?;
        if self.store.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        for (level, synset) in hash.iter() {
            self.postings[level]
                .entry(synset.clone())
                .or_default()
                .insert(id.clone());
        }
        self.shapes.entry(shape_of(&hash)).or_default().insert(id.clone());
        self.store.insert(id, Entry { hash, lang });
        Ok(())
    }

    /// Removes a document, pruning posting lists that become empty.
    pub fn remove(&mut self, id: &str) -> Option<ConceptHash> {
        let entry = self.store.remove(id)?;
        for (level, synset) in entry.hash.iter() {
            if let Some(ids) = self.postings[level].get_mut(synset) {
                ids.remove(id);
                if ids.is_empty() {
                    self.postings[level].remove(synset);
                }
            }
        }
        let shape = shape_of(&entry.hash);
        if let Some(ids) = self.shapes.get_mut(&shape) {
            ids.remove(id);
            if ids.is_empty() {
                self.shapes.remove(&shape);
            }
        }
        Some(entry.hash)
    }

    /// The `k` nearest documents to `probe`, by ascending distance and then
    /// ascending id. Exact: equals a full scan truncated to `k`.
    pub fn query(&self, probe: &ConceptHash, k: usize) -> Result<Vec<Hit>> {
        self.check(probe)?;
        if k == 0 || self.store.is_empty() {
            return Ok(Vec::new());
        }
        let mut candidates: BTreeSet<&DocId> = BTreeSet::new();
        for (level, synset) in probe.iter() {
            if let Some(ids) = self.postings[level].get(synset) {
                candidates.extend(ids);
            }
        }
        let mut hits: Vec<Hit> = candidates
            .iter()
            .map(|&id| Hit {
                id: id.clone(),
                distance: level_distance_sum(probe, &self.store[id].hash),
            })
            .collect();

        // non-candidates only disagree, so each level contributes 1 unless
        // both sides are empty there
        let probe_shape = shape_of(probe);
        for (&shape, ids) in &self.shapes {
            let d = (probe_shape | shape).count_ones() as f64;
            hits.extend(
                ids.iter()
                    .filter(|id| !candidates.contains(id))
                    .take(k)
                    .map(|id| Hit {
                        id: id.clone(),
                        distance: d,
                    }),
            );
        }
        hits.sort_by(|a, b| a.distance.total_cmp(&b.distance).then_with(|| a.id.cmp(&b.id)));
        hits.truncate(k);
        Ok(hits)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = IndexFile {
            format: INDEX_FORMAT.into(),
            version: INDEX_VERSION,
            space: self.space,
            levels: self.num_levels,
            docs: self
                .store
                .iter()
                .map(|(id, e)| DocRecord {
                    id: id.clone(),
                    lang: e.lang.clone(),
                    hash: e.hash.to_json_value(),
                })
                .collect(),
            postings: self.postings.clone(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    /// Loads an index, rebuilding the posting lists from the stored hashes
    /// and rejecting the file if they differ from the persisted ones.
    pub fn from_json(s: &str) -> Result<Self> {
        let file: IndexFile = serde_json::from_str(s)?;
        if file.format != INDEX_FORMAT || file.version != INDEX_VERSION {
            return Err(Error::format(
                "index",
                format!("unsupported header {} v{}", file.format, file.version),
            ));
        }
        let mut index = SimilarityIndex::new(file.space, file.levels)?;
        for rec in file.docs {
            let hash = ConceptHash::from_json_value(rec.hash)?;
            index.insert(rec.id, hash, rec.lang)?;
        }
        if index.postings != file.postings {
            return Err(Error::format("index", "posting lists disagree with stored hashes"));
        }
        Ok(index)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let s = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&s)
    }
}

#[derive(Serialize, Deserialize)]
struct DocRecord {
    id: DocId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lang: Option<String>,
    hash: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct IndexFile {
    format: String,
    version: u32,
    space: Space,
    levels: usize,
    docs: Vec<DocRecord>,
    postings: Vec<BTreeMap<SynsetId, BTreeSet<DocId>>>,
}

/// Canonical cluster key: the sorted level-0 concepts.
pub fn cluster_key(hash: &ConceptHash) -> String {
    match hash.levels().first() {
        Some(level0) if !level0.is_empty() => {
            level0.iter().map(String::as_str).collect::<Vec<_>>().join(KEY_SEPARATOR)
        }
        _ => EMPTY_CLUSTER_KEY.to_string(),
    }
}

/// How documents are grouped from their hash codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClusterRule {
    /// Same cluster iff level-0 sets are equal.
    #[default]
    ExactLevel0,
    /// Transitive closure of sharing at least one level-0 concept.
    AnyOverlap,
}

/// Cluster key of every document under `rule`.
pub fn cluster_assignments<'a, I>(docs: I, rule: ClusterRule) -> BTreeMap<DocId, String>
where
    I: IntoIterator<Item = (&'a str, &'a ConceptHash)>,
{
    let docs: Vec<(&str, &ConceptHash)> = docs.into_iter().collect();
    match rule {
        ClusterRule::ExactLevel0 => docs
            .iter()
            .map(|(id, h)| (id.to_string(), cluster_key(h)))
            .collect(),
        ClusterRule::AnyOverlap => {
            let mut uf = UnionFind::new(docs.len());
            let mut first_seen: HashMap<&str, usize> = HashMap::new();
            for (i, (_, h)) in docs.iter().enumerate() {
                if let Some(level0) = h.levels().first() {
                    for s in level0 {
                        match first_seen.get(s.as_str()) {
                            Some(&j) => uf.union(i, j),
                            None => {
                                first_seen.insert(s, i);
                            }
                        }
                    }
                }
            }
            // name each component after its smallest member's key
            let mut names: BTreeMap<usize, String> = BTreeMap::new();
            for (i, (_, h)) in docs.iter().enumerate() {
                if h.levels().first().is_none_or(BTreeSet::is_empty) {
                    continue;
                }
                let root = uf.find(i);
                let key = cluster_key(h);
                names
                    .entry(root)
                    .and_modify(|k| {
                        if key < *k {
                            *k = key.clone();
                        }
                    })
                    .or_insert(key);
            }
            docs.iter()
                .enumerate()
                .map(|(i, (id, _))| {
                    let key = names
                        .get(&uf.find(i))
                        .cloned()
                        .unwrap_or_else(|| EMPTY_CLUSTER_KEY.to_string());
                    (id.to_string(), key)
                })
                .collect()
        }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
