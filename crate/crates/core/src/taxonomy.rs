//! Hierarchical thesauri (EUROVOC style) reduced to their root concepts.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// Labels and their broader (parent) labels. Acyclic by construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Taxonomy {
    broader: BTreeMap<String, BTreeSet<String>>,
    /// Roots reachable from every label through `broader*`.
    roots_of: BTreeMap<String, BTreeSet<String>>,
}

impl Taxonomy {
    /// Builds a taxonomy from `(child, parent)` edges plus standalone labels.
    pub fn from_edges<I, L>(edges: I, labels: L) -> Result<Self>
    where
        I: IntoIterator<Item = (String, String)>,
        L: IntoIterator<Item = String>,
    {
        let mut broader: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for label in labels {
            broader.entry(label).or_default();
        }
        for (child, parent) in edges {
            broader.entry(parent.clone()).or_default();
            broader.entry(child).or_default().insert(parent);
        }
        let roots_of = resolve_roots(&broader)?;
        Ok(Taxonomy { broader, roots_of })
    }

    /// Parses `child<TAB>parent` lines. A line with a single column declares
    /// a label without parents; `#` starts a comment line.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut edges = Vec::new();
        let mut labels = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            match cols.as_slice() {
                [label] if !label.is_empty() => labels.push(label.to_string()),
                [child, parent] if !child.is_empty() && !parent.is_empty() => {
                    edges.push((child.to_string(), parent.to_string()))
                }
                _ => return Err(Error::parse(lineno, "expected `child<TAB>parent`")),
            }
        }
        Self::from_edges(edges, labels)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(BufReader::new(file))
    }

    /// Imports the `broader` relations of a SKOS-like JSON concept list:
    /// `[{"id": "...", "broader": ["..."]}, ...]`, where `broader` may also
    /// be a single string or absent. Every other relation is ignored.
    pub fn from_skos_json<R: Read>(reader: R) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum OneOrMany {
            One(String),
            Many(Vec<String>),
        }
        #[derive(Deserialize)]
        struct Concept {
            #[serde(alias = "@id", alias = "uri")]
            id: String,
            #[serde(default, alias = "skos:broader")]
            broader: Option<OneOrMany>,
        }
        let concepts: Vec<Concept> = serde_json::from_reader(reader)?;
        let mut edges = Vec::new();
        let mut labels = Vec::new();
        for c in concepts {
            match c.broader {
                Some(OneOrMany::One(p)) => edges.push((c.id.clone(), p)),
                Some(OneOrMany::Many(ps)) => edges.extend(ps.into_iter().map(|p| (c.id.clone(), p))),
                None => {}
            }
            labels.push(c.id);
        }
        Self::from_edges(edges, labels)
    }

    pub fn len(&self) -> usize {
        self.broader.len()
    }

    pub fn is_empty(&self) -> bool {
        self.broader.is_empty()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.broader.contains_key(label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.broader.keys().map(String::as_str)
    }

    pub fn parents(&self, label: &str) -> Option<&BTreeSet<String>> {
        self.broader.get(label)
    }

    /// Labels without broader labels, in lexicographic order.
    pub fn roots(&self) -> Vec<String> {
        self.broader
            .iter()
            .filter(|(_, p)| p.is_empty())
            .map(|(l, _)| l.clone())
            .collect()
    }

    /// Replaces each label by the roots it derives from.
    pub fn reduce_to_roots<'a, I>(&self, labels: I) -> Result<BTreeSet<String>>
    where
        I: IntoIterator<Item = &'a String>,
    {
        let mut out = BTreeSet::new();
        for label in labels {
            let roots = self
                .roots_of
                .get(label)
                .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
            out.extend(roots.iter().cloned());
        }
        Ok(out)
    }
}

/// Loads a taxonomy, reading `.json` files as SKOS and anything else as
/// `child<TAB>parent` lines.
pub fn load_taxonomy(path: impl AsRef<Path>) -> Result<Taxonomy> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e == "json") {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Taxonomy::from_skos_json(BufReader::new(file))
    } else {
        Taxonomy::load(path)
    }
}

/// Topological pass from the roots down; leftovers mean a cycle.
fn resolve_roots(
    broader: &BTreeMap<String, BTreeSet<String>>,
) -> Result<BTreeMap<String, BTreeSet<String>>> {
    let mut narrower: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut pending: BTreeMap<&str, usize> = BTreeMap::new();
    for (child, parents) in broader {
        pending.insert(child, parents.len());
        for p in parents {
            narrower.entry(p).or_default().push(child);
        }
    }
    let mut roots_of: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut queue: VecDeque<&str> = pending
        .iter()
        .filter(|(_, &n)| n == 0)
        .map(|(&l, _)| l)
        .collect();
    while let Some(label) = queue.pop_front() {
        let roots = if broader[label].is_empty() {
            BTreeSet::from([label.to_string()])
        } else {
            broader[label]
                .iter()
                .flat_map(|p| roots_of[p].iter().cloned())
                .collect()
        };
        roots_of.insert(label.to_string(), roots);
        for &child in narrower.get(label).into_iter().flatten() {
            let n = pending.get_mut(child).expect("every label is pending");
            *n -= 1;
            if *n == 0 {
                queue.push_back(child);
            }
        }
    }
    if roots_of.len() < broader.len() {
        let start = broader
            .keys()
            .find(|l| !roots_of.contains_key(*l))
            .expect("an unresolved label exists");
        return Err(Error::Cycle(find_cycle(broader, &roots_of, start)));
    }
    Ok(roots_of)
}

/// Follows unresolved parents from `start` until a label repeats.
fn find_cycle(
    broader: &BTreeMap<String, BTreeSet<String>>,
    resolved: &BTreeMap<String, BTreeSet<String>>,
    start: &str,
) -> Vec<String> {
    let mut path: Vec<String> = Vec::new();
    let mut current = start.to_string();
    loop {
        if let Some(pos) = path.iter().position(|l| *l == current) {
            let mut cycle = path.split_off(pos);
            cycle.push(current);
            return cycle;
        }
        path.push(current.clone());
        // an unresolved label always has an unresolved parent
        current = broader[&current]
            .iter()
            .find(|p| !resolved.contains_key(*p))
            .expect("unresolved label has an unresolved parent")
            .clone();
    }
}
