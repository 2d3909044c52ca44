//! Document-frequency filtered vocabularies and bag-of-words vectors.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::TokenList;
use crate::error::{Error, Result};

/// Terms in more than this fraction of documents are treated as stopwords.
pub const DEFAULT_MAX_DF: f64 = 0.90;
/// Terms in less than this fraction of documents are treated as noise.
pub const DEFAULT_MIN_DF: f64 = 0.005;

pub type TermId = usize;

const VOCAB_FORMAT: &str = "xlingsim-vocabulary";
const VOCAB_VERSION: u32 = 1;

/// Immutable term space shared by a topic model and its bags of words.
///
/// Terms are ordered by descending document frequency, then lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    doc_freq: Vec<f64>,
    index: HashMap<String, TermId>,
}

#[derive(Serialize, Deserialize)]
struct VocabularyFile {
    format: String,
    version: u32,
    terms: Vec<String>,
    doc_freq: Vec<f64>,
}

impl Vocabulary {
    /// Builds a vocabulary from already-ordered terms and their frequencies.
    pub fn from_parts(terms: Vec<String>, doc_freq: Vec<f64>) -> Result<Self> {
        if terms.len() != doc_freq.len() {
            return Err(Error::format(
                "vocabulary",
                format!("{} terms but {} frequencies", terms.len(), doc_freq.len()),
            ));
        }
        let mut index = HashMap::with_capacity(terms.len());
        for (id, term) in terms.iter().enumerate() {
            if term.is_empty() {
                return Err(Error::format("vocabulary", "empty term"));
            }
            if index.insert(term.clone(), id).is_some() {
                return Err(Error::format("vocabulary", format!("duplicate term `{term}`")));
            }
        }
        Ok(Vocabulary {
            terms,
            doc_freq,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term(&self, id: TermId) -> &str {
        &self.terms[id]
    }

    pub fn id(&self, term: &str) -> Option<TermId> {
        self.index.get(term).copied()
    }

    pub fn doc_freq(&self, id: TermId) -> f64 {
        self.doc_freq[id]
    }

    pub fn doc_freqs(&self) -> &[f64] {
        &self.doc_freq
    }

    pub fn to_json(&self) -> Result<String> {
        let file = VocabularyFile {
            format: VOCAB_FORMAT.to_string(),
            version: VOCAB_VERSION,
            terms: self.terms.clone(),
            doc_freq: self.doc_freq.clone(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: VocabularyFile = serde_json::from_str(s)?;
        if file.format != VOCAB_FORMAT || file.version != VOCAB_VERSION {
            return Err(Error::format(
                "vocabulary",
                format!("unsupported header {} v{}", file.format, file.version),
            ));
        }
        Self::from_parts(file.terms, file.doc_freq)
    }
}

impl Serialize for Vocabulary {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VocabularyFile {
            format: VOCAB_FORMAT.to_string(),
            version: VOCAB_VERSION,
            terms: self.terms.clone(),
            doc_freq: self.doc_freq.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vocabulary {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = VocabularyFile::deserialize(deserializer)?;
        if file.format != VOCAB_FORMAT || file.version != VOCAB_VERSION {
            return Err(serde::de::Error::custom(format!(
                "unsupported vocabulary header {} v{}",
                file.format, file.version
            )));
        }
        Vocabulary::from_parts(file.terms, file.doc_freq).map_err(serde::de::Error::custom)
    }
}

/// Keeps every term whose document frequency lies in `[min_df, max_df]`.
///
/// Both bounds are inclusive: only frequencies strictly above `max_df` or
/// strictly below `min_df` are dropped.
pub fn build_vocabulary(corpus: &[TokenList], max_df: f64, min_df: f64) -> Result<Vocabulary> {
    if !(0.0..=1.0).contains(&min_df) || !(0.0..=1.0).contains(&max_df) || min_df > max_df {
        return Err(Error::InvalidArgument(format!(
            "document frequency bounds must satisfy 0 <= min_df <= max_df <= 1 (got {min_df}, {max_df})"
        )));
    }
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus("cannot build a vocabulary".into()));
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for tokens in corpus {
        let unique: HashSet<&str> = tokens.iter().collect();
        for term in unique {
            *counts.entry(term).or_default() += 1;
        }
    }
    let n = corpus.len() as f64;
    let mut kept: Vec<(&str, usize)> = counts
        .into_iter()
        .filter(|&(_, c)| {
            let df = c as f64 / n;
            df >= min_df && df <= max_df
        })
        .collect();
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let terms = kept.iter().map(|(t, _)| t.to_string()).collect();
    let doc_freq = kept.iter().map(|&(_, c)| c as f64 / n).collect();
    Vocabulary::from_parts(terms, doc_freq)
}

/// Sparse term counts of one document.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BagOfWords {
    counts: BTreeMap<TermId, u32>,
}

impl BagOfWords {
    pub fn from_counts(counts: impl IntoIterator<Item = (TermId, u32)>) -> Self {
        BagOfWords {
            counts: counts.into_iter().filter(|&(_, c)| c > 0).collect(),
        }
    }

    pub fn from_term_ids(ids: impl IntoIterator<Item = TermId>) -> Self {
        let mut counts = BTreeMap::new();
        for id in ids {
            *counts.entry(id).or_insert(0) += 1;
        }
        BagOfWords { counts }
    }

    pub fn get(&self, id: TermId) -> u32 {
        self.counts.get(&id).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Number of distinct terms.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().map(|&c| u64::from(c)).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TermId, u32)> + '_ {
        self.counts.iter().map(|(&id, &c)| (id, c))
    }

    /// Token-level expansion, in term id order.
    pub fn tokens(&self) -> impl Iterator<Item = TermId> + '_ {
        self.iter()
            .flat_map(|(id, c)| std::iter::repeat_n(id, c as usize))
    }
}

/// Counts in-vocabulary tokens; everything else is dropped silently.
pub fn to_bow(tokens: &TokenList, vocab: &Vocabulary) -> BagOfWords {
    BagOfWords::from_term_ids(tokens.iter().filter_map(|t| vocab.id(t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tl(words: &[&str]) -> TokenList {
        TokenList::new(words).unwrap()
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(matches!(
            build_vocabulary(&[], DEFAULT_MAX_DF, DEFAULT_MIN_DF),
            Err(Error::EmptyCorpus(_))
        ));
    }

    #[test]
    fn bad_bounds_rejected() {
        let corpus = vec![tl(&["a"])];
        assert!(build_vocabulary(&corpus, 0.2, 0.5).is_err());
        assert!(build_vocabulary(&corpus, 1.5, 0.0).is_err());
    }

    #[test]
    fn half_of_ten_documents() {
        let mut corpus = Vec::new();
        for i in 0..10 {
            if i < 5 {
                corpus.push(tl(&["half", "all"]));
            } else {
                corpus.push(tl(&["all", "other"]));
            }
        }
        let vocab = build_vocabulary(&corpus, DEFAULT_MAX_DF, DEFAULT_MIN_DF).unwrap();
        // "all" is in 100% of documents
        assert_eq!(vocab.terms(), ["half", "other"]);
        assert_eq!(vocab.doc_freq(vocab.id("half").unwrap()), 0.5);
    }

    #[test]
    fn ordering_is_df_then_lexicographic() {
        let corpus = vec![tl(&["b", "c", "a"]), tl(&["b", "a"]), tl(&["z"])];
        let vocab = build_vocabulary(&corpus, 1.0, 0.0).unwrap();
        assert_eq!(vocab.terms(), ["a", "b", "c", "z"]);
    }

    #[test]
    fn bow_counts() {
        let vocab = Vocabulary::from_parts(vec!["a".into(), "b".into()], vec![0.5, 0.5]).unwrap();
        let bow = to_bow(&tl(&["a", "a", "b"]), &vocab);
        assert_eq!(bow.get(0), 2);
        assert_eq!(bow.get(1), 1);
        assert_eq!(bow.total(), 3);

        let only_a = Vocabulary::from_parts(vec!["a".into()], vec![0.5]).unwrap();
        let bow = to_bow(&tl(&["a", "zz", "a"]), &only_a);
        assert_eq!(bow.iter().collect::<Vec<_>>(), [(0, 2)]);

        assert!(to_bow(&tl(&["x", "y"]), &only_a).is_empty());
    }

    #[test]
    fn json_round_trip_rebuilds_index() {
        let corpus = vec![tl(&["b", "c"]), tl(&["b", "a"]), tl(&["c"])];
        let vocab = build_vocabulary(&corpus, 1.0, 0.0).unwrap();
        let back = Vocabulary::from_json(&vocab.to_json().unwrap()).unwrap();
        assert_eq!(vocab, back);
        assert_eq!(back.id("c"), vocab.id("c"));
    }
}
