//! Document ingestion, lemmatization and document-level filters.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum document length, in characters, used by the reference setup.
pub const DEFAULT_MIN_CHARS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub lang: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub labels: BTreeSet<String>,
}

impl Document {
    pub fn new(id: impl Into<String>, lang: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            lang: lang.into(),
            text: text.into(),
            labels: BTreeSet::new(),
        }
    }

    pub fn with_labels<I, S>(mut self, labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.labels = labels.into_iter().map(Into::into).collect();
        self
    }

    /// Length of the raw text in Unicode scalar values.
    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }
}

/// Ordered stream of lemmas fed to the bag-of-words.
///
/// Every token is nonempty, lowercase and free of whitespace.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenList(Vec<String>);

impl TokenList {
    /// Builds a token list, normalizing each token to lowercase and dropping
    /// empty ones. Tokens with internal whitespace are rejected.
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out = Vec::new();
        for token in tokens {
            let token = token.as_ref().trim().to_lowercase();
            if token.is_empty() {
                continue;
            }
            if token.chars().any(char::is_whitespace) {
                return Err(Error::InvalidArgument(format!(
                    "token `{token}` contains whitespace"
                )));
            }
            out.push(token);
        }
        Ok(TokenList(out))
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl<'a> IntoIterator for &'a TokenList {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Deserialize)]
struct DocumentLine {
    id: String,
    lang: Option<String>,
    text: String,
    #[serde(default)]
    labels: Vec<String>,
}

/// Reads a JSON-Lines corpus. Blank lines are skipped; the `lang` field may
/// be omitted, in which case `lang` is assumed.
pub fn read_corpus<R: BufRead>(reader: R, lang: &str) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: DocumentLine =
            serde_json::from_str(&line).map_err(|e| Error::parse(lineno, e.to_string()))?;
        if raw.id.is_empty() {
            return Err(Error::parse(lineno, "empty document id"));
        }
        let doc_lang = raw.lang.unwrap_or_else(|| lang.to_string());
        if doc_lang != lang {
            return Err(Error::parse(
                lineno,
                format!("document language `{doc_lang}` differs from `{lang}`"),
            ));
        }
        if !seen.insert(raw.id.clone()) {
            return Err(Error::DuplicateId(raw.id));
        }
        docs.push(Document {
            id: raw.id,
            lang: doc_lang,
            text: raw.text,
            labels: raw.labels.into_iter().collect(),
        });
    }
    Ok(docs)
}

pub fn ingest_corpus(path: impl AsRef<Path>, lang: &str) -> Result<Vec<Document>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_corpus(BufReader::new(file), lang)
}

pub fn write_corpus<W: Write>(mut writer: W, docs: &[Document]) -> Result<()> {
    for doc in docs {
        serde_json::to_writer(&mut writer, doc)?;
        writer
            .write_all(b"\n")
            .map_err(|e| Error::io("<corpus writer>", e))?;
    }
    Ok(())
}

/// Keeps the documents with at least `min_chars` characters, in order.
pub fn filter_short(corpus: Vec<Document>, min_chars: usize) -> Vec<Document> {
    corpus
        .into_iter()
        .filter(|d| d.char_len() >= min_chars)
        .collect()
}

/// Coarse part of speech reported by a lemmatizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    /// Any other tagged class (determiner, auxiliary, adverb, ...).
    Other,
    /// The lemmatizer has no part-of-speech information for this token.
    Unknown,
}

impl Pos {
    pub fn parse(tag: &str) -> Pos {
        match tag.to_ascii_uppercase().as_str() {
            "NOUN" | "N" | "PROPN" | "NN" | "NNS" | "NNP" | "NNPS" => Pos::Noun,
            "VERB" | "V" | "VB" | "VBD" | "VBG" | "VBN" | "VBP" | "VBZ" => Pos::Verb,
            "ADJ" | "A" | "S" | "JJ" | "JJR" | "JJS" => Pos::Adjective,
            "" | "UNKNOWN" | "X" => Pos::Unknown,
            _ => Pos::Other,
        }
    }

    fn is_content(self) -> bool {
        matches!(self, Pos::Noun | Pos::Verb | Pos::Adjective)
    }
}

/// Maps text to `(lemma, pos)` pairs.
pub trait Lemmatizer {
    fn analyze(&self, text: &str, lang: &str) -> Vec<(String, Pos)>;
}

/// Splits on every non-alphabetic character and lowercases. No stemming,
/// no part of speech.
#[derive(Debug, Clone, Copy, Default)]
pub struct FallbackLemmatizer;

impl Lemmatizer for FallbackLemmatizer {
    fn analyze(&self, text: &str, _lang: &str) -> Vec<(String, Pos)> {
        text.split(|c: char| !c.is_alphabetic())
            .filter(|w| !w.is_empty())
            .map(|w| (w.to_lowercase(), Pos::Unknown))
            .collect()
    }
}

/// Dictionary lemmatizer backed by a `form<TAB>lemma<TAB>pos` table.
///
/// Forms missing from the table come back with [`Pos::Unknown`] and are then
/// handled by the fallback rule in [`tokenize`].
#[derive(Debug, Clone, Default)]
pub struct TableLemmatizer {
    forms: HashMap<String, (String, Pos)>,
}

impl TableLemmatizer {
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut forms = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 || cols[0].is_empty() || cols[1].is_empty() {
                return Err(Error::parse(lineno, "expected `form<TAB>lemma<TAB>pos`"));
            }
            forms.insert(
                cols[0].to_lowercase(),
                (cols[1].to_lowercase(), Pos::parse(cols[2])),
            );
        }
        Ok(TableLemmatizer { forms })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(BufReader::new(file))
    }

    pub fn insert(&mut self, form: &str, lemma: &str, pos: Pos) {
        self.forms
            .insert(form.to_lowercase(), (lemma.to_lowercase(), pos));
    }
}

impl Lemmatizer for TableLemmatizer {
    fn analyze(&self, text: &str, lang: &str) -> Vec<(String, Pos)> {
        FallbackLemmatizer
            .analyze(text, lang)
            .into_iter()
            .map(|(form, _)| match self.forms.get(&form) {
                Some((lemma, pos)) => (lemma.clone(), *pos),
                None => (form, Pos::Unknown),
            })
            .collect()
    }
}

fn keep_fallback(token: &str) -> bool {
    token.chars().count() >= 2 && token.chars().all(char::is_alphabetic)
}

/// Lemmatizes `text`, keeping nouns, verbs and adjectives when the
/// lemmatizer tags them, and alphabetic tokens of two or more characters
/// when it does not.
pub fn tokenize(text: &str, lang: &str, lemmatizer: &dyn Lemmatizer) -> TokenList {
    let tokens = lemmatizer
        .analyze(text, lang)
        .into_iter()
        .filter_map(|(lemma, pos)| {
            let lemma = lemma.trim().to_lowercase();
            let keep = match pos {
                Pos::Unknown => keep_fallback(&lemma),
                p => p.is_content() && !lemma.is_empty(),
            };
            keep.then_some(lemma)
        })
        .flat_map(|lemma| {
            // multi-word lemmas are joined so the token stays whitespace-free
            let joined = lemma.split_whitespace().collect::<Vec<_>>().join("_");
            (!joined.is_empty()).then_some(joined)
        });
    TokenList(tokens.collect())
}

/// Precomputed token streams keyed by document id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaOverrides {
    tokens: HashMap<String, TokenList>,
}

#[derive(Serialize, Deserialize)]
struct LemmaLine {
    id: String,
    tokens: Vec<String>,
}

impl LemmaOverrides {
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut tokens = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let raw: LemmaLine =
                serde_json::from_str(&line).map_err(|e| Error::parse(lineno, e.to_string()))?;
            let list = TokenList::new(&raw.tokens).map_err(|e| Error::parse(lineno, e.to_string()))?;
            if tokens.insert(raw.id.clone(), list).is_some() {
                return Err(Error::DuplicateId(raw.id));
            }
        }
        Ok(LemmaOverrides { tokens })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(BufReader::new(file))
    }

    pub fn get(&self, id: &str) -> Option<&TokenList> {
        self.tokens.get(id)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Writes `(id, tokens)` pairs in the precomputed lemma file format.
pub fn write_lemmas<'a, W, I>(mut writer: W, entries: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = (&'a str, &'a TokenList)>,
{
    for (id, tokens) in entries {
        let line = LemmaLine {
            id: id.to_string(),
            tokens: tokens.0.clone(),
        };
        serde_json::to_writer(&mut writer, &line)?;
        writer
            .write_all(b"\n")
            .map_err(|e| Error::io("<lemma writer>", e))?;
    }
    Ok(())
}

/// Tokenizes a document, preferring a precomputed token stream when present.
pub fn tokenize_document(
    doc: &Document,
    lemmatizer: &dyn Lemmatizer,
    overrides: Option<&LemmaOverrides>,
) -> TokenList {
    overrides
        .and_then(|o| o.get(&doc.id))
        .cloned()
        .unwrap_or_else(|| tokenize(&doc.text, &doc.lang, lemmatizer))
}
