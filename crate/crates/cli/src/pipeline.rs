//! Steps shared by several commands, and the on-disk artifact layout.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use serde::{Deserialize, Serialize};
use xlingsim_core::corpus::{
    filter_short, ingest_corpus, tokenize_document, Document, FallbackLemmatizer, LemmaOverrides,
    Lemmatizer, TableLemmatizer, TokenList,
};
use xlingsim_core::hashing::{build_topic_hash, to_label_hash, to_synset_hash, ConceptHash, TopicHash};
use xlingsim_core::lexicon::TopicAnnotation;
use xlingsim_core::rng::substream;
use xlingsim_core::taxonomy::Taxonomy;
use xlingsim_core::topics::{infer_with_rng, InferSettings, TopicModel};
use xlingsim_core::vocabulary::to_bow;

use crate::config::RunConfig;
use crate::error::CliError;

/// Which concept space documents are described in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    /// Label-aligned LabeledLDA topics.
    Cat,
    /// Synsets of unsupervised topics.
    Syn,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Cat => "cat",
            Mode::Syn => "syn",
        }
    }
}

pub fn model_path(config: &RunConfig, lang: &str, labeled: bool) -> PathBuf {
    let suffix = if labeled { ".labeled" } else { "" };
    config.workdir.join(format!("model.{lang}{suffix}.json"))
}

pub fn manifest_path(config: &RunConfig, lang: &str, labeled: bool) -> PathBuf {
    let suffix = if labeled { ".labeled" } else { "" };
    config.workdir.join(format!("manifest.{lang}{suffix}.json"))
}

pub fn annotations_path(config: &RunConfig, lang: &str) -> PathBuf {
    config.workdir.join(format!("annotations.{lang}.json"))
}

pub fn tokens_path(config: &RunConfig, lang: &str) -> PathBuf {
    config.workdir.join(format!("tokens.{lang}.jsonl"))
}

pub fn hashes_path(config: &RunConfig, mode: Mode, lang: &str) -> PathBuf {
    config.workdir.join(format!("hashes.{}.{lang}.jsonl", mode.name()))
}

pub fn index_path(config: &RunConfig, mode: Mode) -> PathBuf {
    config.workdir.join(format!("index.{}.json", mode.name()))
}

/// Key of a document inside a multilingual collection.
pub fn doc_key(lang: &str, id: &str) -> String {
    format!("{lang}:{id}")
}

pub fn split_key(key: &str) -> (&str, &str) {
    key.split_once(':').unwrap_or(("", key))
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub struct LanguageTools {
    lemmatizer: Box<dyn Lemmatizer>,
    overrides: Option<LemmaOverrides>,
}

impl LanguageTools {
    pub fn load(config: &RunConfig, lang: &str) -> Result<Self, CliError> {
        let lemmatizer: Box<dyn Lemmatizer> = match config.lemma_table.get(lang) {
            Some(path) => Box::new(TableLemmatizer::load(path)?),
            None => Box::new(FallbackLemmatizer),
        };
        let overrides = config.lemmas.get(lang).map(LemmaOverrides::load).transpose()?;
        Ok(LanguageTools {
            lemmatizer,
            overrides,
        })
    }

    pub fn tokenize(&self, doc: &Document) -> TokenList {
        tokenize_document(doc, self.lemmatizer.as_ref(), self.overrides.as_ref())
    }
}

fn required<'a>(map: &'a std::collections::BTreeMap<String, PathBuf>, key: &str, lang: &str) -> Result<&'a Path, CliError> {
    map.get(lang)
        .map(PathBuf::as_path)
        .ok_or_else(|| CliError::Missing(format!("`{key}.{lang}` is not configured")))
}

pub fn corpus_path<'a>(config: &'a RunConfig, lang: &str) -> Result<&'a Path, CliError> {
    let path = required(&config.corpus, "corpus", lang)?;
    if !path.is_file() {
        return Err(CliError::Missing(format!("corpus file {} does not exist", path.display())));
    }
    Ok(path)
}

pub fn heldout_path<'a>(config: &'a RunConfig, lang: &str) -> Result<&'a Path, CliError> {
    let path = required(&config.heldout, "heldout", lang)?;
    if !path.is_file() {
        return Err(CliError::Missing(format!("held-out file {} does not exist", path.display())));
    }
    Ok(path)
}

pub fn lexicon_path<'a>(config: &'a RunConfig, lang: &str) -> Result<&'a Path, CliError> {
    required(&config.lexicon, "lexicon", lang)
}

/// Reads a corpus and drops documents shorter than `min_chars`.
pub fn load_documents(config: &RunConfig, path: &Path, lang: &str) -> Result<Vec<Document>, CliError> {
    let docs = ingest_corpus(path, lang)?;
    let before = docs.len();
    let docs = filter_short(docs, config.min_chars);
    if docs.len() < before {
        log::info!("{lang}: {} of {before} documents shorter than {} characters", before - docs.len(), config.min_chars);
    }
    Ok(docs)
}

pub fn load_taxonomy(config: &RunConfig) -> Result<Option<Taxonomy>, CliError> {
    Ok(config.taxonomy.as_ref().map(xlingsim_core::taxonomy::load_taxonomy).transpose()?)
}

/// Labels of a document, reduced to taxonomy roots when a taxonomy is
/// configured. Labels unknown to the taxonomy are dropped with a warning.
pub fn effective_labels(doc: &Document, taxonomy: Option<&Taxonomy>) -> BTreeSet<String> {
    match taxonomy {
        None => doc.labels.clone(),
        Some(tax) => {
            let known: Vec<&String> = doc.labels.iter().filter(|l| tax.contains(l)).collect();
            if known.len() < doc.labels.len() {
                warn!("document `{}`: dropping labels unknown to the taxonomy", doc.id);
            }
            tax.reduce_to_roots(known).expect("filtered to known labels")
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AnnotationFile {
    pub format: String,
    pub version: u32,
    pub lang: String,
    pub topn: usize,
    pub topics: Vec<AnnotatedTopic>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AnnotatedTopic {
    pub topic: usize,
    pub top_words: Vec<String>,
    pub synsets: BTreeSet<String>,
}

pub const ANNOTATION_FORMAT: &str = "xlingsim-annotations";

impl AnnotationFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let file: AnnotationFile = serde_json::from_str(&read_file(path)?)?;
        if file.format != ANNOTATION_FORMAT || file.version != 1 {
            return Err(CliError::Config(format!("{}: not an annotation file", path.display())));
        }
        Ok(file)
    }

    pub fn annotations(&self) -> Vec<TopicAnnotation> {
        self.topics
            .iter()
            .map(|t| TopicAnnotation {
                topic: t.topic,
                synsets: t.synsets.clone(),
            })
            .collect()
    }
}

enum Concepts {
    Synsets(Vec<TopicAnnotation>),
    Labels(Vec<String>),
}

/// Text to hash code for one language and mode.
pub struct DocHasher {
    lang: String,
    mode: Mode,
    model: TopicModel,
    concepts: Concepts,
    tools: LanguageTools,
    infer: InferSettings,
    levels: usize,
    cap: usize,
}

impl DocHasher {
    pub fn load(config: &RunConfig, lang: &str, mode: Mode) -> Result<Self, CliError> {
        let labeled = mode == Mode::Cat;
        let path = model_path(config, lang, labeled);
        if !path.is_file() {
            let hint = if labeled { "train --labeled" } else { "train" };
            return Err(CliError::Missing(format!("{} (run `{hint}` first)", path.display())));
        }
        let model = TopicModel::load(&path)?;
        if model.lang() != lang {
            return Err(CliError::Config(format!("{} holds a `{}` model", path.display(), model.lang())));
        }
        let concepts = match mode {
            Mode::Syn => {
                let ann_path = annotations_path(config, lang);
                if !ann_path.is_file() {
                    return Err(CliError::Missing(format!("{} (run `annotate` first)", ann_path.display())));
                }
                let file = AnnotationFile::load(&ann_path)?;
                if file.lang != lang || file.topics.len() != model.num_topics() {
                    return Err(CliError::Config(format!(
                        "{} does not match the `{lang}` model",
                        ann_path.display()
                    )));
                }
                Concepts::Synsets(file.annotations())
            }
            Mode::Cat => Concepts::Labels(
                model
                    .topic_labels()
                    .ok_or_else(|| CliError::Config(format!("{} has no topic labels", path.display())))?
                    .to_vec(),
            ),
        };
        Ok(DocHasher {
            lang: lang.to_string(),
            mode,
            model,
            concepts,
            tools: LanguageTools::load(config, lang)?,
            infer: InferSettings {
                iterations: config.infer_iterations,
                burn_in: config.infer_burn_in,
                seed: config.seed,
            },
            levels: config.levels,
            cap: config.cap,
        })
    }

    /// Infers, groups and translates a document. The random stream depends
    /// only on the seed and the document id.
    pub fn hash(&self, id: &str, tokens: &TokenList) -> (TopicHash, ConceptHash) {
        let bow = to_bow(tokens, self.model.vocab());
        let mut rng = substream(
            self.infer.seed,
            &format!("infer/{}/{}/{id}", self.mode.name(), self.lang),
        );
        let theta = infer_with_rng(&self.model, &bow, &self.infer, &mut rng);
        let topic_hash = build_topic_hash(&theta, self.levels, self.cap);
        let concept_hash = match &self.concepts {
            Concepts::Synsets(ann) => to_synset_hash(&topic_hash, ann),
            Concepts::Labels(labels) => to_label_hash(&topic_hash, labels),
        };
        (topic_hash, concept_hash)
    }

    pub fn hash_document(&self, doc: &Document) -> (TopicHash, ConceptHash) {
        self.hash(&doc.id, &self.tools.tokenize(doc))
    }

    pub fn hash_text(&self, id: &str, text: &str) -> (TopicHash, ConceptHash) {
        let doc = Document::new(id, self.lang.clone(), text);
        self.hash_document(&doc)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HashRecord {
    pub id: String,
    pub lang: String,
    pub topic_hash: serde_json::Value,
    pub hash: serde_json::Value,
}
