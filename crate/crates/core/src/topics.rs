//! Collapsed Gibbs sampling for LDA and LabeledLDA, fold-in inference for
//! unseen documents, and topic summaries.
//!
//! Every token carries a topic assignment `z`. A sweep visits the tokens in
//! corpus order, removes the token from the counts, and draws a new topic
//! from the full conditional
//!
//! ```text
//! p(z = k | rest) ∝ (n_dk + α) · (n_kw + β) / (n_k + V·β)
//! ```
//!
//! where `n_dk` counts the document's tokens in topic `k`, `n_kw` counts word
//! `w` in topic `k` over the corpus and `n_k` is the topic total. LabeledLDA
//! runs the same sweep with `k` restricted to the document's labels.
//!
//! Training runs single-threaded and is byte-reproducible for a fixed seed.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use log::warn;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::substream;
use crate::vocabulary::{BagOfWords, TermId, Vocabulary};

pub type TopicId = usize;

const MODEL_FORMAT: &str = "xlingsim-topic-model";
const MODEL_VERSION: u32 = 1;

/// Hyperparameters shared by the LDA and LabeledLDA samplers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerSettings {
    /// Symmetric Dirichlet prior on document-topic proportions, per topic.
    pub alpha: f64,
    /// Symmetric Dirichlet prior on topic-word distributions.
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl SamplerSettings {
    /// Priors and sweep count of the reference configuration.
    pub fn reference(seed: u64) -> Self {
        SamplerSettings {
            alpha: 0.1,
            beta: 0.01,
            iterations: 1000,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidArgument(format!("beta must be > 0, got {}", self.beta)));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidArgument("iterations must be >= 1".into()));
        }
        Ok(())
    }
}

/// Number of topics of the reference configuration.
pub const REFERENCE_NUM_TOPICS: usize = 500;

/// Fold-in schedule for unseen documents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InferSettings {
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl Default for InferSettings {
    fn default() -> Self {
        InferSettings {
            iterations: 100,
            burn_in: 50,
            seed: 0,
        }
    }
}

/// A point on the topic simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TopicDistribution(Vec<f64>);

impl TopicDistribution {
    pub const TOLERANCE: f64 = 1e-9;

    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("empty topic distribution".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidArgument("topic weights must be finite and >= 0".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > Self::TOLERANCE {
            return Err(Error::InvalidArgument(format!("topic weights sum to {sum}, not 1")));
        }
        Ok(TopicDistribution(weights))
    }

    /// Normalizes nonnegative scores onto the simplex.
    pub fn from_scores(scores: Vec<f64>) -> Result<Self> {
        let sum: f64 = scores.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) || scores.iter().any(|s| *s < 0.0) {
            return Err(Error::InvalidArgument("scores must be >= 0 with a positive sum".into()));
        }
        Self::new(scores.into_iter().map(|s| s / sum).collect())
    }

    pub fn uniform(num_topics: usize) -> Self {
        TopicDistribution(vec![1.0 / num_topics as f64; num_topics])
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn num_topics(&self) -> usize {
        self.0.len()
    }

    /// Topic with the highest weight; ties go to the lowest id.
    pub fn argmax(&self) -> TopicId {
        let mut best = 0;
        for (k, &w) in self.0.iter().enumerate() {
            if w > self.0[best] {
                best = k;
            }
        }
        best
    }
}

/// A trained per-language topic model: final-sweep topic-word counts plus
/// everything needed to reproduce or continue the run.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicModel {
    lang: String,
    num_topics: usize,
    settings: SamplerSettings,
    vocab: Vocabulary,
    /// Row-major `num_topics × vocab.len()`.
    topic_word: Vec<u32>,
    topic_totals: Vec<u64>,
    topic_labels: Option<Vec<String>>,
}

impl TopicModel {
    /// Assembles a model from raw counts, validating every invariant.
    pub fn from_counts(
        lang: impl Into<String>,
        vocab: Vocabulary,
        settings: SamplerSettings,
        topic_word: Vec<Vec<u32>>,
        topic_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        settings.validate()?;
        let num_topics = topic_word.len();
        if num_topics < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 topics, got {num_topics}")));
        }
        let v = vocab.len();
        let mut flat = Vec::with_capacity(num_topics * v);
        for row in &topic_word {
            if row.len() != v {
                return Err(Error::format("topic model", "topic row length differs from vocabulary size"));
            }
            flat.extend_from_slice(row);
        }
        if let Some(labels) = &topic_labels {
            if labels.len() != num_topics {
                return Err(Error::format("topic model", "topic label count differs from topic count"));
            }
        }
        let topic_totals = topic_word
            .iter()
            .map(|row| row.iter().map(|&c| u64::from(c)).sum())
            .collect();
        Ok(TopicModel {
            lang: lang.into(),
            num_topics,
            settings,
            vocab,
            topic_word: flat,
            topic_totals,
            topic_labels,
        })
    }

    pub fn lang(&self) -> &str {
        &self.lang
    }

    pub fn num_topics(&self) -> usize {
        self.num_topics
    }

    pub fn alpha(&self) -> f64 {
        self.settings.alpha
    }

    pub fn beta(&self) -> f64 {
        self.settings.beta
    }

    pub fn settings(&self) -> &SamplerSettings {
        &self.settings
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn topic_labels(&self) -> Option<&[String]> {
        self.topic_labels.as_deref()
    }

    pub fn topic_totals(&self) -> &[u64] {
        &self.topic_totals
    }

    pub fn count(&self, topic: TopicId, word: TermId) -> u32 {
        self.topic_word[topic * self.vocab.len() + word]
    }

    pub fn topic_row(&self, topic: TopicId) -> &[u32] {
        let v = self.vocab.len();
        &self.topic_word[topic * v..(topic + 1) * v]
    }

    /// Smoothed `p(word | topic)`.
    pub fn word_probability(&self, topic: TopicId, word: TermId) -> f64 {
        let v = self.vocab.len() as f64;
        (f64::from(self.count(topic, word)) + self.settings.beta)
            / (self.topic_totals[topic] as f64 + v * self.settings.beta)
    }

    /// The `n` most probable words of `topic`, ties broken lexicographically.
    pub fn top_words(&self, topic: TopicId, n: usize) -> Vec<(String, f64)> {
        assert!(topic < self.num_topics, "topic {topic} out of range");
        let row = self.topic_row(topic);
        let mut ids: Vec<TermId> = (0..self.vocab.len()).collect();
        // the smoothing denominator is shared by the whole row, so raw
        // counts order exactly like probabilities
        ids.sort_by(|&a, &b| {
            row[b]
                .cmp(&row[a])
                .then_with(|| self.vocab.term(a).cmp(self.vocab.term(b)))
        });
        ids.into_iter()
            .take(n)
            .map(|w| (self.vocab.term(w).to_string(), self.word_probability(topic, w)))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ModelFile {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            lang: self.lang.clone(),
            num_topics: self.num_topics,
            alpha: self.settings.alpha,
            beta: self.settings.beta,
            seed: self.settings.seed,
            iterations: self.settings.iterations,
            topic_labels: self.topic_labels.clone(),
            vocabulary: self.vocab.clone(),
            topic_totals: self.topic_totals.clone(),
            topic_word: (0..self.num_topics)
                .map(|k| {
                    self.topic_row(k)
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c > 0)
                        .map(|(w, &c)| (w, c))
                        .collect()
                })
                .collect(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    /// Parses a serialized model, rejecting it unless the stored topic
    /// totals equal the recounted topic-word sums.
    pub fn from_json(s: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(s)?;
        if file.format != MODEL_FORMAT || file.version != MODEL_VERSION {
            return Err(Error::format(
                "topic model",
                format!("unsupported header {} v{}", file.format, file.version),
            ));
        }
        if file.topic_word.len() != file.num_topics || file.topic_totals.len() != file.num_topics {
            return Err(Error::format("topic model", "topic count mismatch"));
        }
        let v = file.vocabulary.len();
        let mut rows = Vec::with_capacity(file.num_topics);
        for sparse in &file.topic_word {
            let mut row = vec![0u32; v];
            for &(w, c) in sparse {
                if w >= v {
                    return Err(Error::format("topic model", format!("word id {w} out of range")));
                }
                row[w] = c;
            }
            rows.push(row);
        }
        let settings = SamplerSettings {
            alpha: file.alpha,
            beta: file.beta,
            iterations: file.iterations,
            seed: file.seed,
        };
        let model = TopicModel::from_counts(file.lang, file.vocabulary, settings, rows, file.topic_labels)?;
        if model.topic_totals != file.topic_totals {
            return Err(Error::format(
                "topic model",
                "topic totals do not match topic-word counts",
            ));
        }
        Ok(model)
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
struct ModelFile {
    format: String,
    version: u32,
    lang: String,
    num_topics: usize,
    alpha: f64,
    beta: f64,
    seed: u64,
    iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    topic_labels: Option<Vec<String>>,
    vocabulary: Vocabulary,
    topic_totals: Vec<u64>,
    /// Sparse `(word, count)` pairs per topic.
    topic_word: Vec<Vec<(TermId, u32)>>,
}

/// Collapsed Gibbs sampler state.
///
/// Exposed so callers can run sweeps one at a time and inspect the counts
/// in between; [`train_lda`] and [`train_labeled_lda`] wrap it.
#[derive(Debug, Clone)]
pub struct GibbsSampler {
    num_topics: usize,
    vocab_size: usize,
    alpha: f64,
    beta: f64,
    docs: Vec<Vec<u32>>,
    assignments: Vec<Vec<u32>>,
    /// Per-document admissible topics; `None` means all topics.
    admissible: Option<Vec<Vec<u32>>>,
    topic_word: Vec<u32>,
    topic_totals: Vec<u64>,
    rng: ChaCha8Rng,
    sweeps: usize,
    weights: Vec<f64>,
    doc_topic: Vec<u32>,
}

impl GibbsSampler {
    /// Initializes a sampler with uniformly random assignments.
    ///
    /// `admissible`, when given, holds the allowed topics of each document
    /// (nonempty, each `< num_topics`).
    pub fn new(
        bows: &[BagOfWords],
        vocab_size: usize,
        num_topics: usize,
        alpha: f64,
        beta: f64,
        admissible: Option<Vec<Vec<u32>>>,
        mut rng: ChaCha8Rng,
    ) -> Result<Self> {
        if num_topics < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 topics, got {num_topics}")));
        }
        if let Some(adm) = &admissible {
            if adm.len() != bows.len() {
                return Err(Error::InvalidArgument("one admissible set per document required".into()));
            }
            if adm.iter().any(|a| a.is_empty() || a.iter().any(|&k| k as usize >= num_topics)) {
                return Err(Error::InvalidArgument("admissible topic sets must be nonempty and in range".into()));
            }
        }
        let mut topic_word = vec![0u32; num_topics * vocab_size];
        let mut topic_totals = vec![0u64; num_topics];
        let mut docs = Vec::with_capacity(bows.len());
        let mut assignments = Vec::with_capacity(bows.len());
        for (d, bow) in bows.iter().enumerate() {
            let words: Vec<u32> = bow.tokens().map(|w| w as u32).collect();
            if let Some(&w) = words.iter().find(|&&w| w as usize >= vocab_size) {
                return Err(Error::InvalidArgument(format!("term id {w} outside vocabulary")));
            }
            let z: Vec<u32> = words
                .iter()
                .map(|&w| {
                    let k = match &admissible {
                        Some(adm) => adm[d][rng.random_range(0..adm[d].len())],
                        None => rng.random_range(0..num_topics as u32),
                    };
                    topic_word[k as usize * vocab_size + w as usize] += 1;
                    topic_totals[k as usize] += 1;
                    k
                })
                .collect();
            docs.push(words);
            assignments.push(z);
        }
        Ok(GibbsSampler {
            num_topics,
            vocab_size,
            alpha,
            beta,
            docs,
            assignments,
            admissible,
            topic_word,
            topic_totals,
            rng,
            sweeps: 0,
            weights: vec![0.0; num_topics],
            doc_topic: vec![0; num_topics],
        })
    }

    /// Resamples every token once.
    pub fn sweep(&mut self) {
        let k_all = self.num_topics;
        let v = self.vocab_size;
        let vbeta = v as f64 * self.beta;
        for d in 0..self.docs.len() {
            self.doc_topic.iter_mut().for_each(|c| *c = 0);
            for &k in &self.assignments[d] {
                self.doc_topic[k as usize] += 1;
            }
            let allowed: Option<&[u32]> = self.admissible.as_ref().map(|a| a[d].as_slice());
            for i in 0..self.docs[d].len() {
                let w = self.docs[d][i] as usize;
                let old = self.assignments[d][i] as usize;
                self.doc_topic[old] -= 1;
                self.topic_word[old * v + w] -= 1;
                self.topic_totals[old] -= 1;

                let new = match allowed {
                    Some(topics) => {
                        let mut total = 0.0;
                        for (j, &k) in topics.iter().enumerate() {
                            let k = k as usize;
                            total += (f64::from(self.doc_topic[k]) + self.alpha)
                                * (f64::from(self.topic_word[k * v + w]) + self.beta)
                                / (self.topic_totals[k] as f64 + vbeta);
                            self.weights[j] = total;
                        }
                        let u = self.rng.random::<f64>() * total;
                        let j = pick(&self.weights[..topics.len()], u);
                        topics[j] as usize
                    }
                    None => {
                        let mut total = 0.0;
                        for k in 0..k_all {
                            total += (f64::from(self.doc_topic[k]) + self.alpha)
                                * (f64::from(self.topic_word[k * v + w]) + self.beta)
                                / (self.topic_totals[k] as f64 + vbeta);
                            self.weights[k] = total;
                        }
                        let u = self.rng.random::<f64>() * total;
                        pick(&self.weights, u)
                    }
                };

                self.assignments[d][i] = new as u32;
                self.doc_topic[new] += 1;
                self.topic_word[new * v + w] += 1;
                self.topic_totals[new] += 1;
            }
        }
        self.sweeps += 1;
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn topic_totals(&self) -> &[u64] {
        &self.topic_totals
    }

    pub fn topic_word_counts(&self) -> &[u32] {
        &self.topic_word
    }

    pub fn total_tokens(&self) -> u64 {
        self.docs.iter().map(|d| d.len() as u64).sum()
    }

    /// Current topic of every token, per document.
    pub fn assignments(&self) -> &[Vec<u32>] {
        &self.assignments
    }

    /// Document-topic proportions of the current state, smoothed by alpha.
    pub fn doc_topic_distribution(&self, doc: usize) -> TopicDistribution {
        let mut counts = vec![0u32; self.num_topics];
        for &k in &self.assignments[doc] {
            counts[k as usize] += 1;
        }
        smoothed(&counts, self.alpha)
    }

    fn topic_word_rows(&self) -> Vec<Vec<u32>> {
        self.topic_word
            .chunks(self.vocab_size.max(1))
            .take(self.num_topics)
            .map(<[u32]>::to_vec)
            .collect()
    }
}

/// Index of the first cumulative weight exceeding `u`.
fn pick(cumulative: &[f64], u: f64) -> usize {
    let i = cumulative.partition_point(|&c| c <= u);
    i.min(cumulative.len() - 1)
}

fn smoothed(counts: &[u32], alpha: f64) -> TopicDistribution {
    let n: f64 = counts.iter().map(|&c| f64::from(c)).sum();
    let denom = n + counts.len() as f64 * alpha;
    normalized(counts.iter().map(|&c| (f64::from(c) + alpha) / denom).collect())
}

fn normalized(mut weights: Vec<f64>) -> TopicDistribution {
    let sum: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= sum);
    TopicDistribution(weights)
}

/// Trains an unsupervised LDA model with `num_topics` topics.
///
/// Documents with an empty bag of words are skipped.
pub fn train_lda(
    bows: &[BagOfWords],
    vocab: &Vocabulary,
    lang: &str,
    num_topics: usize,
    settings: &SamplerSettings,
) -> Result<TopicModel> {
    train_lda_with(bows, vocab, lang, num_topics, settings, |_| {})
}

/// [`train_lda`] with a callback invoked after every sweep.
pub fn train_lda_with<F>(
    bows: &[BagOfWords],
    vocab: &Vocabulary,
    lang: &str,
    num_topics: usize,
    settings: &SamplerSettings,
    mut after_sweep: F,
) -> Result<TopicModel>
where
    F: FnMut(&GibbsSampler),
{
    settings.validate()?;
    let kept: Vec<BagOfWords> = non_empty(bows);
    if kept.is_empty() {
        return Err(Error::EmptyCorpus("every bag of words is empty".into()));
    }
    let total: u64 = kept.iter().map(BagOfWords::total).sum();
    if num_topics as u64 > total {
        return Err(Error::InvalidArgument(format!(
            "{num_topics} topics exceed the {total} tokens of the corpus"
        )));
    }
    let rng = substream(settings.seed, &format!("train/lda/{lang}"));
    let mut sampler = GibbsSampler::new(
        &kept,
        vocab.len(),
        num_topics,
        settings.alpha,
        settings.beta,
        None,
        rng,
    )?;
    for _ in 0..settings.iterations {
        sampler.sweep();
        after_sweep(&sampler);
    }
    TopicModel::from_counts(lang, vocab.clone(), *settings, sampler.topic_word_rows(), None)
}

fn non_empty(bows: &[BagOfWords]) -> Vec<BagOfWords> {
    let kept: Vec<BagOfWords> = bows.iter().filter(|b| !b.is_empty()).cloned().collect();
    if kept.len() < bows.len() {
        warn!("skipping {} empty documents", bows.len() - kept.len());
    }
    kept
}

/// Trains LabeledLDA: one topic per entry of `label_universe`, each
/// document restricted to the topics of its own labels.
///
/// Documents without labels or without in-vocabulary tokens are skipped.
pub fn train_labeled_lda(
    bows: &[BagOfWords],
    doc_labels: &[BTreeSet<String>],
    label_universe: &[String],
    vocab: &Vocabulary,
    lang: &str,
    settings: &SamplerSettings,
) -> Result<TopicModel> {
    train_labeled_lda_with(bows, doc_labels, label_universe, vocab, lang, settings, |_| {})
}

pub fn train_labeled_lda_with<F>(
    bows: &[BagOfWords],
    doc_labels: &[BTreeSet<String>],
    label_universe: &[String],
    vocab: &Vocabulary,
    lang: &str,
    settings: &SamplerSettings,
    mut after_sweep: F,
) -> Result<TopicModel>
where
    F: FnMut(&GibbsSampler),
{
    settings.validate()?;
    if bows.len() != doc_labels.len() {
        return Err(Error::InvalidArgument("one label set per document required".into()));
    }
    if label_universe.len() < 2 {
        return Err(Error::InvalidArgument("label universe needs at least 2 labels".into()));
    }
    let topic_of: HashMap<&str, u32> = label_universe
        .iter()
        .enumerate()
        .map(|(k, l)| (l.as_str(), k as u32))
        .collect();
    if topic_of.len() != label_universe.len() {
        return Err(Error::InvalidArgument("label universe contains duplicates".into()));
    }
    let mut kept = Vec::new();
    let mut admissible = Vec::new();
    let mut skipped = 0usize;
    for (bow, labels) in bows.iter().zip(doc_labels) {
        let mut topics = Vec::with_capacity(labels.len());
        for label in labels {
            match topic_of.get(label.as_str()) {
                Some(&k) => topics.push(k),
                None => return Err(Error::UnknownLabel(label.clone())),
            }
        }
        if topics.is_empty() || bow.is_empty() {
            skipped += 1;
            continue;
        }
        topics.sort_unstable();
        kept.push(bow.clone());
        admissible.push(topics);
    }
    if skipped > 0 {
        warn!("skipping {skipped} documents without labels or tokens");
    }
    if kept.is_empty() {
        return Err(Error::EmptyCorpus("no labeled document with tokens".into()));
    }
    let rng = substream(settings.seed, &format!("train/labeled-lda/{lang}"));
    let mut sampler = GibbsSampler::new(
        &kept,
        vocab.len(),
        label_universe.len(),
        settings.alpha,
        settings.beta,
        Some(admissible),
        rng,
    )?;
    for _ in 0..settings.iterations {
        sampler.sweep();
        after_sweep(&sampler);
    }
    TopicModel::from_counts(
        lang,
        vocab.clone(),
        *settings,
        sampler.topic_word_rows(),
        Some(label_universe.to_vec()),
    )
}

/// Fold-in inference with the model's topic-word counts held fixed.
///
/// Returns the document-topic proportions averaged over the sweeps after
/// burn-in. Terms outside the model vocabulary are ignored; a document with
/// no remaining tokens gets the uniform distribution.
pub fn infer(model: &TopicModel, bow: &BagOfWords, settings: &InferSettings) -> TopicDistribution {
    let mut rng = substream(settings.seed, "infer");
    infer_with_rng(model, bow, settings, &mut rng)
}

pub fn infer_with_rng(
    model: &TopicModel,
    bow: &BagOfWords,
    settings: &InferSettings,
    rng: &mut ChaCha8Rng,
) -> TopicDistribution {
    let k_all = model.num_topics();
    let v = model.vocab().len();
    let words: Vec<TermId> = bow.tokens().filter(|&w| w < v).collect();
    if words.is_empty() {
        return TopicDistribution::uniform(k_all);
    }
    let alpha = model.alpha();

    // p(w | k) columns for the distinct words of the document
    let mut columns: HashMap<TermId, Vec<f64>> = HashMap::new();
    for &w in &words {
        columns
            .entry(w)
            .or_insert_with(|| (0..k_all).map(|k| model.word_probability(k, w)).collect());
    }

    let mut doc_topic = vec![0u32; k_all];
    let mut z: Vec<usize> = words
        .iter()
        .map(|_| {
            let k = rng.random_range(0..k_all);
            doc_topic[k] += 1;
            k
        })
        .collect();

    let iterations = settings.iterations.max(settings.burn_in + 1);
    let mut cumulative = vec![0.0; k_all];
    let mut accum = vec![0.0; k_all];
    let denom = words.len() as f64 + k_all as f64 * alpha;
    for sweep in 0..iterations {
        for (i, &w) in words.iter().enumerate() {
            doc_topic[z[i]] -= 1;
            let col = &columns[&w];
            let mut total = 0.0;
            for k in 0..k_all {
                total += (f64::from(doc_topic[k]) + alpha) * col[k];
                cumulative[k] = total;
            }
            let new = pick(&cumulative, rng.random::<f64>() * total);
            z[i] = new;
            doc_topic[new] += 1;
        }
        if sweep >= settings.burn_in {
            for k in 0..k_all {
                accum[k] += (f64::from(doc_topic[k]) + alpha) / denom;
            }
        }
    }
    normalized(accum)
}
