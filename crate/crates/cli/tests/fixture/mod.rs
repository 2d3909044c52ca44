//! A synthetic bilingual corpus: shared latent concepts, disjoint surface
//! vocabularies, and lexicons mapping every pseudo-word to its concept.
#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use xlingsim_core::rng::substream;

pub const LANGS: [(&str, &str); 2] = [("xa", "zor"), ("xb", "vek")];
const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

pub struct Shape {
    pub concepts: usize,
    pub words_per_concept: usize,
    pub doc_len: usize,
    pub dominant_weight: f64,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            concepts: 20,
            words_per_concept: 8,
            doc_len: 50,
            dominant_weight: 0.7,
        }
    }
}

pub fn word(prefix: &str, concept: usize, j: usize) -> String {
    format!(
        "{prefix}{}{}{}",
        LETTERS[concept / 26] as char,
        LETTERS[concept % 26] as char,
        LETTERS[j] as char
    )
}

pub fn synset(concept: usize) -> String {
    format!("concept{concept:02}.n.01")
}

pub fn label(concept: usize) -> String {
    format!("c{concept:02}")
}

/// One document: its dominant concept and its words.
pub struct Doc {
    pub dominant: usize,
    pub words: Vec<String>,
}

pub fn generate(rng: &mut ChaCha8Rng, shape: &Shape, prefix: &str, n: usize) -> Vec<Doc> {
    // Zipf-like weights inside each concept
    let inner: Vec<f64> = (0..shape.words_per_concept).map(|j| 1.0 / (j + 1) as f64).collect();
    let inner_sum: f64 = inner.iter().sum();
    (0..n)
        .map(|i| {
            let dominant = i % shape.concepts;
            let others = [rng.random_range(0..shape.concepts), rng.random_range(0..shape.concepts)];
            let words = (0..shape.doc_len)
                .map(|_| {
                    let c = if rng.random_bool(shape.dominant_weight) {
                        dominant
                    } else {
                        others[rng.random_range(0..2)]
                    };
                    let mut u = rng.random::<f64>() * inner_sum;
                    let mut j = 0;
                    while j + 1 < inner.len() && u >= inner[j] {
                        u -= inner[j];
                        j += 1;
                    }
                    word(prefix, c, j)
                })
                .collect();
            Doc { dominant, words }
        })
        .collect()
}

fn jsonl(docs: &[Doc], id_prefix: &str, lang: &str) -> String {
    let mut out = String::new();
    for (i, d) in docs.iter().enumerate() {
        let record = serde_json::json!({
            "id": format!("{id_prefix}{i:04}"),
            "lang": lang,
            "text": d.words.join(" "),
            "labels": [label(d.dominant)],
        });
        writeln!(out, "{record}").unwrap();
    }
    out
}

pub fn lexicon(shape: &Shape, prefix: &str) -> String {
    let mut out = String::from("# synset\tlemma\n");
    for c in 0..shape.concepts {
        for j in 0..shape.words_per_concept {
            writeln!(out, "{}\t{}", synset(c), word(prefix, c, j)).unwrap();
        }
    }
    out
}

/// Writes corpora, held-out sets, lexicons and `run.conf` under `dir`.
pub fn write(dir: &Path, train_docs: usize, heldout_docs: usize, extra_config: &str) -> PathBuf {
    let shape = Shape::default();
    let mut rng = substream(2024, "fixture");
    let mut conf = String::from("languages = xa, xb\nworkdir = work\n");
    for (lang, prefix) in LANGS {
        let train = generate(&mut rng, &shape, prefix, train_docs);
        let heldout = generate(&mut rng, &shape, prefix, heldout_docs);
        fs::write(dir.join(format!("{lang}.train.jsonl")), jsonl(&train, "t", lang)).unwrap();
        fs::write(dir.join(format!("{lang}.heldout.jsonl")), jsonl(&heldout, "h", lang)).unwrap();
        fs::write(dir.join(format!("{lang}.lexicon.tsv")), lexicon(&shape, prefix)).unwrap();
        writeln!(conf, "corpus.{lang} = {lang}.train.jsonl").unwrap();
        writeln!(conf, "heldout.{lang} = {lang}.heldout.jsonl").unwrap();
        writeln!(conf, "lexicon.{lang} = {lang}.lexicon.tsv").unwrap();
    }
    conf.push_str(extra_config);
    let path = dir.join("run.conf");
    fs::write(&path, conf).unwrap();
    path
}
