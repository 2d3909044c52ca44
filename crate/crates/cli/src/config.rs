//! Flat `key = value` run configuration.
//!
//! Lines are `key = value`; `#` starts a comment. Per-language keys carry
//! the language as a suffix (`corpus.en`). Relative paths resolve against
//! the directory of the config file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub languages: Vec<String>,
    pub corpus: BTreeMap<String, PathBuf>,
    pub heldout: BTreeMap<String, PathBuf>,
    pub lexicon: BTreeMap<String, PathBuf>,
    pub lemmas: BTreeMap<String, PathBuf>,
    pub lemma_table: BTreeMap<String, PathBuf>,
    pub taxonomy: Option<PathBuf>,
    pub workdir: PathBuf,
    pub num_topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
    pub topn: usize,
    pub levels: usize,
    pub cap: usize,
    pub max_df: f64,
    pub min_df: f64,
    pub min_chars: usize,
    pub infer_iterations: usize,
    pub infer_burn_in: usize,
    pub eval_sample: usize,
    pub eval_queries: usize,
    pub cluster_rule: String,
    pub gold_rule: String,
    pub relevance: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            languages: Vec::new(),
            corpus: BTreeMap::new(),
            heldout: BTreeMap::new(),
            lexicon: BTreeMap::new(),
            lemmas: BTreeMap::new(),
            lemma_table: BTreeMap::new(),
            taxonomy: None,
            workdir: PathBuf::from("."),
            num_topics: 500,
            alpha: 0.1,
            beta: 0.01,
            iterations: 1000,
            seed: 0,
            topn: 5,
            levels: 3,
            cap: 12,
            max_df: 0.90,
            min_df: 0.005,
            min_chars: 100,
            infer_iterations: 100,
            infer_burn_in: 50,
            eval_sample: 1000,
            eval_queries: 100,
            cluster_rule: "exact".into(),
            gold_rule: "exact".into(),
            relevance: "shared".into(),
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("invalid value `{value}` for `{key}`")))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut config = RunConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!("line {}: expected `key = value`", i + 1)));
            };
            config.set(key.trim(), value.trim(), base)?;
        }
        Ok(config)
    }

    /// Applies one setting; `base` anchors relative paths.
    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<(), CliError> {
        let path = || {
            let p = PathBuf::from(value);
            if p.is_absolute() {
                p
            } else {
                base.join(p)
            }
        };
        if let Some((prefix, lang)) = key.split_once('.') {
            let map = match prefix {
                "corpus" => &mut self.corpus,
                "heldout" => &mut self.heldout,
                "lexicon" => &mut self.lexicon,
                "lemmas" => &mut self.lemmas,
                "lemma_table" => &mut self.lemma_table,
                _ => return Err(CliError::Config(format!("unknown key `{key}`"))),
            };
            map.insert(lang.to_string(), path());
            return Ok(());
        }
        match key {
            "languages" => {
                self.languages = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect()
            }
            "taxonomy" => self.taxonomy = Some(path()),
            "workdir" => self.workdir = path(),
            "k" => self.num_topics = parse_num(key, value)?,
            "alpha" => self.alpha = parse_num(key, value)?,
            "beta" => self.beta = parse_num(key, value)?,
            "iterations" => self.iterations = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "topn" => self.topn = parse_num(key, value)?,
            "levels" => self.levels = parse_num(key, value)?,
            "cap" => self.cap = parse_num(key, value)?,
            "max_df" => self.max_df = parse_num(key, value)?,
            "min_df" => self.min_df = parse_num(key, value)?,
            "min_chars" => self.min_chars = parse_num(key, value)?,
            "infer_iterations" => self.infer_iterations = parse_num(key, value)?,
            "infer_burn_in" => self.infer_burn_in = parse_num(key, value)?,
            "eval_sample" => self.eval_sample = parse_num(key, value)?,
            "eval_queries" => self.eval_queries = parse_num(key, value)?,
            "cluster_rule" | "gold_rule" => {
                if !matches!(value, "exact" | "overlap") {
                    return Err(CliError::Config(format!("`{key}` must be exact or overlap")));
                }
                if key == "cluster_rule" {
                    self.cluster_rule = value.into();
                } else {
                    self.gold_rule = value.into();
                }
            }
            "relevance" => {
                if !matches!(value, "shared" | "same") {
                    return Err(CliError::Config("`relevance` must be shared or same".into()));
                }
                self.relevance = value.into();
            }
            _ => return Err(CliError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.languages.is_empty() {
            return Err(CliError::Config("no languages configured".into()));
        }
        if self.levels == 0 || self.cap < self.levels {
            return Err(CliError::Config("need levels >= 1 and cap >= levels".into()));
        }
        if self.topn == 0 {
            return Err(CliError::Config("topn must be >= 1".into()));
        }
        if self.infer_iterations <= self.infer_burn_in {
            return Err(CliError::Config("infer_iterations must exceed infer_burn_in".into()));
        }
        Ok(())
    }

    /// Languages selected by `--lang`, or all configured ones.
    pub fn select_languages(&self, requested: &[String]) -> Result<Vec<String>, CliError> {
        if requested.is_empty() {
            return Ok(self.languages.clone());
        }
        let mut out = Vec::new();
        for lang in requested.iter().flat_map(|l| l.split(',')).map(str::trim) {
            if !self.languages.iter().any(|l| l == lang) {
                return Err(CliError::UnknownLanguage(lang.to_string()));
            }
            if !out.iter().any(|l| l == lang) {
                out.push(lang.to_string());
            }
        }
        Ok(out)
    }

    /// Settings that influence model training, one `key=value` per line in
    /// a fixed order. Paths are left out so the text is machine independent.
    pub fn canonical_training_text(&self) -> String {
        format!(
            "languages={}\nk={}\nalpha={}\nbeta={}\niterations={}\nseed={}\nmax_df={}\nmin_df={}\nmin_chars={}\n",
            self.languages.join(","),
            self.num_topics,
            self.alpha,
            self.beta,
            self.iterations,
            self.seed,
            self.max_df,
            self.min_df,
            self.min_chars,
        )
    }

    pub fn training_hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_training_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_reference_presets() {
        let c = RunConfig::default();
        assert_eq!(c.num_topics, 500);
        assert_eq!((c.alpha, c.beta), (0.1, 0.01));
        assert_eq!(c.iterations, 1000);
        assert_eq!((c.topn, c.levels), (5, 3));
        assert_eq!((c.max_df, c.min_df), (0.90, 0.005));
        assert_eq!(c.min_chars, 100);
    }

    #[test]
    fn parses_keys_and_paths() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(
            &path,
            "# demo\nlanguages = en, es\ncorpus.en = data/en.jsonl\nk = 20\nseed=7\ntaxonomy=/abs/tax.tsv\n",
        )
        .unwrap();
        let c = RunConfig::load(&path).unwrap();
        assert_eq!(c.languages, ["en", "es"]);
        assert_eq!(c.corpus["en"], dir.path().join("data/en.jsonl"));
        assert_eq!(c.num_topics, 20);
        assert_eq!(c.seed, 7);
        assert_eq!(c.taxonomy.as_deref(), Some(Path::new("/abs/tax.tsv")));
    }

    #[test]
    fn rejects_unknown_keys_and_values() {
        let mut c = RunConfig::default();
        assert!(c.set("bogus", "1", Path::new(".")).is_err());
        assert!(c.set("k", "many", Path::new(".")).is_err());
        assert!(c.set("cluster_rule", "fuzzy", Path::new(".")).is_err());
    }

    #[test]
    fn language_selection() {
        let c = RunConfig {
            languages: vec!["en".into(), "es".into(), "fr".into()],
            ..RunConfig::default()
        };
        assert_eq!(c.select_languages(&[]).unwrap(), ["en", "es", "fr"]);
        assert_eq!(c.select_languages(&["en,fr".into()]).unwrap(), ["en", "fr"]);
        assert!(matches!(c.select_languages(&["de".into()]), Err(CliError::UnknownLanguage(_))));
    }
}
