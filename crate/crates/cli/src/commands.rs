use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{BufRead, BufReader, BufWriter, Write};

use log::info;
use rand::seq::SliceRandom;
use serde::Serialize;
use xlingsim_core::corpus::{write_lemmas, Document};
use xlingsim_core::evaluation::{bcubed, build_ground_truth, retrieval_report, GoldRule, RelevanceRule};
use xlingsim_core::hashing::{ConceptHash, Space};
use xlingsim_core::lexicon::{annotate_model, SynsetLexicon};
use xlingsim_core::rng::substream;
use xlingsim_core::search::{cluster_assignments, ClusterRule, SimilarityIndex};
use xlingsim_core::topics::{train_labeled_lda, train_lda, SamplerSettings, TopicModel};
use xlingsim_core::vocabulary::{build_vocabulary, to_bow};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::pipeline::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Task {
    Classification,
    Ir,
}

pub fn ingest(config: &RunConfig, langs: &[String]) -> Result<(), CliError> {
    for lang in langs {
        let docs = load_documents(config, corpus_path(config, lang)?, lang)?;
        let tools = LanguageTools::load(config, lang)?;
        let tokens: Vec<_> = docs.iter().map(|d| tools.tokenize(d)).collect();
        let path = tokens_path(config, lang);
        let mut out = Vec::new();
        write_lemmas(&mut out, docs.iter().map(|d| d.id.as_str()).zip(&tokens))?;
        write_file(&path, &String::from_utf8(out).expect("JSON is UTF-8"))?;
        let n_tokens: usize = tokens.iter().map(|t| t.len()).sum();
        println!("{lang}\t{} documents\t{n_tokens} tokens\t{}", docs.len(), path.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct Manifest<'a> {
    lang: &'a str,
    labeled: bool,
    seed: u64,
    config_hash: String,
    config: BTreeMap<&'a str, String>,
    documents: usize,
    vocabulary: usize,
    model_file: String,
    model_sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn train(config: &RunConfig, langs: &[String], labeled: bool) -> Result<(), CliError> {
    // every input is checked before the first model is trained
    let mut inputs = Vec::new();
    for lang in langs {
        inputs.push((lang.clone(), corpus_path(config, lang)?.to_path_buf()));
    }
    let taxonomy = if labeled { load_taxonomy(config)? } else { None };
    let universe: Vec<String> = if !labeled {
        Vec::new()
    } else if let Some(tax) = &taxonomy {
        tax.roots()
    } else {
        // shared across every configured language so topic k means the same label everywhere
        let mut all = BTreeSet::new();
        for lang in &config.languages {
            for doc in load_documents(config, corpus_path(config, lang)?, lang)? {
                all.extend(doc.labels);
            }
        }
        all.into_iter().collect()
    };

    let settings = SamplerSettings {
        alpha: config.alpha,
        beta: config.beta,
        iterations: config.iterations,
        seed: config.seed,
    };
    for (lang, path) in inputs {
        let docs = load_documents(config, &path, &lang)?;
        let tools = LanguageTools::load(config, &lang)?;
        let tokens: Vec<_> = docs.iter().map(|d| tools.tokenize(d)).collect();
        let vocab = build_vocabulary(&tokens, config.max_df, config.min_df)?;
        let bows: Vec<_> = tokens.iter().map(|t| to_bow(t, &vocab)).collect();
        info!("{lang}: {} documents, {} terms", docs.len(), vocab.len());
        let model = if labeled {
            let labels: Vec<BTreeSet<String>> = docs
                .iter()
                .map(|d| effective_labels(d, taxonomy.as_ref()))
                .collect();
            train_labeled_lda(&bows, &labels, &universe, &vocab, &lang, &settings)?
        } else {
            train_lda(&bows, &vocab, &lang, config.num_topics, &settings)?
        };
        let json = model.to_json()?;
        let model_file = model_path(config, &lang, labeled);
        write_file(&model_file, &json)?;

        let canonical = config.canonical_training_text();
        let mut effective = BTreeMap::new();
        for line in canonical.lines() {
            if let Some((k, v)) = line.split_once('=') {
                effective.insert(k, v.to_string());
            }
        }
        if labeled {
            effective.insert("label_universe_size", universe.len().to_string());
        }
        let manifest = Manifest {
            lang: &lang,
            labeled,
            seed: config.seed,
            config_hash: config.training_hash(),
            config: effective,
            documents: docs.len(),
            vocabulary: vocab.len(),
            model_file: model_file
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default(),
            model_sha256: sha256_hex(json.as_bytes()),
        };
        write_file(
            &manifest_path(config, &lang, labeled),
            &(serde_json::to_string_pretty(&manifest)? + "\n"),
        )?;
        println!("{lang}\t{}", model_file.display());
    }
    Ok(())
}

pub fn annotate(config: &RunConfig, langs: &[String]) -> Result<(), CliError> {
    for lang in langs {
        let model_file = model_path(config, lang, false);
        if !model_file.is_file() {
            return Err(CliError::Missing(format!("{} (run `train` first)", model_file.display())));
        }
        let model = TopicModel::load(&model_file)?;
        let lexicon = SynsetLexicon::load(lexicon_path(config, lang)?, lang)?;
        let annotations = annotate_model(&model, &lexicon, config.topn)?;
        let topics: Vec<AnnotatedTopic> = annotations
            .into_iter()
            .map(|a| AnnotatedTopic {
                top_words: model
                    .top_words(a.topic, config.topn)
                    .into_iter()
                    .map(|(w, _)| w)
                    .collect(),
                topic: a.topic,
                synsets: a.synsets,
            })
            .collect();
        let empty = topics.iter().filter(|t| t.synsets.is_empty()).count();
        let file = AnnotationFile {
            format: ANNOTATION_FORMAT.into(),
            version: 1,
            lang: lang.clone(),
            topn: config.topn,
            topics,
        };
        let path = annotations_path(config, lang);
        write_file(&path, &serde_json::to_string_pretty(&file)?)?;
        println!("{lang}\t{} topics\t{empty} without synsets\t{}", file.topics.len(), path.display());
    }
    Ok(())
}

pub fn hash(config: &RunConfig, langs: &[String], mode: Mode, input: Option<&std::path::Path>) -> Result<(), CliError> {
    if input.is_some() && langs.len() != 1 {
        return Err(CliError::Config("--input needs exactly one --lang".into()));
    }
    for lang in langs {
        let hasher = DocHasher::load(config, lang, mode)?;
        let path = match input {
            Some(p) => p,
            None => corpus_path(config, lang)?,
        };
        let docs = load_documents(config, path, lang)?;
        let out_path = hashes_path(config, mode, lang);
        let mut out = String::new();
        for doc in &docs {
            let (topic_hash, concept_hash) = hasher.hash_document(doc);
            let record = HashRecord {
                id: doc.id.clone(),
                lang: lang.clone(),
                topic_hash: topic_hash.to_json_value(),
                hash: concept_hash.to_json_value(),
            };
            out.push_str(&serde_json::to_string(&record)?);
            out.push('\n');
        }
        write_file(&out_path, &out)?;
        println!("{lang}\t{} documents\t{}", docs.len(), out_path.display());
    }
    Ok(())
}

pub fn index(config: &RunConfig, langs: &[String], mode: Mode) -> Result<(), CliError> {
    let space = match mode {
        Mode::Syn => Space::Synset,
        Mode::Cat => Space::Label,
    };
    let mut index = SimilarityIndex::new(space, config.levels)?;
    for lang in langs {
        let path = hashes_path(config, mode, lang);
        let file = std::fs::File::open(&path).map_err(|e| CliError::io(&path, e))?;
        for line in BufReader::new(file).lines() {
            let line = line.map_err(|e| CliError::io(&path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let record: HashRecord = serde_json::from_str(&line)?;
            let hash = ConceptHash::from_json_value(record.hash)?;
            index.add_with_lang(doc_key(&record.lang, &record.id), &record.lang, hash)?;
        }
    }
    let path = index_path(config, mode);
    write_file(&path, &index.to_json()?)?;
    println!("{} documents\t{}", index.len(), path.display());
    Ok(())
}

pub fn query(config: &RunConfig, lang: &str, mode: Mode, k: usize, text: &str) -> Result<(), CliError> {
    if !config.languages.iter().any(|l| l == lang) {
        return Err(CliError::UnknownLanguage(lang.to_string()));
    }
    let index_file = index_path(config, mode);
    if !index_file.is_file() {
        return Err(CliError::Missing(format!("{} (run `index` first)", index_file.display())));
    }
    let index = SimilarityIndex::load(&index_file)?;
    let hasher = DocHasher::load(config, lang, mode)?;
    let (_, probe) = hasher.hash_text("query", text);
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for (rank, hit) in index.query(&probe, k)?.iter().enumerate() {
        let (doc_lang, id) = split_key(&hit.id);
        writeln!(out, "{}\t{}\t{:.6}\t{}", rank + 1, id, hit.distance, doc_lang)
            .map_err(|e| CliError::io(std::path::Path::new("<stdout>"), e))?;
    }
    Ok(())
}

pub fn evaluate(config: &RunConfig, langs: &[String], task: Task, mode: Mode) -> Result<(), CliError> {
    let taxonomy = load_taxonomy(config)?;
    let mut pool: Vec<Document> = Vec::new();
    for lang in langs {
        let train_ids: HashSet<String> = load_documents(config, corpus_path(config, lang)?, lang)?
            .into_iter()
            .map(|d| d.id)
            .collect();
        for mut doc in load_documents(config, heldout_path(config, lang)?, lang)? {
            if train_ids.contains(&doc.id) {
                return Err(CliError::Overlap(format!(
                    "held-out document `{}` ({lang}) was used for training",
                    doc.id
                )));
            }
            doc.labels = effective_labels(&doc, taxonomy.as_ref());
            if !doc.labels.is_empty() {
                doc.id = doc_key(lang, &doc.id);
                pool.push(doc);
            }
        }
    }
    pool.sort_by(|a, b| a.id.cmp(&b.id));
    let mut rng = substream(config.seed, "evaluate/sample");
    pool.shuffle(&mut rng);
    pool.truncate(config.eval_sample);
    pool.sort_by(|a, b| a.id.cmp(&b.id));
    if pool.is_empty() {
        return Err(CliError::Missing("no labeled held-out documents to evaluate".into()));
    }

    let mut hashes: BTreeMap<String, ConceptHash> = BTreeMap::new();
    for lang in langs {
        let hasher = DocHasher::load(config, lang, mode)?;
        for doc in pool.iter().filter(|d| d.lang == *lang) {
            let (_, original) = split_key(&doc.id);
            let plain = Document {
                id: original.to_string(),
                ..doc.clone()
            };
            hashes.insert(doc.id.clone(), hasher.hash_document(&plain).1);
        }
    }

    let relevance = if config.relevance == "same" {
        RelevanceRule::SameLabelSet
    } else {
        RelevanceRule::SharedLabel
    };
    let gold = if config.gold_rule == "overlap" {
        GoldRule::AnyOverlap
    } else {
        GoldRule::ExactLabelSet
    };
    let truth = build_ground_truth(&pool, relevance, gold);

    let report = match task {
        Task::Classification => {
            let rule = if config.cluster_rule == "overlap" {
                ClusterRule::AnyOverlap
            } else {
                ClusterRule::ExactLevel0
            };
            let system = cluster_assignments(hashes.iter().map(|(id, h)| (id.as_str(), h)), rule);
            bcubed(&system, &truth.gold_keys)?.report
        }
        Task::Ir => {
            let space = match mode {
                Mode::Syn => Space::Synset,
                Mode::Cat => Space::Label,
            };
            let mut index = SimilarityIndex::new(space, config.levels)?;
            for (id, h) in &hashes {
                index.add(id.clone(), h.clone())?;
            }
            let mut queries: Vec<&String> = hashes.keys().collect();
            let mut rng = substream(config.seed, "evaluate/queries");
            queries.shuffle(&mut rng);
            queries.truncate(config.eval_queries);
            queries.sort();
            let mut rankings = Vec::new();
            let mut relevant = Vec::new();
            for q in queries {
                let hits = index.query(&hashes[q], 11)?;
                rankings.push(hits.into_iter().map(|h| h.id).filter(|id| id != q).take(10).collect());
                relevant.push(truth.relevant[q].clone());
            }
            retrieval_report(&rankings, &relevant)
        }
    };

    let task_name = match task {
        Task::Classification => "classification",
        Task::Ir => "ir",
    };
    let stem = format!("eval.{task_name}.{}.{}", mode.name(), langs.join("-"));
    write_file(&config.workdir.join(format!("{stem}.tsv")), &report.to_tsv())?;
    write_file(&config.workdir.join(format!("{stem}.json")), &report.to_json()?)?;
    print!("{}", report.to_tsv());
    Ok(())
}
