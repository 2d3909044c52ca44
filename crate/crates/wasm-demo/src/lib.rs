//! Browser bindings for a few core operations, driven by `www/index.html`.
//!
//! Each exported function wraps a plain Rust function that returns
//! `Result<_, String>`, so the logic is testable without a browser.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;
use xlingsim_core::evaluation;
use xlingsim_core::hashing::{self, build_topic_hash, ConceptHash, TopicHash};
use xlingsim_core::topics::TopicDistribution;

fn parse_weights(text: &str) -> Result<Vec<f64>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| format!("not a number: `{s}`")))
        .collect()
}

/// Groups a list of topic scores (comma or space separated, normalized
/// here) into a hierarchical topic hash, returned as JSON.
pub fn topic_hash_json(weights: &str, levels: usize, cap: usize) -> Result<String, String> {
    if levels == 0 || cap < levels {
        return Err("need levels >= 1 and cap >= levels".into());
    }
    let theta = TopicDistribution::from_scores(parse_weights(weights)?).map_err(|e| e.to_string())?;
    build_topic_hash(&theta, levels, cap).to_json().map_err(|e| e.to_string())
}

/// Level-wise Jaccard distance between two hashes of the same space.
pub fn distance_json(a: &str, b: &str) -> Result<f64, String> {
    let a: Value = serde_json::from_str(a).map_err(|e| format!("first hash: {e}"))?;
    let b: Value = serde_json::from_str(b).map_err(|e| format!("second hash: {e}"))?;
    let is_topic = |v: &Value| v.get("space").and_then(Value::as_str) == Some("topic");
    let result = if is_topic(&a) && is_topic(&b) {
        let a = TopicHash::from_json_value(a).map_err(|e| e.to_string())?;
        let b = TopicHash::from_json_value(b).map_err(|e| e.to_string())?;
        hashing::distance(&a, &b)
    } else {
        let a = ConceptHash::from_json_value(a).map_err(|e| e.to_string())?;
        let b = ConceptHash::from_json_value(b).map_err(|e| e.to_string())?;
        hashing::distance(&a, &b)
    };
    result.map_err(|e| e.to_string())
}

/// One `item cluster` pair per line.
fn parse_clustering(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        let Some(item) = parts.next() else { continue };
        let cluster = parts
            .next()
            .ok_or_else(|| format!("line {}: expected `item cluster`", i + 1))?;
        if out.insert(item.to_string(), cluster.to_string()).is_some() {
            return Err(format!("line {}: item `{item}` listed twice", i + 1));
        }
    }
    Ok(out)
}

/// B-Cubed precision, recall and F1 of a system clustering against gold.
pub fn bcubed_json(system: &str, gold: &str) -> Result<String, String> {
    let system = parse_clustering(system)?;
    let gold = parse_clustering(gold)?;
    let scores = evaluation::bcubed(&system, &gold).map_err(|e| e.to_string())?;
    let mean = |name: &str| scores.report.row(name).map(|r| r.mean).unwrap_or(0.0);
    let per_item: Vec<Value> = scores
        .per_doc
        .iter()
        .map(|(id, s)| json!({"item": id, "precision": s.precision, "recall": s.recall, "f1": s.f1}))
        .collect();
    Ok(json!({
        "precision": mean("prec"),
        "recall": mean("rec"),
        "f1": mean("f1"),
        "items": per_item,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn topic_hash(weights: &str, levels: usize, cap: usize) -> Result<String, JsValue> {
    topic_hash_json(weights, levels, cap).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn hash_distance(a: &str, b: &str) -> Result<f64, JsValue> {
    distance_json(a, b).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bcubed(system: &str, gold: &str) -> Result<String, JsValue> {
    bcubed_json(system, gold).map_err(|e| JsValue::from_str(&e))
}
