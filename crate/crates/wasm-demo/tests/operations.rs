use serde_json::Value;
use xlingsim_wasm::{bcubed_json, distance_json, topic_hash_json};

#[test]
fn worked_example_hash() {
    let json = topic_hash_json("0.28, 0.05, 0.44, 0.23", 3, 12).unwrap();
    assert_eq!(json, r#"{"space":"topic","levels":[["2"],["0","3"],["1"]]}"#);
}

#[test]
fn unnormalized_scores_are_accepted() {
    let a = topic_hash_json("28 5 44 23", 3, 12).unwrap();
    let b = topic_hash_json("0.28 0.05 0.44 0.23", 3, 12).unwrap();
    assert_eq!(a, b);
}

#[test]
fn bad_input_is_reported() {
    assert!(topic_hash_json("0.5, x", 3, 12).is_err());
    assert!(topic_hash_json("0 0", 3, 12).is_err());
    assert!(topic_hash_json("1 2 3", 3, 2).is_err());
}

#[test]
fn distances() {
    let a = r#"{"space":"synset","levels":[["radio.n.01"],["network.n.01"],[]]}"#;
    let b = r#"{"space":"synset","levels":[["radio.n.01","signal.n.01"],[],[]]}"#;
    assert_eq!(distance_json(a, a).unwrap(), 0.0);
    assert_eq!(distance_json(a, b).unwrap(), 0.5 + 1.0 + 0.0);
    let t = topic_hash_json("0.28, 0.05, 0.44, 0.23", 3, 12).unwrap();
    assert_eq!(distance_json(&t, &t).unwrap(), 0.0);
    assert!(distance_json(a, &t).is_err());
    assert!(distance_json("{", a).is_err());
}

#[test]
fn bcubed_scores() {
    let gold = "a x\nb x\nc y\n";
    let out: Value = serde_json::from_str(&bcubed_json("a 1\nb 1\nc 2\n", gold).unwrap()).unwrap();
    assert_eq!(out["f1"], 1.0);
    let out: Value = serde_json::from_str(&bcubed_json("a 1\nb 1\nc 1\n", gold).unwrap()).unwrap();
    assert_eq!(out["recall"], 1.0);
    assert_eq!(out["precision"].as_f64().unwrap(), (2.0 / 3.0 + 2.0 / 3.0 + 1.0 / 3.0) / 3.0);
    assert_eq!(out["items"].as_array().unwrap().len(), 3);
    assert!(bcubed_json("a 1\n", gold).is_err());
    assert!(bcubed_json("a 1\na 2\n", gold).is_err());
}
