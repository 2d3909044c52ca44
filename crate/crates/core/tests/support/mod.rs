//! Synthetic data generators and brute-force reference implementations.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use xlingsim_core::hashing::{ConceptHash, HashCode, Space};
use xlingsim_core::vocabulary::BagOfWords;

pub fn dirichlet(rng: &mut ChaCha8Rng, alpha: &[f64]) -> Vec<f64> {
    let mut draws: Vec<f64> = alpha
        .iter()
        .map(|&a| Gamma::new(a, 1.0).unwrap().sample(rng).max(1e-300))
        .collect();
    let sum: f64 = draws.iter().sum();
    draws.iter_mut().for_each(|x| *x /= sum);
    draws
}

pub fn categorical(rng: &mut ChaCha8Rng, p: &[f64]) -> usize {
    let mut u = rng.random::<f64>() * p.iter().sum::<f64>();
    for (i, &x) in p.iter().enumerate() {
        if u < x {
            return i;
        }
        u -= x;
    }
    p.len() - 1
}

/// A corpus drawn from the LDA generative process with known topics.
pub struct Planted {
    pub phi: Vec<Vec<f64>>,
    pub theta: Vec<Vec<f64>>,
    pub docs: Vec<Vec<usize>>,
}

impl Planted {
    pub fn bows(&self) -> Vec<BagOfWords> {
        self.docs.iter().map(|d| BagOfWords::from_term_ids(d.iter().copied())).collect()
    }
}

/// Topic `k` puts most of its mass on its own block of `v / k` words.
pub fn planted_corpus(
    rng: &mut ChaCha8Rng,
    k: usize,
    v: usize,
    n_docs: usize,
    doc_len: usize,
    alpha: f64,
) -> Planted {
    let block = v / k;
    let phi: Vec<Vec<f64>> = (0..k)
        .map(|t| {
            let mut w: Vec<f64> = (0..v).map(|_| 0.02 * rng.random::<f64>()).collect();
            for x in w.iter_mut().skip(t * block).take(block) {
                *x += 0.5 + rng.random::<f64>();
            }
            let s: f64 = w.iter().sum();
            w.into_iter().map(|x| x / s).collect()
        })
        .collect();
    let mut theta = Vec::with_capacity(n_docs);
    let mut docs = Vec::with_capacity(n_docs);
    for _ in 0..n_docs {
        let th = dirichlet(rng, &vec![alpha; k]);
        let doc = (0..doc_len)
            .map(|_| {
                let z = categorical(rng, &th);
                categorical(rng, &phi[z])
            })
            .collect();
        theta.push(th);
        docs.push(doc);
    }
    Planted { phi, theta, docs }
}

pub fn top_n(weights: &[f64], n: usize) -> BTreeSet<usize> {
    let mut idx: Vec<usize> = (0..weights.len()).collect();
    idx.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    idx.into_iter().take(n).collect()
}

/// Greedily pairs true and learned topics by largest top-`n` overlap and
/// returns the mean overlap fraction over the pairs.
pub fn greedy_topic_overlap(truth: &[Vec<f64>], learned: &[Vec<f64>], n: usize) -> f64 {
    let t: Vec<_> = truth.iter().map(|w| top_n(w, n)).collect();
    let l: Vec<_> = learned.iter().map(|w| top_n(w, n)).collect();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for (i, a) in t.iter().enumerate() {
        for (j, b) in l.iter().enumerate() {
            pairs.push((a.intersection(b).count(), i, j));
        }
    }
    pairs.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let (mut used_t, mut used_l) = (BTreeSet::new(), BTreeSet::new());
    let mut total = 0usize;
    for (overlap, i, j) in pairs {
        if !used_t.contains(&i) && !used_l.contains(&j) {
            used_t.insert(i);
            used_l.insert(j);
            total += overlap;
        }
    }
    total as f64 / (t.len() * n) as f64
}

pub fn random_level(rng: &mut ChaCha8Rng, alphabet: usize, max_len: usize) -> BTreeSet<String> {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| format!("s{:02}", rng.random_range(0..alphabet))).collect()
}

pub fn random_hash(rng: &mut ChaCha8Rng, levels: usize, alphabet: usize, max_len: usize) -> ConceptHash {
    HashCode::new(
        Space::Synset,
        (0..levels).map(|_| random_level(rng, alphabet, max_len)).collect(),
    )
}

/// Level-wise Jaccard distance by explicit element counting.
pub fn naive_distance(a: &[BTreeSet<String>], b: &[BTreeSet<String>]) -> f64 {
    let mut total = 0.0;
    for (x, y) in a.iter().zip(b) {
        let xs: Vec<&String> = x.iter().collect();
        let ys: Vec<&String> = y.iter().collect();
        let inter = xs.iter().filter(|e| ys.contains(e)).count();
        let mut union: Vec<&String> = xs.clone();
        for e in &ys {
            if !union.contains(e) {
                union.push(e);
            }
        }
        let d = if union.is_empty() {
            0.0
        } else {
            1.0 - inter as f64 / union.len() as f64
        };
        total += d;
    }
    total
}

pub fn random_partition(rng: &mut ChaCha8Rng, n: usize, max_clusters: usize) -> BTreeMap<String, String> {
    let clusters = rng.random_range(1..=max_clusters);
    (0..n)
        .map(|i| (format!("d{i:04}"), format!("c{}", rng.random_range(0..clusters))))
        .collect()
}

/// B-Cubed by comparing every pair of items. Returns per-item
/// (precision, recall, f1) in key order.
pub fn bcubed_pairwise(system: &BTreeMap<String, String>, gold: &BTreeMap<String, String>) -> Vec<(f64, f64, f64)> {
    let items: Vec<&String> = system.keys().collect();
    items
        .iter()
        .map(|&i| {
            let (mut same_sys, mut same_gold, mut both) = (0usize, 0usize, 0usize);
            for &j in &items {
                let s = system[i] == system[j];
                let g = gold[i] == gold[j];
                same_sys += s as usize;
                same_gold += g as usize;
                both += (s && g) as usize;
            }
            let p = both as f64 / same_sys as f64;
            let r = both as f64 / same_gold as f64;
            let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
            (p, r, f)
        })
        .collect()
}

/// All set partitions of `n` items as restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let next = prefix.iter().max().map_or(0, |m| m + 1);
        for c in 0..=next {
            prefix.push(c);
            grow(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), n, &mut out);
    out
}

/// Full scan ranking by (distance, id), distances from the naive oracle.
pub fn exhaustive_ranking(docs: &[(String, ConceptHash)], probe: &ConceptHash, k: usize) -> Vec<(String, f64)> {
    let mut scored: Vec<(String, f64)> = docs
        .iter()
        .map(|(id, h)| (id.clone(), naive_distance(probe.levels(), h.levels())))
        .collect();
    scored.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    scored.truncate(k);
    scored
}

/// Random DAG: node `i` may only point to nodes with a smaller index.
pub fn random_dag(rng: &mut ChaCha8Rng, n: usize, max_parents: usize) -> Vec<(String, String)> {
    let mut edges = Vec::new();
    for i in 1..n {
        if rng.random_bool(0.1) {
            continue;
        }
        let parents = rng.random_range(1..=max_parents);
        let chosen: BTreeSet<usize> = (0..parents).map(|_| rng.random_range(0..i)).collect();
        for p in chosen {
            edges.push((format!("n{i}"), format!("n{p}")));
        }
    }
    edges
}

/// Nodes without parents reachable from `start` by depth-first search.
pub fn reachable_roots(edges: &[(String, String)], start: &str) -> BTreeSet<String> {
    let mut parents: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (c, p) in edges {
        parents.entry(c).or_default().push(p);
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![start];
    let mut roots = BTreeSet::new();
    while let Some(node) = stack.pop() {
        if !seen.insert(node) {
            continue;
        }
        match parents.get(node) {
            Some(ps) if !ps.is_empty() => stack.extend(ps.iter().copied()),
            _ => {
                roots.insert(node.to_string());
            }
        }
    }
    roots
}

/// Hierarchical grouping by trying every placement of the level
/// boundaries and keeping the one with the largest total drop; ties go
/// to the earliest boundaries. Only meaningful for distinct drops.
pub fn best_boundaries(weights: &[f64], levels: usize, cap: usize) -> Vec<BTreeSet<usize>> {
    let mut ranked: Vec<usize> = (0..weights.len()).collect();
    ranked.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    ranked.truncate(cap.min(weights.len()));
    let gap = |i: usize| weights[ranked[i]] - weights[ranked[i + 1]];
    let positive: Vec<usize> = (0..ranked.len().saturating_sub(1)).filter(|&i| gap(i) > 0.0).collect();
    let cuts_needed = (levels - 1).min(positive.len());

    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut chosen = Vec::new();
    fn search(
        positive: &[usize],
        start: usize,
        need: usize,
        chosen: &mut Vec<usize>,
        gap: &dyn Fn(usize) -> f64,
        best: &mut Option<(f64, Vec<usize>)>,
    ) {
        if chosen.len() == need {
            let total: f64 = chosen.iter().map(|&i| gap(i)).sum();
            if best.as_ref().is_none_or(|(b, _)| total > *b) {
                *best = Some((total, chosen.clone()));
            }
            return;
        }
        for idx in start..positive.len() {
            chosen.push(positive[idx]);
            search(positive, idx + 1, need, chosen, gap, best);
            chosen.pop();
        }
    }
    search(&positive, 0, cuts_needed, &mut chosen, &gap, &mut best);
    let cuts = best.map(|b| b.1).unwrap_or_default();

    let mut out = vec![BTreeSet::new(); levels];
    let mut level = 0;
    for (pos, &t) in ranked.iter().enumerate() {
        out[level].insert(t);
        if cuts.contains(&pos) {
            level += 1;
        }
    }
    out
}
