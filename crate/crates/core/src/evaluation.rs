//! B-Cubed clustering scores, precision@k, and the label-derived ground
//! truth both are measured against.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::search::{DocId, UnionFind};

/// Summary statistics of one metric over documents or queries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub metric: String,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Population standard deviation.
    pub dev: f64,
}

impl MetricRow {
    pub fn from_values(metric: impl Into<String>, values: &[f64]) -> Self {
        let metric = metric.into();
        if values.is_empty() {
            return MetricRow {
                metric,
                min: 0.0,
                max: 0.0,
                mean: 0.0,
                dev: 0.0,
            };
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        MetricRow {
            metric,
            min,
            max,
            // rounding can push the mean of equal values a hair outside
            mean: mean.clamp(min, max),
            dev: var.sqrt(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: Vec<MetricRow>,
}

impl EvalReport {
    pub fn row(&self, metric: &str) -> Option<&MetricRow> {
        self.rows.iter().find(|r| r.metric == metric)
    }

    pub fn extend(&mut self, other: EvalReport) {
        self.rows.extend(other.rows);
    }

    /// One line per metric: `metric  min  max  mean  dev`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("metric\tmin\tmax\tmean\tdev\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}",
                r.metric, r.min, r.max, r.mean, r.dev
            );
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BCubedScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl BCubedScore {
    fn new(precision: f64, recall: f64) -> Self {
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        BCubedScore {
            precision,
            recall,
            f1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BCubed {
    /// Per-document scores in id order.
    pub per_doc: Vec<(DocId, BCubedScore)>,
    /// Rows `prec`, `rec`, `f1`.
    pub report: EvalReport,
}

/// B-Cubed precision, recall and F1 of a clustering against gold clusters.
///
/// For every document, `CL` is the set of documents sharing its system key
/// and `G` the set sharing its gold key; precision is `|CL ∩ G| / |CL|` and
/// recall `|CL ∩ G| / |G|`. Totals average over documents.
pub fn bcubed(
    system: &BTreeMap<DocId, String>,
    gold: &BTreeMap<DocId, String>,
) -> Result<BCubed> {
    if system.len() != gold.len() || system.keys().zip(gold.keys()).any(|(a, b)| a != b) {
        return Err(Error::InvalidArgument(
            "system and gold clusterings cover different documents".into(),
        ));
    }
    let mut sys_size: HashMap<&str, usize> = HashMap::new();
    let mut gold_size: HashMap<&str, usize> = HashMap::new();
    let mut both: HashMap<(&str, &str), usize> = HashMap::new();
    for (id, s) in system {
        let g = gold[id].as_str();
        *sys_size.entry(s).or_default() += 1;
        *gold_size.entry(g).or_default() += 1;
        *both.entry((s, g)).or_default() += 1;
    }
    let per_doc: Vec<(DocId, BCubedScore)> = system
        .iter()
        .map(|(id, s)| {
            let g = gold[id].as_str();
            let overlap = both[&(s.as_str(), g)] as f64;
            let score = BCubedScore::new(overlap / sys_size[s.as_str()] as f64, overlap / gold_size[g] as f64);
            (id.clone(), score)
        })
        .collect();
    let column = |f: fn(&BCubedScore) -> f64| per_doc.iter().map(|(_, s)| f(s)).collect::<Vec<_>>();
    let report = EvalReport {
        rows: vec![
            MetricRow::from_values("prec", &column(|s| s.precision)),
            MetricRow::from_values("rec", &column(|s| s.recall)),
            MetricRow::from_values("f1", &column(|s| s.f1)),
        ],
    };
    Ok(BCubed { per_doc, report })
}

/// Fraction of the first `k` entries of each ranking that are relevant;
/// missing entries count as not relevant.
pub fn precision_at_k_values(rankings: &[Vec<DocId>], relevant: &[BTreeSet<DocId>], k: usize) -> Vec<f64> {
    assert_eq!(rankings.len(), relevant.len(), "one relevant set per ranking");
    assert!(k > 0, "k must be positive");
    rankings
        .iter()
        .zip(relevant)
        .map(|(ranking, rel)| {
            let hits = ranking.iter().take(k).filter(|id| rel.contains(*id)).count();
            hits as f64 / k as f64
        })
        .collect()
}

/// Report row `p@k` over all queries.
pub fn precision_at_k(rankings: &[Vec<DocId>], relevant: &[BTreeSet<DocId>], k: usize) -> EvalReport {
    EvalReport {
        rows: vec![MetricRow::from_values(
            format!("p@{k}"),
            &precision_at_k_values(rankings, relevant, k),
        )],
    }
}

/// Rows `p@3`, `p@5` and `p@10`.
pub fn retrieval_report(rankings: &[Vec<DocId>], relevant: &[BTreeSet<DocId>]) -> EvalReport {
    let mut report = EvalReport::default();
    for k in [3, 5, 10] {
        report.extend(precision_at_k(rankings, relevant, k));
    }
    report
}

/// When two documents are relevant to each other for retrieval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelevanceRule {
    /// At least one shared label.
    #[default]
    SharedLabel,
    /// Identical label sets.
    SameLabelSet,
}

/// How gold clusters are formed for classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GoldRule {
    /// One cluster per distinct label set.
    #[default]
    ExactLabelSet,
    /// Connected components of the shared-label relation.
    AnyOverlap,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroundTruth {
    /// Relevant documents for each evaluated document, itself excluded.
    pub relevant: BTreeMap<DocId, BTreeSet<DocId>>,
    pub gold_keys: BTreeMap<DocId, String>,
    /// Documents left out for lack of labels.
    pub excluded: Vec<DocId>,
}

fn label_key(labels: &BTreeSet<String>) -> String {
    labels.iter().map(String::as_str).collect::<Vec<_>>().join("|")
}

pub fn build_ground_truth(docs: &[Document], relevance: RelevanceRule, gold: GoldRule) -> GroundTruth {
    let mut truth = GroundTruth::default();
    let labeled: Vec<&Document> = docs
        .iter()
        .filter(|d| {
            if d.labels.is_empty() {
                truth.excluded.push(d.id.clone());
                false
            } else {
                true
            }
        })
        .collect();
    if !truth.excluded.is_empty() {
        warn!("{} documents without labels excluded from evaluation", truth.excluded.len());
    }

    let mut by_label: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, d) in labeled.iter().enumerate() {
        for l in &d.labels {
            by_label.entry(l).or_default().push(i);
        }
    }

    for (i, d) in labeled.iter().enumerate() {
        let rel: BTreeSet<DocId> = match relevance {
            RelevanceRule::SharedLabel => d
                .labels
                .iter()
                .flat_map(|l| by_label[l.as_str()].iter())
                .filter(|&&j| j != i)
                .map(|&j| labeled[j].id.clone())
                .collect(),
            RelevanceRule::SameLabelSet => labeled
                .iter()
                .enumerate()
                .filter(|&(j, o)| j != i && o.labels == d.labels)
                .map(|(_, o)| o.id.clone())
                .collect(),
        };
        truth.relevant.insert(d.id.clone(), rel);
    }

    match gold {
        GoldRule::ExactLabelSet => {
            for d in &labeled {
                truth.gold_keys.insert(d.id.clone(), label_key(&d.labels));
            }
        }
        GoldRule::AnyOverlap => {
            let mut uf = UnionFind::new(labeled.len());
            for members in by_label.values() {
                for w in members.windows(2) {
                    uf.union(w[0], w[1]);
                }
            }
            for (i, d) in labeled.iter().enumerate() {
                let root = uf.find(i);
                truth.gold_keys.insert(d.id.clone(), format!("component-{}", labeled[root].id));
            }
        }
    }
    truth
}
