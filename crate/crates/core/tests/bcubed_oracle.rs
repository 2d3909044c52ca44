mod support;

use std::collections::BTreeMap;

use support::*;
use xlingsim_core::evaluation::bcubed;
use xlingsim_core::rng::substream;

fn check(system: &BTreeMap<String, String>, gold: &BTreeMap<String, String>) {
    let got = bcubed(system, gold).unwrap();
    let want = bcubed_pairwise(system, gold);
    for ((_, s), (p, r, f)) in got.per_doc.iter().zip(&want) {
        assert_eq!((s.precision, s.recall, s.f1), (*p, *r, *f));
    }
    let n = want.len() as f64;
    let mean = |i: usize| want.iter().map(|t| [t.0, t.1, t.2][i]).sum::<f64>() / n;
    let rows = &got.report;
    assert!((rows.row("prec").unwrap().mean - mean(0)).abs() < 1e-12);
    assert!((rows.row("rec").unwrap().mean - mean(1)).abs() < 1e-12);
    assert!((rows.row("f1").unwrap().mean - mean(2)).abs() < 1e-12);
}

#[test]
fn random_partitions_match_pairwise_definition() {
    let mut rng = substream(21, "test/bcubed");
    for _ in 0..100 {
        check(&random_partition(&mut rng, 200, 12), &random_partition(&mut rng, 200, 12));
    }
}

#[test]
fn every_partition_pair_of_five_items() {
    let parts = all_partitions(5);
    assert_eq!(parts.len(), 52);
    let as_map = |p: &Vec<usize>| -> BTreeMap<String, String> {
        p.iter().enumerate().map(|(i, c)| (format!("d{i}"), format!("c{c}"))).collect()
    };
    for a in &parts {
        for b in &parts {
            check(&as_map(a), &as_map(b));
        }
    }
}

#[test]
fn closed_forms() {
    let items: Vec<String> = (0..6).map(|i| format!("d{i}")).collect();
    let gold: BTreeMap<String, String> = items.iter().map(|i| (i.clone(), format!("g{}", &i[1..]))).collect();
    let one: BTreeMap<String, String> = items.iter().map(|i| (i.clone(), "all".to_string())).collect();

    let identical = bcubed(&gold, &gold).unwrap();
    assert_eq!(identical.report.row("f1").unwrap().mean, 1.0);

    // singleton gold, one system cluster: P = 1/n, R = 1
    let merged = bcubed(&one, &gold).unwrap();
    assert_eq!(merged.report.row("prec").unwrap().mean, 1.0 / 6.0);
    assert_eq!(merged.report.row("rec").unwrap().mean, 1.0);
}
