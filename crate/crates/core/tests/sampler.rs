mod support;

use std::collections::BTreeSet;

use support::*;
use xlingsim_core::rng::substream;
use xlingsim_core::topics::{infer, train_labeled_lda_with, train_lda, train_lda_with, InferSettings, SamplerSettings};
use xlingsim_core::vocabulary::Vocabulary;

fn vocab(v: usize) -> Vocabulary {
    Vocabulary::from_parts((0..v).map(|i| format!("w{i:03}")).collect(), vec![0.5; v]).unwrap()
}

fn settings(iterations: usize, seed: u64) -> SamplerSettings {
    SamplerSettings {
        alpha: 0.1,
        beta: 0.01,
        iterations,
        seed,
    }
}

#[test]
fn counts_are_conserved_after_every_sweep() {
    let mut rng = substream(51, "test/conservation");
    let planted = planted_corpus(&mut rng, 4, 40, 100, 30, 0.1);
    let bows = planted.bows();
    let tokens: u64 = bows.iter().map(|b| b.total()).sum();
    let mut sweeps = 0;
    train_lda_with(&bows, &vocab(40), "xx", 4, &settings(30, 1), |s| {
        sweeps += 1;
        assert_eq!(s.topic_totals().iter().sum::<u64>(), tokens);
        assert_eq!(s.topic_word_counts().iter().map(|&c| c as u64).sum::<u64>(), tokens);
        assert_eq!(s.total_tokens(), tokens);
        let per_topic: Vec<u64> = (0..4)
            .map(|k| s.assignments().iter().flatten().filter(|&&z| z == k).count() as u64)
            .collect();
        assert_eq!(per_topic, s.topic_totals());
    })
    .unwrap();
    assert_eq!(sweeps, 30);
}

#[test]
fn labeled_assignments_stay_admissible() {
    let mut rng = substream(52, "test/labeled");
    let planted = planted_corpus(&mut rng, 4, 40, 80, 30, 0.1);
    let bows = planted.bows();
    let universe: Vec<String> = ["a", "b", "c", "d"].map(String::from).to_vec();
    let labels: Vec<BTreeSet<String>> = planted
        .theta
        .iter()
        .map(|th| top_n(th, 2).into_iter().map(|k| universe[k].clone()).collect())
        .collect();
    let model = train_labeled_lda_with(&bows, &labels, &universe, &vocab(40), "xx", &settings(20, 2), |s| {
        for (d, z) in s.assignments().iter().enumerate() {
            for &k in z {
                assert!(labels[d].contains(&universe[k as usize]));
            }
        }
    })
    .unwrap();
    assert_eq!(model.topic_labels().unwrap(), universe.as_slice());
}

#[test]
fn planted_topics_are_recovered() {
    let mut rng = substream(53, "test/recovery");
    let planted = planted_corpus(&mut rng, 5, 50, 300, 80, 0.1);
    let model = train_lda(&planted.bows(), &vocab(50), "xx", 5, &settings(150, 3)).unwrap();
    let learned: Vec<Vec<f64>> = (0..5)
        .map(|k| (0..50).map(|w| model.word_probability(k, w)).collect())
        .collect();
    let overlap = greedy_topic_overlap(&planted.phi, &learned, 10);
    assert!(overlap >= 0.6, "overlap {overlap}");
}

#[test]
fn training_and_inference_are_deterministic() {
    let mut rng = substream(54, "test/determinism");
    let planted = planted_corpus(&mut rng, 3, 30, 50, 20, 0.1);
    let bows = planted.bows();
    let a = train_lda(&bows, &vocab(30), "xx", 3, &settings(20, 9)).unwrap();
    let b = train_lda(&bows, &vocab(30), "xx", 3, &settings(20, 9)).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    let c = train_lda(&bows, &vocab(30), "xx", 3, &settings(20, 10)).unwrap();
    assert_ne!(a.to_json().unwrap(), c.to_json().unwrap());

    let infer_settings = InferSettings::default();
    assert_eq!(infer(&a, &bows[0], &infer_settings), infer(&a, &bows[0], &infer_settings));
}

#[test]
fn inference_finds_the_dominant_topic() {
    let mut rng = substream(55, "test/inference");
    let planted = planted_corpus(&mut rng, 4, 40, 200, 60, 0.1);
    let bows = planted.bows();
    let model = train_lda(&bows, &vocab(40), "xx", 4, &settings(100, 4)).unwrap();
    // map learned topics to planted ones through their heaviest word block
    let block_of = |k: usize| {
        let w: Vec<f64> = (0..40).map(|w| model.word_probability(k, w)).collect();
        let top = top_n(&w, 1).into_iter().next().unwrap();
        top / 10
    };
    let mapping: Vec<usize> = (0..4).map(block_of).collect();
    let mut hits = 0;
    for (d, bow) in bows.iter().enumerate().take(100) {
        let theta = infer(&model, bow, &InferSettings::default());
        let truth = top_n(&planted.theta[d], 1).into_iter().next().unwrap();
        hits += (mapping[theta.argmax()] == truth) as usize;
    }
    assert!(hits >= 80, "{hits}/100");
}
