#![allow(dead_code)]

use jotto::{num_common_letters, Dictionary, HiderStrategy};
use proptest::prelude::*;

/// Small dictionaries over a six-letter alphabet; at most six words.
pub fn toy_dictionary() -> impl Strategy<Value = Dictionary> {
    (2usize..=3)
        .prop_flat_map(|letters| {
            let word = prop::sample::subsequence(vec!['A', 'B', 'C', 'D', 'E', 'F'], letters)
                .prop_shuffle()
                .prop_map(|cs| cs.into_iter().collect::<String>());
            (Just(letters), prop::collection::vec(word, 1..=6))
        })
        .prop_filter_map("all words were anagrams", |(letters, words)| {
            Dictionary::from_words(words, letters).ok()
        })
}

pub fn strategy_for(d: usize) -> impl Strategy<Value = HiderStrategy> {
    prop::collection::vec(0.0f64..1.0, d).prop_filter_map("zero mass", |raw| {
        let total: f64 = raw.iter().sum();
        (total > 1e-6).then(|| HiderStrategy::new(raw.iter().map(|x| x / total).collect()).unwrap())
    })
}

/// Expected eliminations computed by enumerating hidden words directly from
/// the word strings, without the engine's answer buckets.
pub fn brute_expected_elims(dict: &Dictionary, guess: usize, h: &[f64], consistent: &[usize]) -> f64 {
    let g = dict.word(guess);
    let mass: f64 = consistent.iter().map(|&k| h[k]).sum();
    let weight = |k: usize| {
        if mass > 0.0 {
            h[k] / mass
        } else {
            1.0 / consistent.len() as f64
        }
    };
    consistent
        .iter()
        .map(|&k| {
            let answer = num_common_letters(g, dict.word(k));
            let eliminated = consistent
                .iter()
                .filter(|&&m| num_common_letters(g, dict.word(m)) != answer)
                .count();
            weight(k) * eliminated as f64
        })
        .sum()
}

pub fn chain() -> Dictionary {
    Dictionary::from_words(["AB", "BC", "CD"], 2).unwrap()
}
