//! Misra-Gries bounded vocabulary in action: a capacity-8 sketch over a
//! skewed stream keeps the heavy hitters while rare words come and go.
//!
//! ```bash
//! cargo run --release --example vocab_sketch
//! ```

use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

use streamvec::vocab::{BoundedVocab, VocabEvent};

fn main() {
    let capacity = 8;
    let n = 50_000;
    let mut vocab = BoundedVocab::new(capacity);

    // Zipfian stream over 1000 distinct words.
    let weights: Vec<f64> = (1..=1000).map(|r| 1.0 / (r as f64).powf(1.2)).collect();
    let dist = rand::distr::weighted::WeightedIndex::new(&weights).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    let mut exact: HashMap<String, u64> = HashMap::new();
    let mut evictions = 0u64;
    let mut drops = 0u64;
    for _ in 0..n {
        let word = format!("w{}", dist.sample(&mut rng));
        *exact.entry(word.clone()).or_default() += 1;
        match vocab.observe(&word) {
            VocabEvent::EvictedThenInserted { evicted, .. } => evictions += evicted.len() as u64,
            VocabEvent::Dropped => drops += 1,
            _ => {}
        }
    }

    println!("stream of {n} tokens, capacity {capacity}: {evictions} evictions, {drops} drops\n");
    println!("{:<8} {:>8} {:>8} {:>6}", "word", "estimate", "true", "slot");
    for (word, slot, counter) in vocab.resident_sorted_by_slot() {
        println!("{word:<8} {counter:>8} {:>8} {slot:>6}", exact[&word]);
    }

    // Classic sketch guarantee: anything with true count above N/(capacity+1)
    // must still be resident.
    let threshold = n as u64 / (capacity as u64 + 1);
    let guaranteed: Vec<&String> = exact
        .iter()
        .filter(|(_, &c)| c > threshold)
        .map(|(w, _)| w)
        .collect();
    println!(
        "\nwords above the N/(k+1) = {threshold} guarantee threshold: {:?} (all resident: {})",
        guaranteed,
        guaranteed.iter().all(|w| vocab.slot_of(w).is_some())
    );
}
