//! The adaptive unigram table tracks the smoothed word-frequency
//! distribution incrementally: no second pass over the stream is needed to
//! build the negative-sampling table.
//!
//! ```bash
//! cargo run --release --example unigram_table
//! ```

use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use streamvec::w2v::UnigramTable;

fn shares(table: &UnigramTable, n_slots: usize) -> Vec<f64> {
    let mut counts = vec![0usize; n_slots];
    for &slot in table.entries() {
        counts[slot as usize] += 1;
    }
    counts
        .into_iter()
        .map(|c| c as f64 / table.entries().len() as f64)
        .collect()
}

fn main() {
    let alpha = 0.75;
    let n_slots = 6;
    let mut table = UnigramTable::new(20_000, n_slots, alpha, 3);

    // Slot frequencies follow 1/rank; the table should converge to the
    // alpha-smoothed version of that distribution.
    let weights: Vec<f64> = (1..=n_slots).map(|r| 1.0 / r as f64).collect();
    let dist = rand::distr::weighted::WeightedIndex::new(&weights).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    for step in 1..=200_000usize {
        table.update(dist.sample(&mut rng));
        if step.is_power_of_two() && step >= 1024 || step == 200_000 {
            let s = shares(&table, n_slots);
            let rendered: Vec<String> = s.iter().map(|x| format!("{x:.3}")).collect();
            println!("after {step:>6} updates  |T|={:<6} shares {}", table.len(), rendered.join(" "));
        }
    }

    let total: f64 = (0..n_slots).map(|s| (table.freq(s) as f64).powf(alpha)).sum();
    let target: Vec<String> = (0..n_slots)
        .map(|s| format!("{:.3}", (table.freq(s) as f64).powf(alpha) / total))
        .collect();
    println!("smoothed target (freq^{alpha} normalized): {}", target.join(" "));

    // Drawing negatives is a uniform pick from the table, so draw frequency
    // follows the table composition.
    let draws = table.sample(10, &[0]).unwrap();
    println!("10 negative samples excluding slot 0: {draws:?}");
}
