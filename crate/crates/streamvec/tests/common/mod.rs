//! Shared test support: the synthetic topic corpus generator, the offline
//! full-corpus PPMI oracle, and paths to the bundled fixtures.
//!
//! The fixtures under `tests/data/` are generated deterministically by
//! `regenerate_fixtures` in `tests/fixtures.rs` and checked in; tests read
//! the frozen files.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use rand::distr::Distribution;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 20240201;
pub const CORPUS_TOKENS: usize = 100_000;
pub const ORACLE_WINDOW: usize = 3;

/// Ten disjoint 20-word topics.
pub const TOPICS: [[&str; 20]; 10] = [
    [
        "dog", "cat", "horse", "cow", "sheep", "goat", "pig", "duck", "goose", "rabbit", "fox",
        "wolf", "bear", "deer", "mouse", "rat", "owl", "hawk", "frog", "snake",
    ],
    [
        "red", "blue", "green", "yellow", "purple", "orange", "pink", "brown", "black", "white",
        "gray", "violet", "crimson", "scarlet", "azure", "teal", "indigo", "maroon", "beige",
        "gold",
    ],
    [
        "bread", "cheese", "butter", "milk", "egg", "rice", "bean", "soup", "meat", "fish",
        "apple", "pear", "plum", "grape", "corn", "cake", "honey", "salt", "pepper", "flour",
    ],
    [
        "head", "hand", "foot", "arm", "leg", "eye", "ear", "nose", "mouth", "hair", "knee",
        "elbow", "shoulder", "finger", "thumb", "chest", "back", "neck", "skin", "bone",
    ],
    [
        "rain", "snow", "wind", "storm", "cloud", "sun", "fog", "hail", "thunder", "lightning",
        "frost", "ice", "mist", "drizzle", "breeze", "gale", "heat", "cold", "dew", "flood",
    ],
    [
        "hammer", "saw", "drill", "wrench", "pliers", "screwdriver", "chisel", "axe", "shovel",
        "rake", "ladder", "nail", "screw", "bolt", "file", "clamp", "vise", "level", "tape",
        "ruler",
    ],
    [
        "shirt", "coat", "hat", "shoe", "sock", "glove", "scarf", "belt", "dress", "skirt",
        "trouser", "jacket", "sweater", "boot", "sandal", "cap", "tie", "vest", "collar",
        "sleeve",
    ],
    [
        "mother", "father", "sister", "brother", "uncle", "aunt", "cousin", "grandmother",
        "grandfather", "daughter", "son", "nephew", "niece", "wife", "husband", "parent",
        "child", "twin", "elder", "infant",
    ],
    [
        "guitar", "piano", "violin", "drum", "flute", "trumpet", "cello", "harp", "banjo",
        "organ", "melody", "rhythm", "chord", "song", "tune", "note", "scale", "tempo",
        "singer", "band",
    ],
    [
        "river", "lake", "sea", "ocean", "stream", "pond", "wave", "tide", "shore", "beach",
        "island", "bay", "harbor", "creek", "canal", "marsh", "delta", "current", "spring",
        "anchor",
    ],
];

pub const FUNCTION_WORDS: [&str; 30] = [
    "the", "a", "an", "of", "and", "to", "in", "is", "it", "with", "for", "on", "as", "at",
    "by", "from", "or", "but", "not", "this", "that", "these", "those", "then", "than", "so",
    "if", "when", "while", "which",
];

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

/// Topic-structured synthetic stream: each line picks one topic and mixes
/// Zipf-weighted topic words with uniform function words. Deterministic for a
/// given seed and token budget.
pub fn generate_corpus(n_tokens: usize, seed: u64) -> String {
    generate_corpus_with_noise(n_tokens, seed, 0.0)
}

/// Like [`generate_corpus`], but each token is a never-repeated noise word
/// with probability `noise_rate`, so the distinct-word count grows without
/// bound. Used by the fixed-memory checks to force vocabulary churn.
pub fn generate_corpus_with_noise(n_tokens: usize, seed: u64, noise_rate: f64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (1..=20).map(|r| (r as f64).powf(-0.8)).collect();
    let topic_word = rand::distr::weighted::WeightedIndex::new(&weights).unwrap();

    let mut out = String::new();
    let mut emitted = 0usize;
    let mut noise_counter = 0u64;
    while emitted < n_tokens {
        let topic = rng.random_range(0..TOPICS.len());
        let len = rng.random_range(8..=18usize);
        let mut line = String::new();
        for pos in 0..len {
            if pos > 0 {
                line.push(' ');
            }
            if noise_rate > 0.0 && rng.random::<f64>() < noise_rate {
                line.push_str(&format!("x{noise_counter}"));
                noise_counter += 1;
            } else if rng.random::<f64>() < 0.3 {
                line.push_str(FUNCTION_WORDS[rng.random_range(0..FUNCTION_WORDS.len())]);
            } else {
                line.push_str(TOPICS[topic][topic_word.sample(&mut rng)]);
            }
        }
        emitted += len;
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Offline full-corpus PPMI vectors: double-loop window counts over the whole
/// text, scored with `max(0, log2(count(w,c) * D / (count(w) * count(c))))`.
/// Independent of the incremental implementation. Rows are ordered maps so
/// floating-point sums are reproducible across processes.
pub struct PpmiOracle {
    rows: BTreeMap<String, BTreeMap<String, f64>>,
}

impl PpmiOracle {
    pub fn build(text: &str, window: usize) -> Self {
        let docs: Vec<Vec<String>> = text
            .lines()
            .map(|l| l.split_whitespace().map(|t| t.to_lowercase()).collect())
            .collect();

        let mut pair: HashMap<(String, String), u64> = HashMap::new();
        let mut word: HashMap<String, u64> = HashMap::new();
        let mut context: HashMap<String, u64> = HashMap::new();
        let mut d: u64 = 0;
        for tokens in &docs {
            let n = tokens.len();
            for i in 0..n {
                d += 1;
                *word.entry(tokens[i].clone()).or_default() += 1;
                let lo = i.saturating_sub(window);
                let hi = (i + window).min(n.saturating_sub(1));
                for j in lo..=hi {
                    if j == i {
                        continue;
                    }
                    *context.entry(tokens[j].clone()).or_default() += 1;
                    *pair.entry((tokens[i].clone(), tokens[j].clone())).or_default() += 1;
                }
            }
        }

        let mut rows: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
        for ((w, c), &n) in &pair {
            let value = ((n as f64 * d as f64) / (word[w] as f64 * context[c] as f64))
                .log2()
                .max(0.0);
            if value > 0.0 {
                rows.entry(w.clone()).or_default().insert(c.clone(), value);
            }
        }
        Self { rows }
    }

    pub fn cosine(&self, a: &str, b: &str) -> f64 {
        let (Some(ra), Some(rb)) = (self.rows.get(a), self.rows.get(b)) else {
            return 0.0;
        };
        let dot: f64 = ra
            .iter()
            .filter_map(|(c, x)| rb.get(c).map(|y| x * y))
            .sum();
        let na: f64 = ra.values().map(|x| x * x).sum::<f64>().sqrt();
        let nb: f64 = rb.values().map(|x| x * x).sum::<f64>().sqrt();
        if na == 0.0 || nb == 0.0 {
            0.0
        } else {
            dot / (na * nb)
        }
    }
}

/// The 30 fixture pairs: 10 same-topic (high association), 10 function-word
/// vs. topic word (medium), 10 cross-topic (low). Scores come from the
/// oracle's full-corpus PPMI cosine ranking.
pub fn similarity_pairs(oracle: &PpmiOracle) -> Vec<(String, String, f64)> {
    let mut pairs = Vec::new();
    for k in 0..10 {
        pairs.push((TOPICS[k][0].to_owned(), TOPICS[k][1].to_owned()));
    }
    for k in 0..10 {
        pairs.push((FUNCTION_WORDS[k].to_owned(), TOPICS[k][0].to_owned()));
    }
    for k in 0..10 {
        pairs.push((TOPICS[k][0].to_owned(), TOPICS[(k + 3) % 10][1].to_owned()));
    }
    pairs
        .into_iter()
        .map(|(a, b)| {
            let score = oracle.cosine(&a, &b);
            (a, b, score)
        })
        .collect()
}

pub fn similarity_tsv(pairs: &[(String, String, f64)]) -> String {
    let mut out = String::from("# synthetic 30-pair similarity set; scores are offline PPMI cosines\n");
    for (a, b, score) in pairs {
        out.push_str(&format!("{a}\t{b}\t{score}\n"));
    }
    out
}

/// Categorization fixture: the first ten words of four topics, labeled by
/// topic name.
pub fn categories_tsv() -> String {
    let names = ["animals", "colors", "food", "weather"];
    let topic_idx = [0usize, 1, 2, 4];
    let mut out = String::from("# synthetic categorization set\n");
    for (name, &t) in names.iter().zip(&topic_idx) {
        for w in &TOPICS[t][..10] {
            out.push_str(&format!("{w}\t{name}\n"));
        }
    }
    out
}

/// Analogy fixture: a:b :: c:d with (a,b) and (c,d) drawn from the same two
/// topics.
pub fn analogies_txt() -> String {
    let mut out = String::from("# synthetic analogy set\n");
    for k in 0..10 {
        let other = (k + 1) % 10;
        out.push_str(&format!(
            "{} {} {} {}\n",
            TOPICS[k][0], TOPICS[k][1], TOPICS[other][0], TOPICS[other][1]
        ));
    }
    out
}
