//! Periodic evaluation: trains ISG over the bundled stream and scores the
//! live model on similarity, categorization and analogy gold sets every
//! 1,000 instances, appending the time series to a JSON log.
//!
//! ```bash
//! cargo run --release --example periodic_eval
//! ```

use std::path::PathBuf;

use streamvec::corpus::{DocumentStream, StreamConfig};
use streamvec::eval::datasets::{AnalogyDataset, CategorizationDataset, SimilarityDataset};
use streamvec::eval::{periodic_evaluation, EvalSuite, ResultLog};
use streamvec::w2v::{W2vConfig, W2vHead, W2vModel};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn main() -> streamvec::Result<()> {
    let suite = EvalSuite {
        similarity: vec![SimilarityDataset::load(data("similarity_30.tsv"))?],
        categorization: vec![CategorizationDataset::load(data("categories.tsv"))?],
        analogy: vec![AnalogyDataset::load(data("analogies.txt"))?],
        kmeans_seed: 11,
        record_wall_time: true,
    };

    let mut config = W2vConfig::new(W2vHead::SkipGram, 10_000, 50);
    config.window_size = 3;
    config.table_size = 100_000;
    let mut model = W2vModel::new(config)?;

    let stream_config = StreamConfig::new(data("stream_corpus.txt"), 32)?;
    let mut stream = DocumentStream::open(&stream_config)?;

    let log_path = std::env::temp_dir().join("streamvec_periodic_eval.json");
    let mut log = ResultLog::new(Some(log_path.clone()));
    periodic_evaluation(&mut stream, &mut model, &suite, 1_000, &mut log)?;

    println!("{:>8} {:<16} {:<18} {:>8} {:>6}", "c", "dataset", "metric", "score", "oov");
    for rec in log.records() {
        println!(
            "{:>8} {:<16} {:<18} {:>8} {:>6.2}",
            rec.c,
            rec.dataset,
            rec.metric,
            rec.score.map_or("null".to_owned(), |s| format!("{s:.3}")),
            rec.oov_fraction
        );
    }
    println!("\nfull JSON time series written to {}", log_path.display());
    Ok(())
}
