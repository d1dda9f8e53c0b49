//! Mini hyperparameter grid: runs a reduced ISG sweep over the bundled
//! stream, then ranks the configurations by the mean of their per-dataset
//! mean scores (the same report the `streamvec grid` subcommand writes).
//!
//! ```bash
//! cargo run --release --example grid_rank
//! ```

use std::path::PathBuf;

use streamvec::cli::{report_to_tsv, run_grid, GridSpec, RawConfig};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn main() -> anyhow::Result<()> {
    let base = RawConfig {
        model: Some("isg".into()),
        corpus: Some(data("stream_corpus.txt")),
        vocab_size: Some(10_000),
        table_size: Some(50_000),
        eval_every: Some(2_000),
        eval_similarity: vec![data("similarity_30.tsv")],
        eval_categorization: vec![data("categories.tsv")],
        seed: Some(3),
        deterministic: Some(true),
        ..Default::default()
    };

    let out_dir = std::env::temp_dir().join("streamvec_grid_example");
    let mut spec = GridSpec::new(base, &out_dir);
    // A reduced sweep so the example finishes in under a minute; the full
    // benchmark grid is emb {100,200,300} x win {1,2,3} x ns {6,8,10}.
    spec.emb_sizes = vec![25, 50];
    spec.window_sizes = vec![1, 3];
    spec.num_ns_list = vec![4];

    let report = run_grid(&spec)?;
    println!("\n{}", report_to_tsv(&report));
    println!("per-run logs and dumps in {}", out_dir.display());
    Ok(())
}
