use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use streamvec::cli::{
    self, parse_config_file, peak_rss_kb, report_to_tsv, GridSpec, RawConfig,
};

#[derive(Parser)]
#[command(
    name = "streamvec",
    about = "Incremental word embeddings from text streams",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one model over a corpus stream with periodic evaluation.
    Train(TrainArgs),
    /// Run a hyperparameter grid and rank the configurations.
    Grid(GridArgs),
    /// Rank existing result logs into a TSV report.
    Rank(RankArgs),
    /// Train without evaluation and write the embedding dump.
    Dump(DumpArgs),
}

#[derive(Args, Clone, Default)]
struct TrainArgs {
    /// Flat key=value config file; command-line flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Corpus file: UTF-8 text, one document per line.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Model kind: wcm, isg or icbow.
    #[arg(long)]
    model: Option<String>,
    /// Documents per mini-batch (1 = instance-incremental).
    #[arg(long)]
    batch_size: Option<usize>,
    /// Bounded vocabulary capacity.
    #[arg(long)]
    vocab_size: Option<usize>,
    /// Embedding dimensionality.
    #[arg(long)]
    emb_size: Option<usize>,
    /// Context window radius W (2W surrounding tokens).
    #[arg(long)]
    window_size: Option<usize>,
    /// Negative samples per positive pair (isg/icbow).
    #[arg(long)]
    num_ns: Option<usize>,
    /// Context vocabulary capacity (wcm).
    #[arg(long)]
    context_size: Option<usize>,
    /// Optional context-distribution smoothing exponent (wcm).
    #[arg(long)]
    ppmi_smoothing: Option<f64>,
    /// Learning rate (isg/icbow).
    #[arg(long)]
    lr: Option<f64>,
    /// Unigram table length (isg/icbow).
    #[arg(long)]
    table_size: Option<usize>,
    /// Unigram smoothing exponent (isg/icbow).
    #[arg(long)]
    alpha: Option<f64>,
    /// RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Instances between evaluation rounds.
    #[arg(long)]
    eval_every: Option<u64>,
    /// Similarity dataset TSV (repeatable).
    #[arg(long)]
    eval_similarity: Vec<PathBuf>,
    /// Categorization dataset TSV (repeatable).
    #[arg(long)]
    eval_categorization: Vec<PathBuf>,
    /// Analogy dataset (repeatable).
    #[arg(long)]
    eval_analogy: Vec<PathBuf>,
    /// JSON result log path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Embedding dump path (default: --out with .emb extension).
    #[arg(long)]
    emb_out: Option<PathBuf>,
    /// Zero out wall-clock fields so repeated runs are byte-identical.
    #[arg(long)]
    deterministic: bool,
}

impl TrainArgs {
    fn into_raw(self) -> anyhow::Result<RawConfig> {
        let flags = RawConfig {
            model: self.model,
            corpus: self.corpus,
            batch_size: self.batch_size,
            vocab_size: self.vocab_size,
            emb_size: self.emb_size,
            window_size: self.window_size,
            num_ns: self.num_ns,
            context_size: self.context_size,
            ppmi_smoothing: self.ppmi_smoothing,
            lr: self.lr,
            table_size: self.table_size,
            alpha: self.alpha,
            seed: self.seed,
            eval_every: self.eval_every,
            eval_similarity: self.eval_similarity,
            eval_categorization: self.eval_categorization,
            eval_analogy: self.eval_analogy,
            out: self.out,
            emb_out: self.emb_out,
            deterministic: if self.deterministic { Some(true) } else { None },
        };
        Ok(match self.config {
            Some(path) => flags.merged_over(parse_config_file(path)?),
            None => flags,
        })
    }
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    train: TrainArgs,
    /// Directory receiving one log and one dump per configuration.
    #[arg(long)]
    out_dir: PathBuf,
    /// Embedding sizes to sweep.
    #[arg(long, value_delimiter = ',')]
    emb_sizes: Option<Vec<usize>>,
    /// Window sizes to sweep.
    #[arg(long, value_delimiter = ',')]
    window_sizes: Option<Vec<usize>>,
    /// Negative-sample counts to sweep (isg/icbow).
    #[arg(long, value_delimiter = ',')]
    num_ns_list: Option<Vec<usize>>,
    /// Context sizes to sweep (wcm).
    #[arg(long, value_delimiter = ',')]
    context_sizes: Option<Vec<usize>>,
}

#[derive(Args)]
struct RankArgs {
    /// Result logs to rank; file stems carry the configuration.
    #[arg(long, required = true, num_args = 1..)]
    logs: Vec<PathBuf>,
    /// Report output path (TSV). Prints to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DumpArgs {
    #[command(flatten)]
    train: TrainArgs,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Train(args) => {
            let config = args.into_raw()?.resolve()?;
            let summary = cli::run_train(&config)?;
            println!(
                "trained on {} documents ({} undecodable lines skipped)",
                summary.docs, summary.warnings
            );
            println!(
                "{} evaluation records -> {}",
                summary.records.len(),
                config.out.display()
            );
            println!(
                "{} resident words -> {}",
                summary.resident_words,
                config.emb_out_path().display()
            );
        }
        Command::Grid(args) => {
            let base = args.train.into_raw()?;
            let mut spec = GridSpec::new(base, &args.out_dir);
            if let Some(v) = args.emb_sizes {
                spec.emb_sizes = v;
            }
            if let Some(v) = args.window_sizes {
                spec.window_sizes = v;
            }
            if let Some(v) = args.num_ns_list {
                spec.num_ns_list = v;
            }
            if let Some(v) = args.context_sizes {
                spec.context_sizes = v;
            }
            let report = cli::run_grid(&spec)?;
            print!("{}", report_to_tsv(&report));
            println!("report written to {}", spec.out_dir.join("ranking.tsv").display());
        }
        Command::Rank(args) => {
            let report = cli::run_rank(&args.logs)?;
            let tsv = report_to_tsv(&report);
            match args.out {
                Some(path) => std::fs::write(path, tsv)?,
                None => print!("{tsv}"),
            }
        }
        Command::Dump(args) => {
            let mut raw = args.train.into_raw()?;
            // A dump run is a training run without evaluation datasets.
            raw.eval_similarity.clear();
            raw.eval_categorization.clear();
            raw.eval_analogy.clear();
            if raw.out.is_none() {
                raw.out = Some(PathBuf::from("embeddings.txt"));
                raw.emb_out = Some(PathBuf::from("embeddings.txt"));
            } else if raw.emb_out.is_none() {
                raw.emb_out = raw.out.clone();
            }
            let config = raw.resolve()?;
            let suite_out = config.emb_out_path();
            let mut model = config.build_model()?;
            let stream_config =
                streamvec::corpus::StreamConfig::new(&config.corpus, config.batch_size)?;
            let mut stream = streamvec::corpus::DocumentStream::open(&stream_config)?;
            while let Some(batch) = stream.next_batch() {
                model.learn_many(&batch);
            }
            cli::dump_embeddings(model.as_ref(), &suite_out)?;
            println!(
                "trained on {} documents; {} resident words -> {}",
                stream.docs_read(),
                model.vocab().len(),
                suite_out.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli);
    if std::env::var_os("STREAMVEC_PRINT_PEAK_RSS").is_some() {
        match peak_rss_kb() {
            Some(kb) => eprintln!("peak_rss_kb: {kb}"),
            None => eprintln!("peak_rss_kb: unavailable"),
        }
    }
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
