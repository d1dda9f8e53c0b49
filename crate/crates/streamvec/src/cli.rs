//! Experiment runner behind the `streamvec` binary: configuration handling,
//! training-loop wiring, grid execution and the ranking report.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::corpus::{DocumentStream, StreamConfig};
use crate::error::{Error, Result};
use crate::eval::datasets::{AnalogyDataset, CategorizationDataset, SimilarityDataset};
use crate::eval::{load_records, periodic_evaluation, EvalRecord, EvalStatus, EvalSuite, ResultLog};
use crate::model::{EmbeddingSnapshot, IncrementalModel};
use crate::w2v::{derive_seed, W2vConfig, W2vHead, W2vModel};
use crate::wcm::{WcmConfig, WcmModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ModelKind {
    Wcm,
    Isg,
    Icbow,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Wcm => "wcm",
            ModelKind::Isg => "isg",
            ModelKind::Icbow => "icbow",
        }
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wcm" => Ok(ModelKind::Wcm),
            "isg" => Ok(ModelKind::Isg),
            "icbow" => Ok(ModelKind::Icbow),
            other => Err(Error::InvalidConfig(format!(
                "unknown model {other:?}; expected wcm, isg or icbow"
            ))),
        }
    }
}

/// Partially specified configuration, as collected from command-line flags or
/// a config file. Merging and validation happen in [`RawConfig::resolve`].
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    pub model: Option<String>,
    pub corpus: Option<PathBuf>,
    pub batch_size: Option<usize>,
    pub vocab_size: Option<usize>,
    pub emb_size: Option<usize>,
    pub window_size: Option<usize>,
    pub num_ns: Option<usize>,
    pub context_size: Option<usize>,
    pub ppmi_smoothing: Option<f64>,
    pub lr: Option<f64>,
    pub table_size: Option<usize>,
    pub alpha: Option<f64>,
    pub seed: Option<u64>,
    pub eval_every: Option<u64>,
    pub eval_similarity: Vec<PathBuf>,
    pub eval_categorization: Vec<PathBuf>,
    pub eval_analogy: Vec<PathBuf>,
    pub out: Option<PathBuf>,
    pub emb_out: Option<PathBuf>,
    pub deterministic: Option<bool>,
}

impl RawConfig {
    /// `self` wins over `fallback` field by field (flags override the file).
    pub fn merged_over(mut self, fallback: RawConfig) -> RawConfig {
        macro_rules! take {
            ($field:ident) => {
                if self.$field.is_none() {
                    self.$field = fallback.$field;
                }
            };
        }
        take!(model);
        take!(corpus);
        take!(batch_size);
        take!(vocab_size);
        take!(emb_size);
        take!(window_size);
        take!(num_ns);
        take!(context_size);
        take!(ppmi_smoothing);
        take!(lr);
        take!(table_size);
        take!(alpha);
        take!(seed);
        take!(eval_every);
        take!(out);
        take!(emb_out);
        take!(deterministic);
        if self.eval_similarity.is_empty() {
            self.eval_similarity = fallback.eval_similarity;
        }
        if self.eval_categorization.is_empty() {
            self.eval_categorization = fallback.eval_categorization;
        }
        if self.eval_analogy.is_empty() {
            self.eval_analogy = fallback.eval_analogy;
        }
        self
    }

    /// Validates the merged configuration and fills in defaults. Flags that
    /// do not apply to the chosen model are rejected by name.
    pub fn resolve(self) -> Result<RunConfig> {
        let model: ModelKind = self
            .model
            .as_deref()
            .ok_or_else(|| Error::InvalidConfig("--model is required".into()))?
            .parse()?;
        let corpus = self
            .corpus
            .ok_or_else(|| Error::InvalidConfig("--corpus is required".into()))?;

        match model {
            ModelKind::Wcm => {
                let w2v_only = [
                    ("num-ns", self.num_ns.is_some()),
                    ("lr", self.lr.is_some()),
                    ("table-size", self.table_size.is_some()),
                    ("alpha", self.alpha.is_some()),
                ];
                for (flag, set) in w2v_only {
                    if set {
                        return Err(Error::InvalidConfig(format!(
                            "--{flag} does not apply to model wcm"
                        )));
                    }
                }
            }
            ModelKind::Isg | ModelKind::Icbow => {
                let wcm_only = [
                    ("context-size", self.context_size.is_some()),
                    ("ppmi-smoothing", self.ppmi_smoothing.is_some()),
                ];
                for (flag, set) in wcm_only {
                    if set {
                        return Err(Error::InvalidConfig(format!(
                            "--{flag} does not apply to model {}",
                            model.as_str()
                        )));
                    }
                }
            }
        }

        let config = RunConfig {
            model,
            corpus,
            batch_size: self.batch_size.unwrap_or(32),
            vocab_size: self.vocab_size.unwrap_or(1_000_000),
            emb_size: self.emb_size.unwrap_or(100),
            window_size: self.window_size.unwrap_or(3),
            num_ns: self.num_ns.unwrap_or(6),
            context_size: self.context_size.unwrap_or(1000),
            ppmi_smoothing: self.ppmi_smoothing,
            lr: self.lr.unwrap_or(0.025),
            table_size: self.table_size.unwrap_or(10_000_000),
            alpha: self.alpha.unwrap_or(0.75),
            seed: self.seed.unwrap_or(1),
            eval_every: self.eval_every.unwrap_or(320_000),
            eval_similarity: self.eval_similarity,
            eval_categorization: self.eval_categorization,
            eval_analogy: self.eval_analogy,
            out: self.out.unwrap_or_else(|| PathBuf::from("results.json")),
            emb_out: self.emb_out,
            deterministic: self.deterministic.unwrap_or(false),
        };
        config.validate()?;
        Ok(config)
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelKind,
    pub corpus: PathBuf,
    pub batch_size: usize,
    pub vocab_size: usize,
    pub emb_size: usize,
    pub window_size: usize,
    pub num_ns: usize,
    pub context_size: usize,
    pub ppmi_smoothing: Option<f64>,
    pub lr: f64,
    pub table_size: usize,
    pub alpha: f64,
    pub seed: u64,
    pub eval_every: u64,
    pub eval_similarity: Vec<PathBuf>,
    pub eval_categorization: Vec<PathBuf>,
    pub eval_analogy: Vec<PathBuf>,
    pub out: PathBuf,
    pub emb_out: Option<PathBuf>,
    pub deterministic: bool,
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("--batch-size must be >= 1".into()));
        }
        if self.eval_every == 0 {
            return Err(Error::InvalidConfig("--eval-every must be >= 1".into()));
        }
        if self.vocab_size == 0 || self.emb_size == 0 || self.window_size == 0 {
            return Err(Error::InvalidConfig(
                "--vocab-size, --emb-size and --window-size must be >= 1".into(),
            ));
        }
        if self.num_ns == 0 {
            return Err(Error::InvalidConfig("--num-ns must be >= 1".into()));
        }
        // Model constructors re-check their own constraints; surface them now
        // so bad configs fail before any I/O.
        self.build_model().map(|_| ())
    }

    pub fn build_model(&self) -> Result<Box<dyn IncrementalModel>> {
        match self.model {
            ModelKind::Wcm => {
                let mut config = WcmConfig::new(
                    self.vocab_size,
                    self.context_size,
                    self.window_size,
                    self.emb_size,
                );
                config.ppmi_smoothing = self.ppmi_smoothing;
                Ok(Box::new(WcmModel::new(config)?))
            }
            ModelKind::Isg | ModelKind::Icbow => {
                let head = if self.model == ModelKind::Isg {
                    W2vHead::SkipGram
                } else {
                    W2vHead::Cbow
                };
                let mut config = W2vConfig::new(head, self.vocab_size, self.emb_size);
                config.window_size = self.window_size;
                config.num_ns = self.num_ns;
                config.lr = self.lr;
                config.table_size = self.table_size;
                config.alpha = self.alpha;
                config.seed = self.seed;
                Ok(Box::new(W2vModel::new(config)?))
            }
        }
    }

    pub fn build_suite(&self) -> Result<EvalSuite> {
        let mut suite = EvalSuite {
            kmeans_seed: derive_seed(self.seed, 100),
            record_wall_time: !self.deterministic,
            ..Default::default()
        };
        for path in &self.eval_similarity {
            suite.similarity.push(SimilarityDataset::load(path)?);
        }
        for path in &self.eval_categorization {
            suite.categorization.push(CategorizationDataset::load(path)?);
        }
        for path in &self.eval_analogy {
            suite.analogy.push(AnalogyDataset::load(path)?);
        }
        Ok(suite)
    }

    pub fn emb_out_path(&self) -> PathBuf {
        self.emb_out
            .clone()
            .unwrap_or_else(|| self.out.with_extension("emb"))
    }

    pub fn config_id(&self) -> GridConfigId {
        GridConfigId {
            model: self.model,
            emb_size: self.emb_size,
            window_size: self.window_size,
            num_ns: match self.model {
                ModelKind::Wcm => None,
                _ => Some(self.num_ns),
            },
            context_size: match self.model {
                ModelKind::Wcm => Some(self.context_size),
                _ => None,
            },
        }
    }
}

/// Flat `key = value` config file mirroring the CLI flags; `#` starts a
/// comment. Unknown keys are rejected.
pub fn parse_config_file(path: impl AsRef<Path>) -> Result<RawConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut raw = RawConfig::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!(
                "{}:{}: expected key = value",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad_value = || {
            Error::InvalidConfig(format!(
                "{}:{}: bad value for {key}",
                path.display(),
                lineno + 1
            ))
        };
        let paths = |v: &str| -> Vec<PathBuf> {
            v.split(',').map(|p| PathBuf::from(p.trim())).collect()
        };
        match key {
            "model" => raw.model = Some(value.to_owned()),
            "corpus" => raw.corpus = Some(PathBuf::from(value)),
            "batch-size" => raw.batch_size = Some(value.parse().map_err(|_| bad_value())?),
            "vocab-size" => raw.vocab_size = Some(value.parse().map_err(|_| bad_value())?),
            "emb-size" => raw.emb_size = Some(value.parse().map_err(|_| bad_value())?),
            "window-size" => raw.window_size = Some(value.parse().map_err(|_| bad_value())?),
            "num-ns" => raw.num_ns = Some(value.parse().map_err(|_| bad_value())?),
            "context-size" => raw.context_size = Some(value.parse().map_err(|_| bad_value())?),
            "ppmi-smoothing" => {
                raw.ppmi_smoothing = Some(value.parse().map_err(|_| bad_value())?)
            }
            "lr" => raw.lr = Some(value.parse().map_err(|_| bad_value())?),
            "table-size" => raw.table_size = Some(value.parse().map_err(|_| bad_value())?),
            "alpha" => raw.alpha = Some(value.parse().map_err(|_| bad_value())?),
            "seed" => raw.seed = Some(value.parse().map_err(|_| bad_value())?),
            "eval-every" => raw.eval_every = Some(value.parse().map_err(|_| bad_value())?),
            "eval-similarity" => raw.eval_similarity = paths(value),
            "eval-categorization" => raw.eval_categorization = paths(value),
            "eval-analogy" => raw.eval_analogy = paths(value),
            "out" => raw.out = Some(PathBuf::from(value)),
            "emb-out" => raw.emb_out = Some(PathBuf::from(value)),
            "deterministic" => {
                raw.deterministic = Some(value.parse().map_err(|_| bad_value())?)
            }
            other => {
                return Err(Error::InvalidConfig(format!(
                    "{}:{}: unknown key {other:?}",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(raw)
}

/// Outcome of one training run.
#[derive(Debug)]
pub struct RunSummary {
    pub docs: u64,
    pub warnings: u64,
    pub records: Vec<EvalRecord>,
    pub resident_words: usize,
}

/// Trains a model over the whole stream with periodic evaluation, then writes
/// the JSON log and the final embedding dump.
pub fn run_train(config: &RunConfig) -> Result<RunSummary> {
    let suite = config.build_suite()?;
    let mut model = config.build_model()?;
    let stream_config = StreamConfig::new(&config.corpus, config.batch_size)?;
    let mut stream = DocumentStream::open(&stream_config)?;
    let mut log = ResultLog::new(Some(config.out.clone()));

    let outcome = periodic_evaluation(
        &mut stream,
        model.as_mut(),
        &suite,
        config.eval_every,
        &mut log,
    );
    // Flush whatever was collected even when the stream failed mid-run.
    log.flush()?;
    outcome?;

    dump_embeddings(model.as_ref(), config.emb_out_path())?;
    Ok(RunSummary {
        docs: stream.docs_read(),
        warnings: stream.warnings(),
        records: log.into_records(),
        resident_words: model.vocab().len(),
    })
}

/// Writes the resident vocabulary in the conventional text format: a
/// `<count> <dim>` header line, then one `word v1 v2 ... vd` line per word.
/// Floats use the shortest representation that round-trips exactly.
pub fn dump_embeddings(model: &dyn IncrementalModel, path: impl AsRef<Path>) -> Result<()> {
    let resident = model.vocab().resident_sorted_by_slot();
    let mut out = std::io::BufWriter::new(std::fs::File::create(path.as_ref())?);
    writeln!(out, "{} {}", resident.len(), model.emb_size())?;
    for (word, _, _) in &resident {
        let vector = model
            .embedding(word)
            .expect("resident word must have an embedding");
        write!(out, "{word}")?;
        for v in vector {
            write!(out, " {v}")?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a dump produced by [`dump_embeddings`].
pub fn load_embeddings(path: impl AsRef<Path>) -> Result<EmbeddingSnapshot> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidConfig(format!("{}: empty dump", path.display())))?;
    let mut parts = header.split_whitespace();
    let count: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::InvalidConfig(format!("{}: bad header", path.display())))?;
    let dim: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::InvalidConfig(format!("{}: bad header", path.display())))?;

    let mut words = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    for (i, line) in lines.enumerate() {
        let mut fields = line.split(' ');
        let word = fields
            .next()
            .ok_or_else(|| Error::InvalidConfig(format!("{}: bad line {}", path.display(), i + 2)))?;
        let vector: std::result::Result<Vec<f64>, _> = fields.map(|f| f.parse()).collect();
        let vector = vector
            .map_err(|_| Error::InvalidConfig(format!("{}: bad line {}", path.display(), i + 2)))?;
        if vector.len() != dim {
            return Err(Error::InvalidConfig(format!(
                "{}: line {} has {} values, expected {dim}",
                path.display(),
                i + 2,
                vector.len()
            )));
        }
        words.push(word.to_owned());
        vectors.push(vector);
    }
    if words.len() != count {
        return Err(Error::InvalidConfig(format!(
            "{}: header promises {count} words, found {}",
            path.display(),
            words.len()
        )));
    }
    Ok(EmbeddingSnapshot::new(dim, words, vectors))
}

/// Canonical identity of one grid configuration; doubles as the log file
/// stem, so `rank` can recover the configuration from a path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GridConfigId {
    pub model: ModelKind,
    pub emb_size: usize,
    pub window_size: usize,
    pub num_ns: Option<usize>,
    pub context_size: Option<usize>,
}

impl fmt::Display for GridConfigId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}_emb{}_win{}",
            self.model.as_str(),
            self.emb_size,
            self.window_size
        )?;
        if let Some(ns) = self.num_ns {
            write!(f, "_ns{ns}")?;
        }
        if let Some(ctx) = self.context_size {
            write!(f, "_ctx{ctx}")?;
        }
        Ok(())
    }
}

impl FromStr for GridConfigId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("cannot parse config id {s:?}"));
        let mut parts = s.split('_');
        let model: ModelKind = parts.next().ok_or_else(bad)?.parse()?;
        let mut id = GridConfigId {
            model,
            emb_size: 0,
            window_size: 0,
            num_ns: None,
            context_size: None,
        };
        for part in parts {
            if let Some(v) = part.strip_prefix("emb") {
                id.emb_size = v.parse().map_err(|_| bad())?;
            } else if let Some(v) = part.strip_prefix("win") {
                id.window_size = v.parse().map_err(|_| bad())?;
            } else if let Some(v) = part.strip_prefix("ns") {
                id.num_ns = Some(v.parse().map_err(|_| bad())?);
            } else if let Some(v) = part.strip_prefix("ctx") {
                id.context_size = Some(v.parse().map_err(|_| bad())?);
            } else {
                return Err(bad());
            }
        }
        if id.emb_size == 0 || id.window_size == 0 {
            return Err(bad());
        }
        Ok(id)
    }
}

/// One ranked configuration.
#[derive(Debug, Clone)]
pub struct RankedConfig {
    pub position: usize,
    pub id: GridConfigId,
    pub dataset_means: BTreeMap<String, f64>,
    pub overall_mean: f64,
}

/// Configurations ordered by the mean of their per-dataset mean scores.
#[derive(Debug, Clone)]
pub struct RankingReport {
    pub datasets: Vec<String>,
    pub rows: Vec<RankedConfig>,
}

/// Ranks completed runs: per dataset, the mean score over the evaluation time
/// series (ok records only); per configuration, the average of those means;
/// configurations ordered by descending overall mean, ties broken by config
/// name. Runs with zero successful evaluations are excluded with a warning.
pub fn rank_logs(runs: Vec<(GridConfigId, Vec<EvalRecord>)>) -> RankingReport {
    let mut rows = Vec::new();
    let mut datasets: Vec<String> = Vec::new();
    for (id, records) in runs {
        let mut sums: BTreeMap<String, (f64, u64)> = BTreeMap::new();
        for rec in &records {
            if rec.status == EvalStatus::Ok {
                if let Some(score) = rec.score {
                    let entry = sums.entry(rec.dataset.clone()).or_insert((0.0, 0));
                    entry.0 += score;
                    entry.1 += 1;
                }
            }
        }
        if sums.is_empty() {
            eprintln!("warning: {id} has no successful evaluations; excluded from ranking");
            continue;
        }
        let dataset_means: BTreeMap<String, f64> = sums
            .into_iter()
            .map(|(ds, (sum, n))| (ds, sum / n as f64))
            .collect();
        for ds in dataset_means.keys() {
            if !datasets.contains(ds) {
                datasets.push(ds.clone());
            }
        }
        let overall_mean =
            dataset_means.values().sum::<f64>() / dataset_means.len() as f64;
        rows.push(RankedConfig {
            position: 0,
            id,
            dataset_means,
            overall_mean,
        });
    }
    datasets.sort_unstable();
    rows.sort_by(|a, b| {
        b.overall_mean
            .partial_cmp(&a.overall_mean)
            .unwrap()
            .then_with(|| a.id.to_string().cmp(&b.id.to_string()))
    });
    for (i, row) in rows.iter_mut().enumerate() {
        row.position = i + 1;
    }
    RankingReport { datasets, rows }
}

/// Renders the report as TSV with one column per dataset mean.
pub fn report_to_tsv(report: &RankingReport) -> String {
    let mut out = String::from("position\tmodel\temb_size\twindow_size\tnum_ns\tcontext_size");
    for ds in &report.datasets {
        out.push_str(&format!("\tmean_{ds}"));
    }
    out.push_str("\toverall_mean\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            row.position,
            row.id.model.as_str(),
            row.id.emb_size,
            row.id.window_size,
            row.id.num_ns.map_or("-".to_owned(), |v| v.to_string()),
            row.id.context_size.map_or("-".to_owned(), |v| v.to_string()),
        ));
        for ds in &report.datasets {
            match row.dataset_means.get(ds) {
                Some(mean) => out.push_str(&format!("\t{mean:.6}")),
                None => out.push_str("\t-"),
            }
        }
        out.push_str(&format!("\t{:.6}\n", row.overall_mean));
    }
    out
}

/// The hyperparameter lists a grid run sweeps. The defaults are the 27-point
/// grid used by the benchmark.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub base: RawConfig,
    pub emb_sizes: Vec<usize>,
    pub window_sizes: Vec<usize>,
    pub num_ns_list: Vec<usize>,
    pub context_sizes: Vec<usize>,
    pub out_dir: PathBuf,
}

impl GridSpec {
    pub fn new(base: RawConfig, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            base,
            emb_sizes: vec![100, 200, 300],
            window_sizes: vec![1, 2, 3],
            num_ns_list: vec![6, 8, 10],
            context_sizes: vec![500, 750, 1000],
            out_dir: out_dir.into(),
        }
    }
}

/// Runs every configuration of the grid sequentially, then ranks the logs and
/// writes `ranking.tsv` into the output directory.
pub fn run_grid(spec: &GridSpec) -> Result<RankingReport> {
    let model: ModelKind = spec
        .base
        .model
        .as_deref()
        .ok_or_else(|| Error::InvalidConfig("--model is required".into()))?
        .parse()?;
    std::fs::create_dir_all(&spec.out_dir)?;

    let third_axis: Vec<usize> = match model {
        ModelKind::Wcm => spec.context_sizes.clone(),
        _ => spec.num_ns_list.clone(),
    };

    let mut runs = Vec::new();
    for &emb in &spec.emb_sizes {
        for &win in &spec.window_sizes {
            for &third in &third_axis {
                let mut raw = spec.base.clone();
                raw.emb_size = Some(emb);
                raw.window_size = Some(win);
                match model {
                    ModelKind::Wcm => raw.context_size = Some(third),
                    _ => raw.num_ns = Some(third),
                }
                let mut config = raw.resolve()?;
                let id = config.config_id();
                config.out = spec.out_dir.join(format!("{id}.json"));
                config.emb_out = Some(spec.out_dir.join(format!("{id}.emb")));
                eprintln!("grid: running {id}");
                let summary = run_train(&config)?;
                runs.push((id, summary.records));
            }
        }
    }

    let report = rank_logs(runs);
    std::fs::write(spec.out_dir.join("ranking.tsv"), report_to_tsv(&report))?;
    Ok(report)
}

/// Builds the ranking report from existing log files; the configuration is
/// recovered from each file stem.
pub fn run_rank(log_paths: &[PathBuf]) -> Result<RankingReport> {
    let mut runs = Vec::new();
    for path in log_paths {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .ok_or_else(|| Error::InvalidConfig(format!("bad log path {}", path.display())))?;
        let id: GridConfigId = stem.parse()?;
        runs.push((id, load_records(path)?));
    }
    Ok(rank_logs(runs))
}

/// Peak resident set size of this process in kilobytes (Linux VmHWM).
pub fn peak_rss_kb() -> Option<u64> {
    let text = std::fs::read_to_string("/proc/self/status").ok()?;
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("VmHWM:") {
            return rest.trim().trim_end_matches("kB").trim().parse().ok();
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{tokenize, Document};

    fn raw_for(model: &str) -> RawConfig {
        RawConfig {
            model: Some(model.into()),
            corpus: Some(PathBuf::from("corpus.txt")),
            ..Default::default()
        }
    }

    #[test]
    fn resolve_fills_paper_defaults() {
        let config = raw_for("icbow").resolve().unwrap();
        assert_eq!(config.batch_size, 32);
        assert_eq!(config.vocab_size, 1_000_000);
        assert_eq!(config.eval_every, 320_000);
        assert_eq!(config.lr, 0.025);
        assert_eq!(config.alpha, 0.75);
        assert_eq!(config.table_size, 10_000_000);
    }

    #[test]
    fn missing_corpus_is_a_config_error() {
        let raw = RawConfig {
            model: Some("isg".into()),
            ..Default::default()
        };
        let err = raw.resolve().unwrap_err().to_string();
        assert!(err.contains("--corpus"), "{err}");
    }

    #[test]
    fn wcm_rejects_w2v_flags_by_name() {
        let mut raw = raw_for("wcm");
        raw.num_ns = Some(6);
        let err = raw.resolve().unwrap_err().to_string();
        assert!(err.contains("num-ns"), "{err}");

        let mut raw = raw_for("wcm");
        raw.lr = Some(0.1);
        assert!(raw.resolve().unwrap_err().to_string().contains("lr"));
    }

    #[test]
    fn w2v_rejects_wcm_flags_by_name() {
        let mut raw = raw_for("isg");
        raw.context_size = Some(500);
        let err = raw.resolve().unwrap_err().to_string();
        assert!(err.contains("context-size"), "{err}");
    }

    #[test]
    fn unknown_model_is_rejected() {
        assert!(raw_for("glove").resolve().is_err());
    }

    #[test]
    fn best_paper_setting_resolves() {
        // icbow with emb_size=100, window_size=3, num_ns=6.
        let mut raw = raw_for("icbow");
        raw.emb_size = Some(100);
        raw.window_size = Some(3);
        raw.num_ns = Some(6);
        let config = raw.resolve().unwrap();
        assert_eq!(
            config.config_id().to_string(),
            "icbow_emb100_win3_ns6"
        );
    }

    #[test]
    fn config_file_parses_and_flags_override() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# run settings").unwrap();
        writeln!(f, "model = isg").unwrap();
        writeln!(f, "corpus = data.txt").unwrap();
        writeln!(f, "emb-size = 200").unwrap();
        writeln!(f, "seed = 7").unwrap();
        f.flush().unwrap();

        let file = parse_config_file(f.path()).unwrap();
        let flags = RawConfig {
            emb_size: Some(50),
            ..Default::default()
        };
        let config = flags.merged_over(file).resolve().unwrap();
        assert_eq!(config.emb_size, 50, "flag must override file");
        assert_eq!(config.seed, 7);
        assert_eq!(config.model, ModelKind::Isg);
    }

    #[test]
    fn config_file_rejects_unknown_keys() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "modle = isg").unwrap();
        f.flush().unwrap();
        let err = parse_config_file(f.path()).unwrap_err().to_string();
        assert!(err.contains("modle"), "{err}");
    }

    #[test]
    fn grid_id_round_trips() {
        for s in ["icbow_emb100_win3_ns6", "wcm_emb300_win1_ctx750"] {
            let id: GridConfigId = s.parse().unwrap();
            assert_eq!(id.to_string(), s);
        }
        assert!("emb100_win3".parse::<GridConfigId>().is_err());
    }

    fn rec(dataset: &str, score: f64) -> EvalRecord {
        EvalRecord {
            c: 1,
            dataset: dataset.into(),
            metric: "spearman".into(),
            score: Some(score),
            status: EvalStatus::Ok,
            oov_fraction: 0.0,
            wall_ms: 0,
        }
    }

    fn grid_id(model: ModelKind, emb: usize) -> GridConfigId {
        GridConfigId {
            model,
            emb_size: emb,
            window_size: 1,
            num_ns: Some(6),
            context_size: None,
        }
    }

    #[test]
    fn single_config_ranks_first() {
        let report = rank_logs(vec![(grid_id(ModelKind::Isg, 100), vec![rec("men", -0.9)])]);
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].position, 1);
    }

    #[test]
    fn ranking_orders_by_overall_mean_and_breaks_ties_by_name() {
        // Dyadic scores so the overall means tie exactly in f64.
        let a = (
            grid_id(ModelKind::Isg, 200),
            vec![rec("men", 0.5), rec("mturk", 0.25)],
        );
        let b = (
            grid_id(ModelKind::Isg, 100),
            vec![rec("men", 0.375), rec("mturk", 0.375)],
        );
        let c = (
            grid_id(ModelKind::Icbow, 100),
            vec![rec("men", 0.8), rec("mturk", 0.8)],
        );
        let report = rank_logs(vec![a, b, c]);
        assert_eq!(report.rows[0].id.model, ModelKind::Icbow);
        // Tie at 0.375: isg_emb100 before isg_emb200 lexicographically.
        assert_eq!(report.rows[1].id.emb_size, 100);
        assert_eq!(report.rows[2].id.emb_size, 200);
        let positions: Vec<usize> = report.rows.iter().map(|r| r.position).collect();
        assert_eq!(positions, vec![1, 2, 3]);
    }

    #[test]
    fn ranking_matches_hand_computed_means() {
        // Three synthetic logs with hand-set scores; per-dataset means and
        // overall means computed by hand.
        let runs = vec![
            (
                grid_id(ModelKind::Isg, 100),
                vec![rec("men", 0.2), rec("men", 0.4), rec("ap", 0.6)],
            ),
            (
                grid_id(ModelKind::Isg, 200),
                vec![rec("men", 0.5), rec("ap", 0.1)],
            ),
            (
                grid_id(ModelKind::Isg, 300),
                vec![rec("men", 0.9), rec("ap", 0.9)],
            ),
        ];
        let report = rank_logs(runs);
        // means: emb100 -> men 0.3, ap 0.6, overall 0.45
        //        emb200 -> men 0.5, ap 0.1, overall 0.3
        //        emb300 -> overall 0.9
        assert_eq!(report.rows[0].id.emb_size, 300);
        assert_eq!(report.rows[1].id.emb_size, 100);
        assert!((report.rows[1].overall_mean - 0.45).abs() < 1e-12);
        assert_eq!(report.rows[2].id.emb_size, 200);
        assert!((report.rows[2].overall_mean - 0.3).abs() < 1e-12);
    }

    #[test]
    fn ranking_excludes_runs_without_successful_evaluations() {
        let undefined = EvalRecord {
            score: None,
            status: EvalStatus::Undefined,
            ..rec("men", 0.0)
        };
        let report = rank_logs(vec![
            (grid_id(ModelKind::Isg, 100), vec![undefined]),
            (grid_id(ModelKind::Isg, 200), vec![rec("men", 0.4)]),
        ]);
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].id.emb_size, 200);
    }

    #[test]
    fn ranking_is_a_pure_function_of_the_logs() {
        let runs = || {
            vec![
                (grid_id(ModelKind::Isg, 100), vec![rec("men", 0.3)]),
                (grid_id(ModelKind::Icbow, 100), vec![rec("men", 0.5)]),
            ]
        };
        let a = report_to_tsv(&rank_logs(runs()));
        let b = report_to_tsv(&rank_logs(runs()));
        assert_eq!(a, b);
    }

    struct TinyModel {
        vocab: crate::vocab::BoundedVocab,
    }

    impl IncrementalModel for TinyModel {
        fn learn_one(&mut self, doc: &Document) {
            for t in &doc.tokens {
                self.vocab.observe(t);
            }
        }
        fn embedding(&self, word: &str) -> Option<Vec<f64>> {
            self.vocab
                .slot_of(word)
                .map(|s| vec![s as f64 + 0.125, 1.0 / (s as f64 + 3.0)])
        }
        fn emb_size(&self) -> usize {
            2
        }
        fn vocab(&self) -> &crate::vocab::BoundedVocab {
            &self.vocab
        }
    }

    #[test]
    fn dump_round_trips_exactly() {
        let mut model = TinyModel {
            vocab: crate::vocab::BoundedVocab::new(16),
        };
        model.learn_one(&Document::new(tokenize("alpha beta gamma delta")));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("vectors.emb");
        dump_embeddings(&model, &path).unwrap();

        let snap = load_embeddings(&path).unwrap();
        assert_eq!(snap.len(), 4);
        for word in ["alpha", "beta", "gamma", "delta"] {
            assert_eq!(
                snap.get(word).unwrap(),
                model.embedding(word).unwrap().as_slice(),
                "{word} must reload bit-for-bit"
            );
        }
    }

    #[test]
    fn dump_of_empty_vocab_is_header_only() {
        let model = TinyModel {
            vocab: crate::vocab::BoundedVocab::new(4),
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.emb");
        dump_embeddings(&model, &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "0 2\n");
    }

    #[test]
    fn dump_single_word_has_two_lines() {
        let mut model = TinyModel {
            vocab: crate::vocab::BoundedVocab::new(4),
        };
        model.learn_one(&Document::new(vec!["only".into()]));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one.emb");
        dump_embeddings(&model, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
    }
}
