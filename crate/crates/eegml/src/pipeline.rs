//! End-to-end orchestration: one serializable configuration drives feature
//! extraction, cross-validated evaluation, statistical comparison and
//! report rendering, each writing its artifacts into a shared output
//! directory.
//!
//! Everything is deterministic: no timestamps, fixed iteration orders, and
//! all randomness derived from the configured seed, so rerunning a command
//! with the same config and data reproduces every output byte for byte.

use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::eval::{cross_validate, CvReport, CvSpec, Task};
use crate::features::{build_matrix, Band, ExtractionConfig, FeatureMatrix};
use crate::ingest::{load_dataset, validate_dataset, ClassLabel, DatasetManifest, IngestError};
use crate::learners::{Algorithm, LearnerConfig};
use crate::spectral::{bispectrum_capped, multitaper_ps, multitaper_sg};
use crate::stats::{analyze, read_fold_errors, ResultsBlock, StatsReport, DEFAULT_ALPHA};
use crate::tapers::dpss;

/// Pipeline failures, split by who has to act: `Usage` means the invocation
/// (paths, parameters) needs fixing, `Runtime` means the run itself failed.
#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl PipelineError {
    /// Process exit code convention: 2 for usage problems, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            PipelineError::Usage(_) => 2,
            PipelineError::Runtime(_) => 1,
        }
    }
}

fn runtime(err: impl std::fmt::Display) -> PipelineError {
    PipelineError::Runtime(err.to_string())
}

/// Bad paths and malformed manifests are invocation problems; anything that
/// goes wrong while reading declared data is a runtime failure.
fn ingest_error(err: IngestError) -> PipelineError {
    match &err {
        IngestError::FileNotFound(_) | IngestError::InvalidManifest(_) | IngestError::Io { .. } => {
            PipelineError::Usage(err.to_string())
        }
        _ => PipelineError::Runtime(err.to_string()),
    }
}

/// Everything a full run needs, in one serializable document. The config is
/// echoed verbatim into every JSON artifact so results stay interpretable
/// without the original invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    /// Dataset manifest (TOML) describing the labeled segment files.
    pub manifest: PathBuf,
    /// Taper and spectrogram parameters for feature extraction.
    pub extraction: ExtractionConfig,
    /// The clinical frequency bands of the feature schema.
    pub bands: Vec<Band>,
    /// Classifiers to train and compare.
    pub algorithms: Vec<Algorithm>,
    /// Hyperparameters shared by all learners.
    pub learner: LearnerConfig,
    /// Master seed; every shuffle, bootstrap and weight init derives from it.
    pub seed: u64,
    /// Label groupings to evaluate.
    pub tasks: Vec<Task>,
    /// Stratified fold count.
    pub folds: usize,
    /// Directory all artifacts are written into.
    pub output_dir: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> PipelineConfig {
        PipelineConfig {
            manifest: PathBuf::from("manifest.toml"),
            extraction: ExtractionConfig::default(),
            bands: Band::standard(),
            algorithms: Algorithm::ALL.to_vec(),
            learner: LearnerConfig::default(),
            seed: 7,
            tasks: vec![Task::Binary, Task::Multiclass],
            folds: 10,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl PipelineConfig {
    /// Loads a TOML config. Relative `manifest` and `output_dir` paths are
    /// resolved against the config file's directory, so a config travels
    /// with its data.
    pub fn from_file(path: &Path) -> Result<PipelineConfig, PipelineError> {
        let text = fs::read_to_string(path)
            .map_err(|e| PipelineError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut config: PipelineConfig = toml::from_str(&text)
            .map_err(|e| PipelineError::Usage(format!("config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        if config.manifest.is_relative() {
            config.manifest = base.join(&config.manifest);
        }
        if config.output_dir.is_relative() {
            config.output_dir = base.join(&config.output_dir);
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.folds < 2 {
            return Err(PipelineError::Usage(format!(
                "folds must be at least 2, got {}",
                self.folds
            )));
        }
        if self.algorithms.is_empty() {
            return Err(PipelineError::Usage("no algorithms configured".into()));
        }
        for (i, alg) in self.algorithms.iter().enumerate() {
            if self.algorithms[..i].contains(alg) {
                return Err(PipelineError::Usage(format!("duplicate algorithm {}", alg.name())));
            }
        }
        if self.tasks.is_empty() {
            return Err(PipelineError::Usage("no tasks configured".into()));
        }
        for (i, task) in self.tasks.iter().enumerate() {
            if self.tasks[..i].contains(task) {
                return Err(PipelineError::Usage(format!("duplicate task {task}")));
            }
        }
        self.extraction
            .validate()
            .map_err(|e| PipelineError::Usage(e.to_string()))?;
        // The 105 feature names bake in the five clinical bands; the table
        // is part of the config echo, not a free parameter.
        if self.bands != Band::standard() {
            return Err(PipelineError::Usage(
                "the feature schema fixes the band table to the five clinical bands \
                 (delta, theta, alpha, beta, gamma); remove the bands override"
                    .into(),
            ));
        }
        Ok(())
    }

    pub fn features_path(&self) -> PathBuf {
        self.output_dir.join("features.csv")
    }

    pub fn extract_summary_path(&self) -> PathBuf {
        self.output_dir.join("extract_summary.json")
    }

    pub fn evaluation_path(&self, task: Task) -> PathBuf {
        self.output_dir.join(format!("evaluation_{task}.json"))
    }

    pub fn fold_errors_path(&self, task: Task) -> PathBuf {
        self.output_dir.join(format!("fold_errors_{task}.csv"))
    }

    pub fn stats_path(&self, task: Task) -> PathBuf {
        self.output_dir.join(format!("stats_{task}.json"))
    }

    pub fn class_metrics_path(&self, task: Task) -> PathBuf {
        self.output_dir.join(format!("class_metrics_{task}.csv"))
    }

    pub fn report_path(&self) -> PathBuf {
        self.output_dir.join("report.md")
    }
}

fn ensure_output_dir(config: &PipelineConfig) -> Result<(), PipelineError> {
    fs::create_dir_all(&config.output_dir)
        .map_err(|e| runtime(format!("cannot create {}: {e}", config.output_dir.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), PipelineError> {
    let text = serde_json::to_string_pretty(value).map_err(runtime)?;
    fs::write(path, text + "\n")
        .map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, PipelineError> {
    let text = fs::read_to_string(path)
        .map_err(|e| PipelineError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

/// What extraction produced, echoed into `extract_summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractSummary {
    pub config: PipelineConfig,
    pub rows: usize,
    pub feature_count: usize,
    /// Segment count per class name, canonical order, zeros included.
    pub class_counts: Vec<(String, usize)>,
    pub warnings: Vec<String>,
}

/// Loads the manifest's segments, extracts the full feature matrix, and
/// writes `features.csv` plus a JSON summary. An empty dataset yields a
/// header-only CSV and a warning rather than an error.
pub fn cmd_extract(config: &PipelineConfig) -> Result<ExtractSummary, PipelineError> {
    config.validate()?;
    let manifest = DatasetManifest::from_file(&config.manifest).map_err(ingest_error)?;
    let dataset = load_dataset(&manifest).map_err(ingest_error)?;
    let validation = validate_dataset(&dataset);

    let matrix = build_matrix(&dataset, &config.extraction).map_err(runtime)?;

    ensure_output_dir(config)?;
    matrix.save_csv(&config.features_path()).map_err(runtime)?;

    let summary = ExtractSummary {
        config: config.clone(),
        rows: matrix.len(),
        feature_count: matrix.width(),
        class_counts: validation.class_counts,
        warnings: validation.warnings,
    };
    write_json(&config.extract_summary_path(), &summary)?;
    Ok(summary)
}

/// One task's cross-validation results: a report per configured algorithm,
/// with the config echoed alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationBundle {
    pub config: PipelineConfig,
    pub task: Task,
    pub class_names: Vec<String>,
    pub reports: Vec<CvReport>,
}

/// Labels and class-name order for a task. Binary groups the two healthy
/// sets against the two epileptic ones, abnormal listed first so true
/// positives count detected pathology; multiclass keeps the full labels in
/// canonical order.
fn task_labels(
    matrix: &FeatureMatrix,
    task: Task,
) -> Result<(Vec<String>, Vec<String>), PipelineError> {
    match task {
        Task::Binary => {
            let labels: Vec<String> = matrix
                .labels
                .iter()
                .map(|l| l.binary_name().to_string())
                .collect();
            let class_names = vec!["abnormal".to_string(), "normal".to_string()];
            for name in &class_names {
                if !labels.contains(name) {
                    return Err(runtime(format!(
                        "binary task needs both groups, but no {name} segments are present"
                    )));
                }
            }
            Ok((labels, class_names))
        }
        Task::Multiclass => {
            let labels: Vec<String> =
                matrix.labels.iter().map(|l| l.name().to_string()).collect();
            let present: Vec<String> = ClassLabel::ALL
                .iter()
                .filter(|l| matrix.labels.contains(l))
                .map(|l| l.name().to_string())
                .collect();
            if present.len() < 3 {
                return Err(runtime(format!(
                    "multiclass task needs at least 3 classes, found {}",
                    present.len()
                )));
            }
            Ok((labels, present))
        }
    }
}

/// Cross-validates every configured algorithm on every configured task.
/// Per task this writes `evaluation_<task>.json` and a combined
/// `fold_errors_<task>.csv` ready for the statistics command.
pub fn cmd_evaluate(config: &PipelineConfig) -> Result<Vec<EvaluationBundle>, PipelineError> {
    config.validate()?;
    let features = config.features_path();
    if !features.exists() {
        return Err(PipelineError::Usage(format!(
            "feature matrix {} not found; run extract first",
            features.display()
        )));
    }
    let matrix = FeatureMatrix::load_csv(&features).map_err(runtime)?;
    ensure_output_dir(config)?;

    let mut bundles = Vec::new();
    for &task in &config.tasks {
        let (labels, class_names) = task_labels(&matrix, task)?;
        // Fail before training if stratification cannot fill every fold.
        for name in &class_names {
            let count = labels.iter().filter(|l| *l == name).count();
            if count < config.folds {
                return Err(runtime(format!(
                    "invalid fold count: cannot stratify {} folds when class {name} has only {count} segments",
                    config.folds
                )));
            }
        }

        let mut reports = Vec::with_capacity(config.algorithms.len());
        for &algorithm in &config.algorithms {
            let spec = CvSpec {
                task,
                algorithm,
                folds: config.folds,
                seed: config.seed,
                learner: config.learner.clone(),
            };
            let report = cross_validate(&spec, &matrix.rows, &labels, &class_names, &matrix.column_names)
                .map_err(runtime)?;
            reports.push(report);
        }

        let bundle = EvaluationBundle {
            config: config.clone(),
            task,
            class_names,
            reports,
        };
        write_json(&config.evaluation_path(task), &bundle)?;
        write_fold_errors(&config.fold_errors_path(task), &bundle.reports)?;
        bundles.push(bundle);
    }
    Ok(bundles)
}

/// All algorithms' per-fold errors in one `fold,algorithm,error_pct` CSV.
fn write_fold_errors(path: &Path, reports: &[CvReport]) -> Result<(), PipelineError> {
    let file = fs::File::create(path)
        .map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record(["fold", "algorithm", "error_pct"]).map_err(runtime)?;
    for report in reports {
        for (fold, err) in report.fold_errors_pct.iter().enumerate() {
            w.write_record([
                fold.to_string(),
                report.spec.algorithm.name().to_string(),
                err.to_string(),
            ])
            .map_err(runtime)?;
        }
    }
    w.flush().map_err(runtime)
}

/// One task's statistical comparison, config echoed alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsBundle {
    pub config: PipelineConfig,
    pub task: Task,
    pub report: StatsReport,
}

/// Shapiro-Wilk, Friedman and Nemenyi over one fold-error CSV.
pub fn stats_from_csv(path: &Path) -> Result<StatsReport, PipelineError> {
    let file = fs::File::open(path)
        .map_err(|e| PipelineError::Usage(format!("cannot open {}: {e}", path.display())))?;
    let records = read_fold_errors(BufReader::new(file)).map_err(runtime)?;
    let block = ResultsBlock::from_fold_errors(&records).map_err(runtime)?;
    analyze(&block, DEFAULT_ALPHA).map_err(runtime)
}

/// Runs the test suite over each task's fold errors and writes
/// `stats_<task>.json`.
pub fn cmd_stats(config: &PipelineConfig) -> Result<Vec<StatsBundle>, PipelineError> {
    config.validate()?;
    ensure_output_dir(config)?;
    let mut bundles = Vec::new();
    for &task in &config.tasks {
        let path = config.fold_errors_path(task);
        if !path.exists() {
            return Err(PipelineError::Usage(format!(
                "{} not found; run evaluate first",
                path.display()
            )));
        }
        let report = stats_from_csv(&path)?;
        let bundle = StatsBundle {
            config: config.clone(),
            task,
            report,
        };
        write_json(&config.stats_path(task), &bundle)?;
        bundles.push(bundle);
    }
    Ok(bundles)
}

fn opt_pct(value: Option<f64>) -> String {
    value.map_or_else(|| "NA".to_string(), |v| format!("{v:.2}"))
}

fn fmt_p(p: f64) -> String {
    if p != 0.0 && p < 1e-3 {
        format!("{p:.3e}")
    } else {
        format!("{p:.4}")
    }
}

/// Renders `report.md` plus plot-ready CSVs from earlier outputs: per-class
/// metric tables for every task, and optional spectrum/spectrogram/
/// bispectrum dumps for named segments.
pub fn cmd_report(
    config: &PipelineConfig,
    dump_segments: &[String],
) -> Result<PathBuf, PipelineError> {
    config.validate()?;
    let mut evaluations = Vec::new();
    let mut stats = Vec::new();
    for &task in &config.tasks {
        let eval_path = config.evaluation_path(task);
        if !eval_path.exists() {
            return Err(PipelineError::Usage(format!(
                "{} not found; run evaluate first",
                eval_path.display()
            )));
        }
        evaluations.push(read_json::<EvaluationBundle>(&eval_path)?);
        let stats_path = config.stats_path(task);
        stats.push(if stats_path.exists() {
            Some(read_json::<StatsBundle>(&stats_path)?)
        } else {
            None
        });
    }
    let summary_path = config.extract_summary_path();
    let summary: Option<ExtractSummary> = if summary_path.exists() {
        Some(read_json(&summary_path)?)
    } else {
        None
    };

    ensure_output_dir(config)?;
    for bundle in &evaluations {
        write_class_metrics(&config.class_metrics_path(bundle.task), bundle)?;
    }
    if !dump_segments.is_empty() {
        dump_segment_data(config, dump_segments)?;
    }

    let markdown = render_markdown(config, summary.as_ref(), &evaluations, &stats);
    let path = config.report_path();
    fs::write(&path, markdown).map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

/// `algorithm,class,ccr_pct,pv_pct` rows from each report's pooled
/// confusion matrix; NA where a rate's denominator is zero.
fn write_class_metrics(path: &Path, bundle: &EvaluationBundle) -> Result<(), PipelineError> {
    let file = fs::File::create(path)
        .map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record(["algorithm", "class", "ccr_pct", "pv_pct"]).map_err(runtime)?;
    for report in &bundle.reports {
        for (i, class) in report.class_names.iter().enumerate() {
            w.write_record([
                report.spec.algorithm.name().to_string(),
                class.clone(),
                opt_pct(report.pooled.ccr_pct(i)),
                opt_pct(report.pooled.pv_pct(i)),
            ])
            .map_err(runtime)?;
        }
    }
    w.flush().map_err(runtime)
}

/// Recomputes and dumps the three spectral products for each named segment:
/// `spectrum_<id>.csv` (bin, Hz, power), `spectrogram_<id>.csv` and
/// `bispectrum_<id>.csv`.
fn dump_segment_data(config: &PipelineConfig, ids: &[String]) -> Result<(), PipelineError> {
    let manifest = DatasetManifest::from_file(&config.manifest).map_err(ingest_error)?;
    let dataset = load_dataset(&manifest).map_err(ingest_error)?;
    for id in ids {
        let segment = dataset
            .segments()
            .iter()
            .find(|s| &s.source_id == id)
            .ok_or_else(|| {
                PipelineError::Usage(format!("segment {id:?} is not in the dataset"))
            })?;
        let ext = &config.extraction;
        let full = dpss(segment.len(), ext.nw, ext.taper_count).map_err(runtime)?;
        let windowed = dpss(ext.sg_window, ext.nw, ext.taper_count).map_err(runtime)?;

        let ps = multitaper_ps(segment, &full).map_err(runtime)?;
        let sg = multitaper_sg(segment, &windowed, ext.sg_hop).map_err(runtime)?;
        let bg = bispectrum_capped(segment, &full, Some(ext.bispectrum_cap_hz)).map_err(runtime)?;

        let writes = [
            ("spectrum", {
                let mut buf = Vec::new();
                ps.write_csv(&mut buf).map_err(runtime)?;
                buf
            }),
            ("spectrogram", {
                let mut buf = Vec::new();
                sg.write_csv(&mut buf).map_err(runtime)?;
                buf
            }),
            ("bispectrum", {
                let mut buf = Vec::new();
                bg.write_csv(&mut buf).map_err(runtime)?;
                buf
            }),
        ];
        for (kind, bytes) in writes {
            let path = config.output_dir.join(format!("{kind}_{id}.csv"));
            fs::write(&path, bytes)
                .map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    Ok(())
}

fn render_markdown(
    config: &PipelineConfig,
    summary: Option<&ExtractSummary>,
    evaluations: &[EvaluationBundle],
    stats: &[Option<StatsBundle>],
) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    let _ = writeln!(out, "# EEG classification pipeline report\n");

    let _ = writeln!(out, "## Configuration\n");
    let _ = writeln!(out, "```json");
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(config).unwrap_or_else(|_| "{}".into())
    );
    let _ = writeln!(out, "```\n");

    let _ = writeln!(out, "## Dataset\n");
    match summary {
        Some(s) => {
            let _ = writeln!(out, "- segments: {}", s.rows);
            let _ = writeln!(out, "- features per segment: {}", s.feature_count);
            for (name, count) in &s.class_counts {
                let _ = writeln!(out, "- {name}: {count}");
            }
            for warning in &s.warnings {
                let _ = writeln!(out, "- warning: {warning}");
            }
        }
        None => {
            let _ = writeln!(out, "- extraction summary not found; dataset details unavailable");
        }
    }
    let _ = writeln!(out);

    for (bundle, stat) in evaluations.iter().zip(stats) {
        let _ = writeln!(
            out,
            "## Task: {} ({} folds, seed {})\n",
            bundle.task, config.folds, config.seed
        );

        let _ = writeln!(out, "| algorithm | mean error % | sd % | pooled accuracy % | decoding ties |");
        let _ = writeln!(out, "|---|---|---|---|---|");
        for report in &bundle.reports {
            let _ = writeln!(
                out,
                "| {} | {:.2} | {:.2} | {} | {} |",
                report.spec.algorithm.name(),
                report.mean_error_pct,
                report.sd_error_pct,
                opt_pct(report.pooled.accuracy_pct()),
                report.tie_count
            );
        }
        let _ = writeln!(out);

        match bundle.task {
            Task::Binary => {
                let _ = writeln!(out, "### Pooled binary rates\n");
                let _ = writeln!(out, "| algorithm | sensitivity % | specificity % | PPV % | NPV % |");
                let _ = writeln!(out, "|---|---|---|---|---|");
                for report in &bundle.reports {
                    let cm = &report.pooled;
                    let _ = writeln!(
                        out,
                        "| {} | {} | {} | {} | {} |",
                        report.spec.algorithm.name(),
                        opt_pct(cm.sensitivity_pct()),
                        opt_pct(cm.specificity_pct()),
                        opt_pct(cm.positive_pv_pct()),
                        opt_pct(cm.negative_pv_pct())
                    );
                }
            }
            Task::Multiclass => {
                let _ = writeln!(out, "### Pooled per-class correct classification rates\n");
                let _ = write!(out, "| algorithm |");
                for class in &bundle.class_names {
                    let _ = write!(out, " {class} % |");
                }
                let _ = writeln!(out);
                let _ = write!(out, "|---|");
                for _ in &bundle.class_names {
                    let _ = write!(out, "---|");
                }
                let _ = writeln!(out);
                for report in &bundle.reports {
                    let _ = write!(out, "| {} |", report.spec.algorithm.name());
                    for i in 0..report.class_names.len() {
                        let _ = write!(out, " {} |", opt_pct(report.pooled.ccr_pct(i)));
                    }
                    let _ = writeln!(out);
                }
            }
        }
        let _ = writeln!(
            out,
            "\nPer-class rates: `{}`\n",
            config.class_metrics_path(bundle.task).display()
        );

        match stat {
            Some(s) => {
                let r = &s.report;
                let _ = writeln!(out, "### Hypothesis tests (alpha {})\n", r.alpha);
                let _ = writeln!(out, "| algorithm | Shapiro-Wilk W | p | fold errors normal? |");
                let _ = writeln!(out, "|---|---|---|---|");
                for entry in &r.normality {
                    let _ = writeln!(
                        out,
                        "| {} | {:.4} | {} | {} |",
                        entry.column,
                        entry.report.statistic,
                        fmt_p(entry.report.p_value),
                        if entry.report.significant { "no" } else { "yes" }
                    );
                }
                let _ = writeln!(out);
                let _ = writeln!(
                    out,
                    "Friedman chi-square = {:.4}, p = {}: {}\n",
                    r.friedman.statistic,
                    fmt_p(r.friedman.p_value),
                    if r.friedman.significant {
                        "the classifiers differ somewhere"
                    } else {
                        "no detectable difference between classifiers"
                    }
                );
                let k = r.nemenyi.column_names.len();
                let mut pairs = Vec::new();
                for a in 0..k {
                    for b in a + 1..k {
                        if r.nemenyi.significant[a][b] {
                            pairs.push(format!(
                                "{} vs {} (q = {:.3}, p = {})",
                                r.nemenyi.column_names[a],
                                r.nemenyi.column_names[b],
                                r.nemenyi.q[a][b],
                                fmt_p(r.nemenyi.p[a][b])
                            ));
                        }
                    }
                }
                if pairs.is_empty() {
                    let _ = writeln!(out, "Nemenyi: no significant pairwise differences.\n");
                } else {
                    let _ = writeln!(out, "Nemenyi significant pairs (critical q = {:.3}):\n", r.nemenyi.critical_q);
                    for pair in pairs {
                        let _ = writeln!(out, "- {pair}");
                    }
                    let _ = writeln!(out);
                }
            }
            None => {
                let _ = writeln!(out, "### Hypothesis tests\n");
                let _ = writeln!(out, "Not available; run the stats command first.\n");
            }
        }
    }

    out
}
