//! Command-line front end for the pipeline: extract features, evaluate
//! classifiers, compare them statistically, and render reports, all driven
//! by one TOML config that flags can override.
//!
//! Exit codes: 0 on success, 1 when a run fails, 2 for usage problems.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use eegml::eval::Task;
use eegml::learners::Algorithm;
use eegml::pipeline::{self, PipelineConfig, PipelineError};

#[derive(Parser)]
#[command(
    name = "eegml",
    version,
    about = "Multitaper EEG spectral features and classical classifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Config file plus the overrides every subcommand accepts.
#[derive(Args)]
struct ConfigArgs {
    /// TOML configuration file; defaults apply when omitted.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Dataset manifest, overriding the config.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Output directory, overriding the config.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Master seed, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Stratified fold count, overriding the config.
    #[arg(long)]
    folds: Option<usize>,
    /// Task to run (binary | multiclass); repeat for several.
    #[arg(long = "task", value_name = "TASK")]
    tasks: Vec<String>,
    /// Algorithm to run (1nn | lda | qda | tree | forest | mlp); repeat for several.
    #[arg(long = "algorithm", value_name = "ALGO")]
    algorithms: Vec<String>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<PipelineConfig, PipelineError> {
        let mut config = match &self.config {
            Some(path) => PipelineConfig::from_file(path)?,
            None => PipelineConfig::default(),
        };
        if let Some(manifest) = &self.manifest {
            config.manifest = manifest.clone();
        }
        if let Some(output_dir) = &self.output_dir {
            config.output_dir = output_dir.clone();
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(folds) = self.folds {
            config.folds = folds;
        }
        if !self.tasks.is_empty() {
            config.tasks = self
                .tasks
                .iter()
                .map(|t| match t.as_str() {
                    "binary" => Ok(Task::Binary),
                    "multiclass" => Ok(Task::Multiclass),
                    other => Err(PipelineError::Usage(format!(
                        "unknown task {other:?} (expected binary or multiclass)"
                    ))),
                })
                .collect::<Result<_, _>>()?;
        }
        if !self.algorithms.is_empty() {
            config.algorithms = self
                .algorithms
                .iter()
                .map(|a| {
                    Algorithm::parse(a).ok_or_else(|| {
                        PipelineError::Usage(format!(
                            "unknown algorithm {a:?} (expected 1nn, lda, qda, tree, forest or mlp)"
                        ))
                    })
                })
                .collect::<Result<_, _>>()?;
        }
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Extract the 105-feature matrix from the manifest's segments.
    Extract(ConfigArgs),
    /// Cross-validate the configured classifiers on the extracted features.
    Evaluate(ConfigArgs),
    /// Run Shapiro-Wilk, Friedman and Nemenyi tests over per-fold errors.
    Stats {
        #[command(flatten)]
        args: ConfigArgs,
        /// Analyze this fold-error CSV directly and print the JSON report
        /// instead of reading the configured evaluation outputs.
        #[arg(long, value_name = "CSV")]
        input: Option<PathBuf>,
    },
    /// Render report.md plus plot-ready CSVs from earlier outputs.
    Report {
        #[command(flatten)]
        args: ConfigArgs,
        /// Also dump spectrum/spectrogram/bispectrum CSVs for this segment
        /// id; repeat for several.
        #[arg(long = "dump-segment", value_name = "ID")]
        dump_segments: Vec<String>,
    },
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Extract(args) => {
            let config = args.resolve()?;
            let summary = pipeline::cmd_extract(&config)?;
            for warning in &summary.warnings {
                eprintln!("warning: {warning}");
            }
            println!(
                "wrote {} rows x {} features to {}",
                summary.rows,
                summary.feature_count,
                config.features_path().display()
            );
        }
        Command::Evaluate(args) => {
            let config = args.resolve()?;
            let bundles = pipeline::cmd_evaluate(&config)?;
            for bundle in &bundles {
                for report in &bundle.reports {
                    println!(
                        "{} {}: mean error {:.2}% (sd {:.2})",
                        bundle.task,
                        report.spec.algorithm.name(),
                        report.mean_error_pct,
                        report.sd_error_pct
                    );
                    for warning in &report.warnings {
                        eprintln!("warning: {warning}");
                    }
                }
                println!(
                    "wrote {} and {}",
                    config.evaluation_path(bundle.task).display(),
                    config.fold_errors_path(bundle.task).display()
                );
            }
        }
        Command::Stats { args, input } => {
            if let Some(path) = input {
                let report = pipeline::stats_from_csv(&path)?;
                let json = report
                    .to_json()
                    .map_err(|e| PipelineError::Runtime(e.to_string()))?;
                println!("{json}");
            } else {
                let config = args.resolve()?;
                let bundles = pipeline::cmd_stats(&config)?;
                for bundle in &bundles {
                    println!(
                        "{}: Friedman chi-square {:.4}, p {:.6} -> {}",
                        bundle.task,
                        bundle.report.friedman.statistic,
                        bundle.report.friedman.p_value,
                        if bundle.report.friedman.significant {
                            "classifiers differ"
                        } else {
                            "no detectable difference"
                        }
                    );
                    println!("wrote {}", config.stats_path(bundle.task).display());
                }
            }
        }
        Command::Report { args, dump_segments } => {
            let config = args.resolve()?;
            let path = pipeline::cmd_report(&config, &dump_segments)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
