//! Statistical comparison of cross-validated classifiers: Shapiro-Wilk
//! normality screening of per-fold errors, the Friedman omnibus rank test,
//! and Nemenyi pairwise follow-ups against the studentized range.
//!
//! Results enter as a [`ResultsBlock`], rows = folds and columns =
//! classifiers, either built directly or read back from the fold-error CSV
//! that evaluation writes.

mod friedman;
mod shapiro;
mod srange;

pub use friedman::friedman;
pub use shapiro::shapiro_wilk;
pub use srange::{critical_value, survival, ALPHA_05_CRITICAL};

use std::collections::HashMap;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Significance level used throughout unless a caller overrides it.
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("sample has {size} values; the test needs at least {minimum}")]
    SampleTooSmall { size: usize, minimum: usize },
    #[error("sample has {size} values; the test supports at most {maximum}")]
    SampleTooLarge { size: usize, maximum: usize },
    #[error("{0} contains a non-finite value")]
    NonFinite(String),
    #[error("block has {count} columns; the test needs at least {minimum}")]
    TooFewGroups { count: usize, minimum: usize },
    #[error("block has {count} rows; the test needs at least {minimum}")]
    TooFewRows { count: usize, minimum: usize },
    #[error("results block is ragged: row {row} has {got} values, expected {expected}")]
    RaggedRows { row: usize, got: usize, expected: usize },
    #[error("results block needs at least one row and one column")]
    EmptyBlock,
    #[error("column names must be unique and match the value width")]
    BadColumnNames,
    #[error("fold errors: {0}")]
    FoldErrors(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("serialization: {0}")]
    Serialization(#[from] serde_json::Error),
}

/// Rectangular table of paired measurements: one row per fold, one column
/// per classifier, every cell finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsBlock {
    values: Vec<Vec<f64>>,
    column_names: Vec<String>,
}

impl ResultsBlock {
    pub fn new(values: Vec<Vec<f64>>, column_names: Vec<String>) -> Result<Self, StatsError> {
        if values.is_empty() || column_names.is_empty() {
            return Err(StatsError::EmptyBlock);
        }
        let width = column_names.len();
        for (row, r) in values.iter().enumerate() {
            if r.len() != width {
                return Err(StatsError::RaggedRows { row, got: r.len(), expected: width });
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(StatsError::NonFinite(format!("results row {row}")));
            }
        }
        for (i, name) in column_names.iter().enumerate() {
            if name.is_empty() || column_names[..i].contains(name) {
                return Err(StatsError::BadColumnNames);
            }
        }
        Ok(ResultsBlock { values, column_names })
    }

    /// Assembles a block from per-fold error records, typically read back
    /// from evaluation CSVs. Columns keep first-appearance order; every
    /// algorithm must report exactly once for exactly the same folds.
    pub fn from_fold_errors(records: &[FoldError]) -> Result<Self, StatsError> {
        let mut columns: Vec<String> = Vec::new();
        let mut cells: HashMap<(usize, String), f64> = HashMap::new();
        let mut folds: Vec<usize> = Vec::new();
        for rec in records {
            if !columns.contains(&rec.algorithm) {
                columns.push(rec.algorithm.clone());
            }
            if !folds.contains(&rec.fold) {
                folds.push(rec.fold);
            }
            let key = (rec.fold, rec.algorithm.clone());
            if cells.insert(key, rec.error_pct).is_some() {
                return Err(StatsError::FoldErrors(format!(
                    "duplicate entry for fold {} of {}",
                    rec.fold, rec.algorithm
                )));
            }
        }
        folds.sort_unstable();
        let values = folds
            .iter()
            .map(|&fold| {
                columns
                    .iter()
                    .map(|alg| {
                        cells.get(&(fold, alg.clone())).copied().ok_or_else(|| {
                            StatsError::FoldErrors(format!("{alg} is missing fold {fold}"))
                        })
                    })
                    .collect::<Result<Vec<f64>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        ResultsBlock::new(values, columns)
    }

    pub fn rows(&self) -> usize {
        self.values.len()
    }

    pub fn columns(&self) -> usize {
        self.column_names.len()
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[j]).collect()
    }
}

/// One classifier's error on one cross-validation fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldError {
    pub fold: usize,
    pub algorithm: String,
    pub error_pct: f64,
}

/// Reads fold-error records from CSV with a `fold,algorithm,error_pct`
/// header, the format evaluation reports are written in.
pub fn read_fold_errors<R: Read>(reader: R) -> Result<Vec<FoldError>, StatsError> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    csv_reader
        .deserialize()
        .collect::<Result<Vec<FoldError>, _>>()
        .map_err(StatsError::from)
}

/// Outcome of a single hypothesis test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub test: String,
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub significant: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TestReport {
    pub fn new(test: &str, statistic: f64, p_value: f64, alpha: f64, note: Option<String>) -> Self {
        TestReport {
            test: test.into(),
            statistic,
            p_value,
            alpha,
            significant: p_value < alpha,
            note,
        }
    }

    /// Re-evaluates the accept/reject decision at a different level.
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self.significant = self.p_value < alpha;
        self
    }
}

/// Pairwise Nemenyi comparison table. `q`, `p`, and `significant` are
/// symmetric with trivial diagonals (q = 0, p = 1, not significant).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NemenyiReport {
    pub column_names: Vec<String>,
    pub mean_ranks: Vec<f64>,
    pub q: Vec<Vec<f64>>,
    pub p: Vec<Vec<f64>>,
    pub alpha: f64,
    pub critical_q: f64,
    pub significant: Vec<Vec<bool>>,
}

/// Nemenyi post-hoc test at the default level.
pub fn nemenyi(block: &ResultsBlock) -> Result<NemenyiReport, StatsError> {
    nemenyi_at(block, DEFAULT_ALPHA)
}

/// Nemenyi post-hoc test: every pair of columns is compared through the
/// difference of mean ranks, scaled by sqrt(k(k+1)/(12n)) and referred to
/// the studentized range with infinite degrees of freedom.
pub fn nemenyi_at(block: &ResultsBlock, alpha: f64) -> Result<NemenyiReport, StatsError> {
    let k = block.columns();
    let n = block.rows();
    if k < 2 {
        return Err(StatsError::TooFewGroups { count: k, minimum: 2 });
    }
    if n < 2 {
        return Err(StatsError::TooFewRows { count: n, minimum: 2 });
    }

    let mean_ranks = friedman::mean_ranks(block);
    let kf = k as f64;
    let scale = (kf * (kf + 1.0) / (12.0 * n as f64)).sqrt();

    let mut q = vec![vec![0.0; k]; k];
    let mut p = vec![vec![1.0; k]; k];
    let mut significant = vec![vec![false; k]; k];
    for a in 0..k {
        for b in a + 1..k {
            let qa = (mean_ranks[a] - mean_ranks[b]).abs() / scale;
            let pa = survival(qa, k);
            q[a][b] = qa;
            q[b][a] = qa;
            p[a][b] = pa;
            p[b][a] = pa;
            let sig = pa < alpha;
            significant[a][b] = sig;
            significant[b][a] = sig;
        }
    }

    let critical_q = if alpha == DEFAULT_ALPHA && k - 2 < ALPHA_05_CRITICAL.len() {
        ALPHA_05_CRITICAL[k - 2]
    } else {
        critical_value(k, alpha)
    };

    Ok(NemenyiReport {
        column_names: block.column_names().to_vec(),
        mean_ranks,
        q,
        p,
        alpha,
        critical_q,
        significant,
    })
}

/// Normality screen for one column of the block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityEntry {
    pub column: String,
    pub report: TestReport,
}

/// Full statistical comparison: per-column normality, the Friedman omnibus
/// test, and the Nemenyi pairwise table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub alpha: f64,
    pub column_names: Vec<String>,
    pub normality: Vec<NormalityEntry>,
    pub friedman: TestReport,
    pub nemenyi: NemenyiReport,
}

impl StatsReport {
    pub fn to_json(&self) -> Result<String, StatsError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(json: &str) -> Result<Self, StatsError> {
        Ok(serde_json::from_str(json)?)
    }
}

/// Runs the whole comparison suite on a results block at level `alpha`.
pub fn analyze(block: &ResultsBlock, alpha: f64) -> Result<StatsReport, StatsError> {
    let normality = block
        .column_names()
        .iter()
        .enumerate()
        .map(|(j, name)| {
            shapiro_wilk(&block.column(j)).map(|report| NormalityEntry {
                column: name.clone(),
                report: report.with_alpha(alpha),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let friedman = friedman::friedman(block)?.with_alpha(alpha);
    let nemenyi = nemenyi_at(block, alpha)?;
    Ok(StatsReport {
        alpha,
        column_names: block.column_names().to_vec(),
        normality,
        friedman,
        nemenyi,
    })
}
