//! Code-matrix multiclass classification over binary learners.
//!
//! A code matrix has one row per class and one column per binary subproblem;
//! entries are +1 (positive class), -1 (negative class) or 0 (class left
//! out). The all-against-all matrix enumerates every unordered class pair,
//! so each column trains on exactly the two paired classes and keeps their
//! original balance. Prediction runs every column model, collects the signed
//! outputs, and returns the class whose row is nearest in Euclidean distance.
//!
//! By default the distance skips a row's zero entries: a column that never
//! saw a class has nothing to say about it. The unmasked variant (full-row
//! distance, zeros included) stays available for comparison; for
//! all-against-all codes every row has the same number of zeros, so the two
//! only differ in how they flag ties. Distance ties resolve to the lowest
//! row index and are flagged in the prediction diagnostics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::learners::{
    Algorithm, BinaryModel, LearnerConfig, LearnerError, TrainingSet, MODEL_FORMAT_VERSION,
};
use crate::seeding::{derive_seed, streams};

#[derive(Debug, Error)]
pub enum MulticlassError {
    #[error("need at least 2 classes, found {0}")]
    TooFewClasses(usize),
    #[error("invalid code matrix: {0}")]
    InvalidCode(String),
    #[error("label {0:?} does not match any code matrix class")]
    UnknownClass(String),
    #[error("column {column} ({pair}) has no training rows for class {class:?}")]
    MissingClass {
        column: usize,
        pair: String,
        class: String,
    },
    #[error("training column {column} ({pair}): {source}")]
    ColumnTraining {
        column: usize,
        pair: String,
        source: LearnerError,
    },
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error("model serialization: {0}")]
    Serialization(String),
}

/// Class-by-subproblem coding over {-1, 0, +1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeMatrix {
    /// entries[row][column]; rows align with `class_names`.
    entries: Vec<Vec<i8>>,
    class_names: Vec<String>,
}

impl CodeMatrix {
    pub fn new(entries: Vec<Vec<i8>>, class_names: Vec<String>) -> Result<CodeMatrix, MulticlassError> {
        let r = class_names.len();
        if r < 2 {
            return Err(MulticlassError::TooFewClasses(r));
        }
        if entries.len() != r {
            return Err(MulticlassError::InvalidCode(format!(
                "{} rows but {} class names",
                entries.len(),
                r
            )));
        }
        for (i, name) in class_names.iter().enumerate() {
            if name.is_empty() {
                return Err(MulticlassError::InvalidCode(format!("class {i} has an empty name")));
            }
            if class_names[..i].contains(name) {
                return Err(MulticlassError::InvalidCode(format!("duplicate class name {name:?}")));
            }
        }
        let c = entries[0].len();
        if c == 0 {
            return Err(MulticlassError::InvalidCode("no columns".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != c {
                return Err(MulticlassError::InvalidCode(format!(
                    "row {i} has {} columns, expected {c}",
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|e| ![-1, 0, 1].contains(e)) {
                return Err(MulticlassError::InvalidCode(format!(
                    "row {i} contains entry {bad}, expected -1, 0 or +1"
                )));
            }
        }
        for j in 0..c {
            let column: Vec<i8> = entries.iter().map(|row| row[j]).collect();
            if !column.contains(&1) || !column.contains(&-1) {
                return Err(MulticlassError::InvalidCode(format!(
                    "column {j} must contain at least one +1 and one -1"
                )));
            }
            for k in 0..j {
                if entries.iter().all(|row| row[j] == row[k]) {
                    return Err(MulticlassError::InvalidCode(format!(
                        "columns {k} and {j} are identical"
                    )));
                }
            }
        }
        Ok(CodeMatrix { entries, class_names })
    }

    pub fn rows(&self) -> usize {
        self.class_names.len()
    }

    pub fn columns(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entry(&self, row: usize, column: usize) -> i8 {
        self.entries[row][column]
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.class_names.iter().position(|n| n == name)
    }

    /// Human-readable column tag: "pos_vs_neg" when the column pairs exactly
    /// two classes, otherwise a positional name.
    pub fn column_label(&self, column: usize) -> String {
        let pos: Vec<&str> = (0..self.rows())
            .filter(|&i| self.entries[i][column] == 1)
            .map(|i| self.class_names[i].as_str())
            .collect();
        let neg: Vec<&str> = (0..self.rows())
            .filter(|&i| self.entries[i][column] == -1)
            .map(|i| self.class_names[i].as_str())
            .collect();
        if pos.len() == 1 && neg.len() == 1 {
            format!("{}_vs_{}", pos[0], neg[0])
        } else {
            format!("col{column}")
        }
    }

    /// True when every column pairs exactly two classes and all pairs occur.
    pub fn is_all_against_all(&self) -> bool {
        let r = self.rows();
        if self.columns() != r * (r - 1) / 2 {
            return false;
        }
        let mut seen = std::collections::BTreeSet::new();
        for j in 0..self.columns() {
            let pos: Vec<usize> = (0..r).filter(|&i| self.entries[i][j] == 1).collect();
            let neg: Vec<usize> = (0..r).filter(|&i| self.entries[i][j] == -1).collect();
            if pos.len() != 1 || neg.len() != 1 {
                return false;
            }
            seen.insert((pos[0].min(neg[0]), pos[0].max(neg[0])));
        }
        seen.len() == self.columns()
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), MulticlassError> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["class".to_string()];
        header.extend((0..self.columns()).map(|j| self.column_label(j)));
        out.write_record(&header)
            .map_err(|e| MulticlassError::Serialization(e.to_string()))?;
        for (name, row) in self.class_names.iter().zip(self.entries.iter()) {
            let mut record = vec![name.clone()];
            record.extend(row.iter().map(|e| e.to_string()));
            out.write_record(&record)
                .map_err(|e| MulticlassError::Serialization(e.to_string()))?;
        }
        out.flush().map_err(|e| MulticlassError::Serialization(e.to_string()))
    }
}

/// One column per unordered class pair (i, j) with i < j, enumerated in
/// lexicographic index order; the lower-index class takes the +1 side.
pub fn aaa_code_matrix(class_names: &[String]) -> Result<CodeMatrix, MulticlassError> {
    let r = class_names.len();
    if r < 2 {
        return Err(MulticlassError::TooFewClasses(r));
    }
    let mut entries = vec![vec![0i8; r * (r - 1) / 2]; r];
    let mut column = 0;
    for i in 0..r {
        for j in i + 1..r {
            entries[i][column] = 1;
            entries[j][column] = -1;
            column += 1;
        }
    }
    CodeMatrix::new(entries, class_names.to_vec())
}

/// Squared code distance between an output vector and a row. Entries are
/// integers, so ties are exact.
fn squared_distance(code: &CodeMatrix, row: usize, outputs: &[i8], masked: bool) -> u32 {
    let mut sum = 0u32;
    for (j, &o) in outputs.iter().enumerate() {
        let e = code.entry(row, j);
        if e == 0 && masked {
            continue;
        }
        let diff = (o - e) as i32;
        sum += (diff * diff) as u32;
    }
    sum
}

/// Nearest code row to a binary output vector. Returns the winning row index
/// and whether another row tied with it (ties resolve to the lowest index).
pub fn decode(code: &CodeMatrix, outputs: &[i8], masked: bool) -> (usize, bool) {
    assert_eq!(outputs.len(), code.columns());
    let distances: Vec<u32> = (0..code.rows())
        .map(|i| squared_distance(code, i, outputs, masked))
        .collect();
    let best = *distances.iter().min().expect("code has rows");
    let winner = distances.iter().position(|&d| d == best).expect("min exists");
    let tied = distances.iter().filter(|&&d| d == best).count() > 1;
    (winner, tied)
}

/// A code matrix plus one trained binary model per column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MulticlassModel {
    pub format_version: u32,
    pub algorithm: Algorithm,
    /// Whether decoding skips zero entries (the default).
    pub masked_decoding: bool,
    pub code: CodeMatrix,
    /// How many training rows each column model saw.
    pub column_training_sizes: Vec<usize>,
    models: Vec<BinaryModel>,
}

/// Everything `predict_ecoc` knows about one decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcocPrediction {
    pub class_index: usize,
    pub class_name: String,
    /// True when at least two rows were equidistant from the output vector.
    pub tied: bool,
    /// Signed output of every column model.
    pub outputs: Vec<i8>,
    /// Euclidean code distance to every class row.
    pub distances: Vec<f64>,
}

/// Trains one binary model per code column. Column j trains on exactly the
/// rows whose class has a nonzero entry in column j, labeled by that entry,
/// with an RNG seed derived from the master seed and the column index.
pub fn fit_ecoc(
    code: &CodeMatrix,
    algorithm: Algorithm,
    x: &[Vec<f64>],
    y: &[String],
    feature_names: &[String],
    cfg: &LearnerConfig,
) -> Result<MulticlassModel, MulticlassError> {
    if x.len() != y.len() {
        return Err(MulticlassError::Learner(LearnerError::InvalidTraining(
            format!("{} rows but {} labels", x.len(), y.len()),
        )));
    }
    let mut row_of: Vec<usize> = Vec::with_capacity(y.len());
    for label in y {
        row_of.push(
            code.class_index(label)
                .ok_or_else(|| MulticlassError::UnknownClass(label.clone()))?,
        );
    }
    let columns: Vec<usize> = (0..code.columns()).collect();
    let fitted: Result<Vec<(BinaryModel, usize)>, MulticlassError> = columns
        .par_iter()
        .map(|&j| {
            let pair = code.column_label(j);
            let mut bx = Vec::new();
            let mut by = Vec::new();
            for (row, &class_row) in x.iter().zip(row_of.iter()) {
                let entry = code.entry(class_row, j);
                if entry != 0 {
                    bx.push(row.clone());
                    by.push(entry);
                }
            }
            for side in [1i8, -1] {
                if !by.contains(&side) {
                    let class = (0..code.rows())
                        .find(|&i| code.entry(i, j) == side)
                        .map(|i| code.class_names()[i].clone())
                        .unwrap_or_default();
                    return Err(MulticlassError::MissingClass {
                        column: j,
                        pair,
                        class,
                    });
                }
            }
            let size = bx.len();
            let train = TrainingSet::new(bx, by, feature_names.to_vec())
                .map_err(|source| MulticlassError::ColumnTraining {
                    column: j,
                    pair: pair.clone(),
                    source,
                })?;
            let column_cfg = LearnerConfig {
                seed: derive_seed(cfg.seed, streams::ECOC_COLUMN + j as u64),
                ..cfg.clone()
            };
            let model = BinaryModel::fit(algorithm, &train, &column_cfg).map_err(|source| {
                MulticlassError::ColumnTraining {
                    column: j,
                    pair,
                    source,
                }
            })?;
            Ok((model, size))
        })
        .collect();
    let fitted = fitted?;
    let (models, column_training_sizes) = fitted.into_iter().unzip();
    Ok(MulticlassModel {
        format_version: MODEL_FORMAT_VERSION,
        algorithm,
        masked_decoding: true,
        code: code.clone(),
        column_training_sizes,
        models,
    })
}

pub fn predict_ecoc(model: &MulticlassModel, x: &[f64]) -> Result<EcocPrediction, MulticlassError> {
    let mut outputs = Vec::with_capacity(model.models.len());
    for column in &model.models {
        outputs.push(column.predict(x)?);
    }
    let (class_index, tied) = decode(&model.code, &outputs, model.masked_decoding);
    let distances = (0..model.code.rows())
        .map(|i| f64::from(squared_distance(&model.code, i, &outputs, model.masked_decoding)).sqrt())
        .collect();
    Ok(EcocPrediction {
        class_index,
        class_name: model.code.class_names()[class_index].clone(),
        tied,
        outputs,
        distances,
    })
}

impl MulticlassModel {
    pub fn column_models(&self) -> &[BinaryModel] {
        &self.models
    }

    pub fn to_json<W: std::io::Write>(&self, w: W) -> Result<(), MulticlassError> {
        serde_json::to_writer_pretty(w, self).map_err(|e| MulticlassError::Serialization(e.to_string()))
    }

    pub fn from_json<R: std::io::Read>(r: R) -> Result<MulticlassModel, MulticlassError> {
        let model: MulticlassModel = serde_json::from_reader(r)
            .map_err(|e| MulticlassError::Serialization(e.to_string()))?;
        if model.format_version != MODEL_FORMAT_VERSION {
            return Err(MulticlassError::Serialization(format!(
                "unsupported model format version {}",
                model.format_version
            )));
        }
        if model.models.len() != model.code.columns() {
            return Err(MulticlassError::Serialization(format!(
                "{} column models for {} columns",
                model.models.len(),
                model.code.columns()
            )));
        }
        Ok(model)
    }
}
