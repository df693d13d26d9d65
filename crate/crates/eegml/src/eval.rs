//! Stratified cross-validation and confusion-matrix metrics.
//!
//! Folds are built by shuffling each class separately with a seeded RNG and
//! dealing the rows round-robin, so every class is spread across folds to
//! within one row and the whole assignment is reproducible from the seed.
//! Each fold trains on the other k-1 folds (standardization included, so
//! nothing leaks from the test rows) and contributes one error percentage;
//! the report carries the per-fold errors, their mean and sample standard
//! deviation, and a confusion matrix pooled over all folds.
//!
//! Confusion matrices follow the "rows are predictions" convention:
//! `count(i, j)` is the number of examples of true class j predicted as
//! class i. The per-class correct rate (CCR) divides the diagonal by the
//! true-class total and the predictive value (PV) divides it by the
//! predicted-class total; for a binary matrix ordered [positive, negative]
//! these are exactly sensitivity/specificity and the positive/negative
//! predictive values. A class that never occurs (or is never predicted) has
//! no defined rate, so both return None rather than 0.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::learners::{Algorithm, BinaryModel, LearnerConfig, LearnerError, TrainingSet};
use crate::multiclass::{aaa_code_matrix, fit_ecoc, predict_ecoc, MulticlassError};
use crate::seeding::{derive_seed, streams};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("invalid fold count: {0}")]
    InvalidK(String),
    #[error("{left} predictions but {right} truth labels")]
    LengthMismatch { left: usize, right: usize },
    #[error("label {0:?} is not in the class list")]
    UnknownLabel(String),
    #[error("{0}")]
    TaskMismatch(String),
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error(transparent)]
    Multiclass(#[from] MulticlassError),
    #[error("report serialization: {0}")]
    Serialization(String),
}

/// Disjoint row-index folds covering the whole dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldAssignment {
    folds: Vec<Vec<usize>>,
    pub seed: u64,
    /// Stratification caveats, e.g. a class with fewer members than folds.
    pub warnings: Vec<String>,
}

impl FoldAssignment {
    pub fn count(&self) -> usize {
        self.folds.len()
    }

    /// Row indices of fold i, ascending.
    pub fn fold(&self, i: usize) -> &[usize] {
        &self.folds[i]
    }

    /// All row indices outside fold i, ascending.
    pub fn train_indices(&self, i: usize) -> Vec<usize> {
        let mut rows: Vec<usize> = self
            .folds
            .iter()
            .enumerate()
            .filter(|&(f, _)| f != i)
            .flat_map(|(_, fold)| fold.iter().copied())
            .collect();
        rows.sort_unstable();
        rows
    }
}

/// Shuffles each class with its own seeded stream and deals the rows
/// round-robin, continuing the deal across classes so overall fold sizes
/// also stay within one row of each other.
pub fn stratified_folds(
    labels: &[String],
    k: usize,
    seed: u64,
) -> Result<FoldAssignment, EvalError> {
    if k < 2 {
        return Err(EvalError::InvalidK(format!("need at least 2 folds, got {k}")));
    }
    if k > labels.len() {
        return Err(EvalError::InvalidK(format!(
            "{k} folds for {} rows",
            labels.len()
        )));
    }
    let mut classes: Vec<&String> = Vec::new();
    for label in labels {
        if !classes.contains(&label) {
            classes.push(label);
        }
    }
    let mut folds = vec![Vec::new(); k];
    let mut warnings = Vec::new();
    let mut cursor = 0usize;
    for (position, class) in classes.iter().enumerate() {
        let mut rows: Vec<usize> = (0..labels.len()).filter(|&i| &labels[i] == *class).collect();
        if rows.len() < k {
            warnings.push(format!(
                "class {class:?} has {} rows for {k} folds; some folds will miss it",
                rows.len()
            ));
        }
        let mut rng =
            ChaCha8Rng::seed_from_u64(derive_seed(seed, streams::CLASS_SHUFFLE + position as u64));
        rows.shuffle(&mut rng);
        for row in rows {
            folds[cursor % k].push(row);
            cursor += 1;
        }
    }
    for fold in folds.iter_mut() {
        fold.sort_unstable();
    }
    Ok(FoldAssignment { folds, seed, warnings })
}

/// counts[i][j]: examples of true class j predicted as class i.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<u64>>,
    class_names: Vec<String>,
}

impl ConfusionMatrix {
    pub fn zeroed(class_names: &[String]) -> ConfusionMatrix {
        ConfusionMatrix {
            counts: vec![vec![0; class_names.len()]; class_names.len()],
            class_names: class_names.to_vec(),
        }
    }

    pub fn from_predictions(
        predictions: &[String],
        truth: &[String],
        class_names: &[String],
    ) -> Result<ConfusionMatrix, EvalError> {
        if predictions.len() != truth.len() {
            return Err(EvalError::LengthMismatch {
                left: predictions.len(),
                right: truth.len(),
            });
        }
        let index = |name: &String| {
            class_names
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| EvalError::UnknownLabel(name.clone()))
        };
        let mut cm = ConfusionMatrix::zeroed(class_names);
        for (p, t) in predictions.iter().zip(truth.iter()) {
            cm.counts[index(p)?][index(t)?] += 1;
        }
        Ok(cm)
    }

    pub fn size(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn count(&self, predicted: usize, actual: usize) -> u64 {
        self.counts[predicted][actual]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.size()).map(|i| self.counts[i][i]).sum()
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        assert_eq!(self.class_names, other.class_names);
        for (mine, theirs) in self.counts.iter_mut().zip(other.counts.iter()) {
            for (a, b) in mine.iter_mut().zip(theirs.iter()) {
                *a += b;
            }
        }
    }

    /// Fraction of all examples on the diagonal, as a percentage.
    pub fn accuracy_pct(&self) -> Option<f64> {
        let total = self.total();
        if total == 0 {
            None
        } else {
            Some(100.0 * self.trace() as f64 / total as f64)
        }
    }

    /// Correct classification rate of class i: diagonal over the true-class
    /// total (column sum), as a percentage. None when the class never
    /// occurs. For the positive class of a binary matrix this is the
    /// sensitivity; for the negative class, the specificity.
    pub fn ccr_pct(&self, i: usize) -> Option<f64> {
        let truth_total: u64 = (0..self.size()).map(|p| self.counts[p][i]).sum();
        if truth_total == 0 {
            None
        } else {
            Some(100.0 * self.counts[i][i] as f64 / truth_total as f64)
        }
    }

    /// Predictive value of class i: diagonal over the predicted-class total
    /// (row sum), as a percentage. None when the class is never predicted.
    pub fn pv_pct(&self, i: usize) -> Option<f64> {
        let predicted_total: u64 = self.counts[i].iter().sum();
        if predicted_total == 0 {
            None
        } else {
            Some(100.0 * self.counts[i][i] as f64 / predicted_total as f64)
        }
    }

    fn assert_binary(&self) {
        assert_eq!(self.size(), 2, "binary accessors need a 2x2 matrix");
    }

    /// True positives, with class 0 as the positive class.
    pub fn tp(&self) -> u64 {
        self.assert_binary();
        self.counts[0][0]
    }

    pub fn fp(&self) -> u64 {
        self.assert_binary();
        self.counts[0][1]
    }

    pub fn fn_count(&self) -> u64 {
        self.assert_binary();
        self.counts[1][0]
    }

    pub fn tn(&self) -> u64 {
        self.assert_binary();
        self.counts[1][1]
    }

    pub fn sensitivity_pct(&self) -> Option<f64> {
        self.assert_binary();
        self.ccr_pct(0)
    }

    pub fn specificity_pct(&self) -> Option<f64> {
        self.assert_binary();
        self.ccr_pct(1)
    }

    pub fn positive_pv_pct(&self) -> Option<f64> {
        self.assert_binary();
        self.pv_pct(0)
    }

    pub fn negative_pv_pct(&self) -> Option<f64> {
        self.assert_binary();
        self.pv_pct(1)
    }

    /// One row per predicted class, one column per true class.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), EvalError> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["predicted".to_string()];
        header.extend(self.class_names.iter().map(|c| format!("true_{c}")));
        out.write_record(&header)
            .map_err(|e| EvalError::Serialization(e.to_string()))?;
        for (name, row) in self.class_names.iter().zip(self.counts.iter()) {
            let mut record = vec![name.clone()];
            record.extend(row.iter().map(|c| c.to_string()));
            out.write_record(&record)
                .map_err(|e| EvalError::Serialization(e.to_string()))?;
        }
        out.flush().map_err(|e| EvalError::Serialization(e.to_string()))
    }
}

impl std::fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let width = self
            .class_names
            .iter()
            .map(|n| n.len())
            .chain(self.counts.iter().flatten().map(|c| c.to_string().len()))
            .max()
            .unwrap_or(1)
            .max(4);
        write!(f, "{:>w$} |", "pred", w = width)?;
        for name in &self.class_names {
            write!(f, " {name:>width$}")?;
        }
        writeln!(f, "  (columns: true class)")?;
        for (name, row) in self.class_names.iter().zip(self.counts.iter()) {
            write!(f, "{name:>width$} |")?;
            for count in row {
                write!(f, " {count:>width$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// See `ConfusionMatrix::from_predictions`.
pub fn confusion_matrix(
    predictions: &[String],
    truth: &[String],
    class_names: &[String],
) -> Result<ConfusionMatrix, EvalError> {
    ConfusionMatrix::from_predictions(predictions, truth, class_names)
}

/// Binary treats the first class name as the positive (+1) side and trains
/// one model per fold; Multiclass trains an all-against-all code matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Binary,
    Multiclass,
}

impl std::fmt::Display for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Task::Binary => "binary",
            Task::Multiclass => "multiclass",
        })
    }
}

/// What to run: task, algorithm, fold count and the master seed that every
/// per-fold and per-column seed derives from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvSpec {
    pub task: Task,
    pub algorithm: Algorithm,
    pub folds: usize,
    pub seed: u64,
    pub learner: LearnerConfig,
}

/// Everything one cross-validation run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub spec: CvSpec,
    pub class_names: Vec<String>,
    pub rows: usize,
    pub feature_count: usize,
    /// Misclassification percentage of each fold, in fold order.
    pub fold_errors_pct: Vec<f64>,
    pub mean_error_pct: f64,
    /// Sample standard deviation (n-1) of the fold errors.
    pub sd_error_pct: f64,
    pub pooled: ConfusionMatrix,
    /// Multiclass decodings that hit a distance tie (0 for binary).
    pub tie_count: usize,
    pub warnings: Vec<String>,
}

impl CvReport {
    pub fn to_json<W: std::io::Write>(&self, w: W) -> Result<(), EvalError> {
        serde_json::to_writer_pretty(w, self).map_err(|e| EvalError::Serialization(e.to_string()))
    }

    pub fn from_json<R: std::io::Read>(r: R) -> Result<CvReport, EvalError> {
        serde_json::from_reader(r).map_err(|e| EvalError::Serialization(e.to_string()))
    }

    /// `fold,algorithm,error_pct` rows, the exchange format consumed by the
    /// statistics commands.
    pub fn write_fold_errors_csv<W: std::io::Write>(&self, w: W) -> Result<(), EvalError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["fold", "algorithm", "error_pct"])
            .map_err(|e| EvalError::Serialization(e.to_string()))?;
        for (fold, err) in self.fold_errors_pct.iter().enumerate() {
            out.write_record([
                fold.to_string(),
                self.spec.algorithm.name().to_string(),
                err.to_string(),
            ])
            .map_err(|e| EvalError::Serialization(e.to_string()))?;
        }
        out.flush().map_err(|e| EvalError::Serialization(e.to_string()))
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sample_sd(values: &[f64], mean: f64) -> f64 {
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

struct FoldOutcome {
    error_pct: f64,
    cm: ConfusionMatrix,
    ties: usize,
}

fn run_fold(
    spec: &CvSpec,
    x: &[Vec<f64>],
    y: &[String],
    class_names: &[String],
    feature_names: &[String],
    assignment: &FoldAssignment,
    fold: usize,
) -> Result<FoldOutcome, EvalError> {
    let train_rows = assignment.train_indices(fold);
    let test_rows = assignment.fold(fold);
    let fold_cfg = LearnerConfig {
        seed: derive_seed(spec.seed, streams::FOLD_TRAIN + fold as u64),
        ..spec.learner.clone()
    };
    let train_x: Vec<Vec<f64>> = train_rows.iter().map(|&r| x[r].clone()).collect();
    let truth: Vec<String> = test_rows.iter().map(|&r| y[r].clone()).collect();

    let predictions = match spec.task {
        Task::Binary => {
            let train_y: Vec<i8> = train_rows
                .iter()
                .map(|&r| if y[r] == class_names[0] { 1 } else { -1 })
                .collect();
            let train = TrainingSet::new(train_x, train_y, feature_names.to_vec())
                .map_err(EvalError::Learner)?;
            let model = BinaryModel::fit(spec.algorithm, &train, &fold_cfg)?;
            let mut predictions = Vec::with_capacity(test_rows.len());
            for &r in test_rows {
                let side = model.predict(&x[r])?;
                predictions.push(class_names[usize::from(side != 1)].clone());
            }
            (predictions, 0)
        }
        Task::Multiclass => {
            let code = aaa_code_matrix(class_names)?;
            let train_y: Vec<String> = train_rows.iter().map(|&r| y[r].clone()).collect();
            let model = fit_ecoc(&code, spec.algorithm, &train_x, &train_y, feature_names, &fold_cfg)?;
            let mut predictions = Vec::with_capacity(test_rows.len());
            let mut ties = 0;
            for &r in test_rows {
                let p = predict_ecoc(&model, &x[r])?;
                ties += usize::from(p.tied);
                predictions.push(p.class_name);
            }
            (predictions, ties)
        }
    };
    let (predictions, ties) = predictions;

    let cm = ConfusionMatrix::from_predictions(&predictions, &truth, class_names)?;
    let wrong = predictions
        .iter()
        .zip(truth.iter())
        .filter(|(p, t)| p != t)
        .count();
    Ok(FoldOutcome {
        error_pct: 100.0 * wrong as f64 / test_rows.len() as f64,
        cm,
        ties,
    })
}

/// Runs k-fold stratified cross-validation. Per-fold learner seeds derive
/// from the spec seed, so results do not depend on `spec.learner.seed` or on
/// whether folds execute in parallel.
pub fn cross_validate(
    spec: &CvSpec,
    x: &[Vec<f64>],
    y: &[String],
    class_names: &[String],
    feature_names: &[String],
) -> Result<CvReport, EvalError> {
    if x.len() != y.len() {
        return Err(EvalError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let distinct: BTreeSet<&String> = y.iter().collect();
    if let Some(unknown) = distinct.iter().find(|l| !class_names.contains(l)) {
        return Err(EvalError::UnknownLabel((**unknown).clone()));
    }
    match spec.task {
        Task::Binary if class_names.len() != 2 => {
            return Err(EvalError::TaskMismatch(format!(
                "binary task needs exactly 2 classes, got {}",
                class_names.len()
            )));
        }
        Task::Multiclass if class_names.len() < 2 => {
            return Err(EvalError::TaskMismatch(
                "multiclass task needs at least 2 classes".into(),
            ));
        }
        _ => {}
    }

    let assignment = stratified_folds(y, spec.folds, spec.seed)?;
    let outcomes: Result<Vec<FoldOutcome>, EvalError> = (0..spec.folds)
        .into_par_iter()
        .map(|fold| run_fold(spec, x, y, class_names, feature_names, &assignment, fold))
        .collect();
    let outcomes = outcomes?;

    let mut pooled = ConfusionMatrix::zeroed(class_names);
    let mut fold_errors = Vec::with_capacity(spec.folds);
    let mut tie_count = 0;
    for outcome in &outcomes {
        pooled.merge(&outcome.cm);
        fold_errors.push(outcome.error_pct);
        tie_count += outcome.ties;
    }
    let me = mean(&fold_errors);
    Ok(CvReport {
        spec: spec.clone(),
        class_names: class_names.to_vec(),
        rows: x.len(),
        feature_count: feature_names.len(),
        mean_error_pct: me,
        sd_error_pct: sample_sd(&fold_errors, me),
        fold_errors_pct: fold_errors,
        pooled,
        tie_count,
        warnings: assignment.warnings.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn strings(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn label_block(counts: &[(&str, usize)]) -> Vec<String> {
        counts
            .iter()
            .flat_map(|&(name, n)| std::iter::repeat_n(name.to_string(), n))
            .collect()
    }

    #[test]
    fn bonn_sized_folds_are_perfectly_stratified() {
        let labels = label_block(&[("a", 100), ("b", 100), ("c", 100), ("d", 100)]);
        let folds = stratified_folds(&labels, 10, 7).unwrap();
        assert!(folds.warnings.is_empty());
        for i in 0..10 {
            let fold = folds.fold(i);
            assert_eq!(fold.len(), 40);
            for class in ["a", "b", "c", "d"] {
                let count = fold.iter().filter(|&&r| labels[r] == class).count();
                assert_eq!(count, 10, "fold {i}, class {class}");
            }
        }
    }

    #[test]
    fn two_fold_toy_split() {
        let labels = strings(&["p", "p", "n", "n"]);
        let folds = stratified_folds(&labels, 2, 1).unwrap();
        for i in 0..2 {
            let fold = folds.fold(i);
            assert_eq!(fold.len(), 2);
            assert_eq!(fold.iter().filter(|&&r| labels[r] == "p").count(), 1);
        }
    }

    #[test]
    fn fold_invariants_hold_across_seeds_and_k() {
        let labels = label_block(&[("a", 13), ("b", 7), ("c", 21)]);
        for seed in [0u64, 1, 99] {
            for k in [2usize, 3, 5, 7] {
                let folds = stratified_folds(&labels, k, seed).unwrap();
                let mut seen = vec![false; labels.len()];
                for i in 0..k {
                    for &r in folds.fold(i) {
                        assert!(!seen[r], "row {r} assigned twice");
                        seen[r] = true;
                    }
                }
                assert!(seen.iter().all(|&s| s), "coverage at seed {seed}, k {k}");
                for class in ["a", "b", "c"] {
                    let counts: Vec<usize> = (0..k)
                        .map(|i| folds.fold(i).iter().filter(|&&r| labels[r] == class).count())
                        .collect();
                    let spread = counts.iter().max().unwrap() - counts.iter().min().unwrap();
                    assert!(spread <= 1, "class {class}: {counts:?}");
                }
                let sizes: Vec<usize> = (0..k).map(|i| folds.fold(i).len()).collect();
                assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
            }
        }
    }

    #[test]
    fn folds_are_reproducible_and_seed_sensitive() {
        let labels = label_block(&[("a", 30), ("b", 30)]);
        let a = stratified_folds(&labels, 10, 5).unwrap();
        let b = stratified_folds(&labels, 10, 5).unwrap();
        let c = stratified_folds(&labels, 10, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.folds, c.folds);
    }

    #[test]
    fn degenerate_fold_counts_are_rejected() {
        let labels = strings(&["a", "b", "a", "b"]);
        assert!(matches!(stratified_folds(&labels, 1, 0), Err(EvalError::InvalidK(_))));
        assert!(matches!(stratified_folds(&labels, 5, 0), Err(EvalError::InvalidK(_))));
    }

    #[test]
    fn small_class_warns_but_still_balances() {
        let labels = label_block(&[("big", 20), ("rare", 2)]);
        let folds = stratified_folds(&labels, 4, 3).unwrap();
        assert_eq!(folds.warnings.len(), 1);
        assert!(folds.warnings[0].contains("rare"));
        let counts: Vec<usize> = (0..4)
            .map(|i| folds.fold(i).iter().filter(|&&r| labels[r] == "rare").count())
            .collect();
        assert_eq!(counts.iter().sum::<usize>(), 2);
        assert!(counts.iter().all(|&c| c <= 1));
    }

    #[test]
    fn train_indices_complement_the_fold() {
        let labels = label_block(&[("a", 6), ("b", 6)]);
        let folds = stratified_folds(&labels, 3, 11).unwrap();
        for i in 0..3 {
            let train = folds.train_indices(i);
            assert_eq!(train.len(), 8);
            for &r in folds.fold(i) {
                assert!(!train.contains(&r));
            }
            assert!(train.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn identical_predictions_give_a_diagonal_matrix() {
        let names = strings(&["x", "y"]);
        let truth = strings(&["x", "y", "x", "y", "x", "x", "y", "x", "y", "x"]);
        let cm = confusion_matrix(&truth, &truth, &names).unwrap();
        assert_eq!(cm.trace(), 10);
        assert_eq!(cm.total(), 10);
        assert_eq!(cm.accuracy_pct(), Some(100.0));
        for i in 0..2 {
            assert_eq!(cm.ccr_pct(i), Some(100.0));
            assert_eq!(cm.pv_pct(i), Some(100.0));
        }
    }

    #[test]
    fn all_positive_predictions_on_balanced_truth() {
        let names = strings(&["abnormal", "normal"]);
        let truth = label_block(&[("abnormal", 5), ("normal", 5)]);
        let preds = label_block(&[("abnormal", 10)]);
        let cm = confusion_matrix(&preds, &truth, &names).unwrap();
        assert_eq!((cm.tp(), cm.fp(), cm.fn_count(), cm.tn()), (5, 5, 0, 0));
        assert_eq!(cm.sensitivity_pct(), Some(100.0));
        assert_eq!(cm.specificity_pct(), Some(0.0));
        assert_eq!(cm.positive_pv_pct(), Some(50.0));
        // "normal" is never predicted, so its predictive value is undefined.
        assert_eq!(cm.negative_pv_pct(), None);
    }

    #[test]
    fn orientation_is_predicted_row_true_column() {
        let names = strings(&["a", "b", "c", "d"]);
        let cm = confusion_matrix(&strings(&["c"]), &strings(&["b"]), &names).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = u64::from(i == 2 && j == 1);
                assert_eq!(cm.count(i, j), expected, "at ({i}, {j})");
            }
        }
    }

    #[test]
    fn mismatched_or_unknown_labels_error() {
        let names = strings(&["a", "b"]);
        assert!(matches!(
            confusion_matrix(&strings(&["a"]), &strings(&["a", "b"]), &names),
            Err(EvalError::LengthMismatch { left: 1, right: 2 })
        ));
        assert!(matches!(
            confusion_matrix(&strings(&["z"]), &strings(&["a"]), &names),
            Err(EvalError::UnknownLabel(l)) if l == "z"
        ));
    }

    #[test]
    fn rate_arithmetic_matches_hand_counts() {
        let names = strings(&["abnormal", "normal"]);
        let mut truth = label_block(&[("abnormal", 100)]);
        truth.extend(label_block(&[("normal", 100)]));
        let mut preds = label_block(&[("abnormal", 99), ("normal", 1)]);
        preds.extend(label_block(&[("abnormal", 2), ("normal", 98)]));
        let cm = confusion_matrix(&preds, &truth, &names).unwrap();
        assert_eq!((cm.tp(), cm.fn_count(), cm.fp(), cm.tn()), (99, 1, 2, 98));
        assert_eq!(cm.ccr_pct(0), Some(99.0));
        assert_eq!(cm.pv_pct(0), Some(100.0 * 99.0 / 101.0));
        assert_eq!(cm.accuracy_pct(), Some(98.5));
    }

    #[test]
    fn mean_and_sd_of_a_known_error_vector() {
        let errors = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 12.5];
        let m = mean(&errors);
        let sd = sample_sd(&errors, m);
        assert!((m - 1.25).abs() < 1e-12);
        assert!((sd - 15.625f64.sqrt()).abs() < 1e-12, "sd {sd}");
    }

    /// Four tight, well-separated blobs; n rows per class.
    fn blobs(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<String>) {
        let centers = [(0.0, 0.0), (10.0, 0.0), (0.0, 10.0), (10.0, 10.0)];
        let names = ["w", "x", "y", "z"];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (&(cx, cy), name) in centers.iter().zip(names.iter()) {
            for _ in 0..n {
                rows.push(vec![
                    cx + rng.random_range(-0.5..0.5),
                    cy + rng.random_range(-0.5..0.5),
                ]);
                labels.push(name.to_string());
            }
        }
        (rows, labels)
    }

    fn feature_names() -> Vec<String> {
        strings(&["f0", "f1"])
    }

    #[test]
    fn separable_multiclass_data_scores_zero_error() {
        let (x, y) = blobs(10, 3);
        let spec = CvSpec {
            task: Task::Multiclass,
            algorithm: Algorithm::NearestNeighbor,
            folds: 10,
            seed: 5,
            learner: LearnerConfig::default(),
        };
        let report =
            cross_validate(&spec, &x, &y, &strings(&["w", "x", "y", "z"]), &feature_names())
                .unwrap();
        assert_eq!(report.fold_errors_pct, vec![0.0; 10]);
        assert_eq!(report.mean_error_pct, 0.0);
        assert_eq!(report.sd_error_pct, 0.0);
        assert_eq!(report.pooled.trace(), 40);
        assert_eq!(report.pooled.total(), 40);
        assert_eq!(report.tie_count, 0);
    }

    #[test]
    fn constant_features_make_the_tree_guess_the_positive_class() {
        // With nothing to split on, the tree collapses to a tied leaf that
        // predicts the positive class, which is exactly half wrong on
        // balanced data.
        let x = vec![vec![1.0, 1.0]; 40];
        let y = label_block(&[("abnormal", 20), ("normal", 20)]);
        let spec = CvSpec {
            task: Task::Binary,
            algorithm: Algorithm::DecisionTree,
            folds: 10,
            seed: 2,
            learner: LearnerConfig::default(),
        };
        let report =
            cross_validate(&spec, &x, &y, &strings(&["abnormal", "normal"]), &feature_names())
                .unwrap();
        assert_eq!(report.mean_error_pct, 50.0);
        assert_eq!(report.sd_error_pct, 0.0);
        assert_eq!(report.pooled.tp(), 20);
        assert_eq!(report.pooled.tn(), 0);
    }

    #[test]
    fn pooled_trace_matches_mean_error() {
        // Overlapping blobs so some folds actually miss; equal fold sizes
        // make the identity exact.
        let (mut x, y) = blobs(10, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for row in x.iter_mut() {
            row[0] += rng.random_range(-6.0..6.0);
            row[1] += rng.random_range(-6.0..6.0);
        }
        let spec = CvSpec {
            task: Task::Multiclass,
            algorithm: Algorithm::Lda,
            folds: 10,
            seed: 13,
            learner: LearnerConfig::default(),
        };
        let report =
            cross_validate(&spec, &x, &y, &strings(&["w", "x", "y", "z"]), &feature_names())
                .unwrap();
        assert!(report.mean_error_pct > 0.0, "want a non-trivial error rate");
        let from_cm = 100.0 * (1.0 - report.pooled.trace() as f64 / report.pooled.total() as f64);
        assert!(
            (report.mean_error_pct - from_cm).abs() < 1e-9,
            "{} vs {from_cm}",
            report.mean_error_pct
        );
    }

    #[test]
    fn binary_task_requires_two_classes() {
        let (x, y) = blobs(4, 1);
        let spec = CvSpec {
            task: Task::Binary,
            algorithm: Algorithm::Lda,
            folds: 2,
            seed: 0,
            learner: LearnerConfig::default(),
        };
        assert!(matches!(
            cross_validate(&spec, &x, &y, &strings(&["w", "x", "y", "z"]), &feature_names()),
            Err(EvalError::TaskMismatch(_))
        ));
    }

    #[test]
    fn cv_is_reproducible() {
        let (x, y) = blobs(6, 21);
        let spec = CvSpec {
            task: Task::Multiclass,
            algorithm: Algorithm::RandomForest,
            folds: 4,
            seed: 17,
            learner: LearnerConfig::default(),
        };
        let names = strings(&["w", "x", "y", "z"]);
        let a = cross_validate(&spec, &x, &y, &names, &feature_names()).unwrap();
        let b = cross_validate(&spec, &x, &y, &names, &feature_names()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn report_round_trips_and_dumps_fold_csv() {
        let (x, y) = blobs(5, 2);
        let spec = CvSpec {
            task: Task::Multiclass,
            algorithm: Algorithm::NearestNeighbor,
            folds: 5,
            seed: 3,
            learner: LearnerConfig::default(),
        };
        let report = cross_validate(&spec, &x, &y, &strings(&["w", "x", "y", "z"]), &feature_names())
            .unwrap();
        let mut buf = Vec::new();
        report.to_json(&mut buf).unwrap();
        let loaded = CvReport::from_json(buf.as_slice()).unwrap();
        assert_eq!(report, loaded);

        let mut csv_buf = Vec::new();
        report.write_fold_errors_csv(&mut csv_buf).unwrap();
        let text = String::from_utf8(csv_buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "fold,algorithm,error_pct");
        assert_eq!(lines.len(), 6);
        assert!(lines[1].starts_with("0,1nn,"));
    }

    #[test]
    fn display_alignment_smoke() {
        let names = strings(&["abnormal", "normal"]);
        let truth = label_block(&[("abnormal", 3), ("normal", 2)]);
        let preds = label_block(&[("abnormal", 2), ("normal", 3)]);
        let cm = confusion_matrix(&preds, &truth, &names).unwrap();
        let text = cm.to_string();
        assert!(text.contains("abnormal"));
        assert!(text.lines().count() >= 3);
    }
}
