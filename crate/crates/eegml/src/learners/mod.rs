//! From-scratch binary classifiers behind one fit/predict interface.
//!
//! Six algorithms: 1-nearest-neighbor, linear and quadratic discriminant
//! analysis, a C4.5-style gain-ratio decision tree, a random forest, and a
//! single-hidden-layer backprop MLP. Every algorithm trains and predicts on
//! standardized features (per-column mean/std learned from the training
//! split only), labels are internally -1/+1 with +1 the abnormal class, and
//! exact score ties resolve to +1 except where an algorithm documents its
//! own rule (1NN prefers the lower training-row index).

mod discriminant;
mod forest;
mod knn;
pub(crate) mod linalg;
mod mlp;
mod tree;

pub use mlp::{mlp_batch_gradient, mlp_batch_loss, MlpModel};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LearnerError {
    #[error("expected {expected} features, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("covariance matrix is singular: {0}")]
    SingularCovariance(String),
    #[error("invalid training data: {0}")]
    InvalidTraining(String),
    #[error("model serialization: {0}")]
    Serialization(String),
}

/// Which classifier to train.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "1nn")]
    NearestNeighbor,
    #[serde(rename = "lda")]
    Lda,
    #[serde(rename = "qda")]
    Qda,
    #[serde(rename = "tree")]
    DecisionTree,
    #[serde(rename = "forest")]
    RandomForest,
    #[serde(rename = "mlp")]
    Mlp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::NearestNeighbor,
        Algorithm::Lda,
        Algorithm::Qda,
        Algorithm::DecisionTree,
        Algorithm::RandomForest,
        Algorithm::Mlp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::NearestNeighbor => "1nn",
            Algorithm::Lda => "lda",
            Algorithm::Qda => "qda",
            Algorithm::DecisionTree => "tree",
            Algorithm::RandomForest => "forest",
            Algorithm::Mlp => "mlp",
        }
    }

    pub fn parse(text: &str) -> Option<Algorithm> {
        match text.to_ascii_lowercase().as_str() {
            "1nn" | "nn" | "knn" => Some(Algorithm::NearestNeighbor),
            "lda" => Some(Algorithm::Lda),
            "qda" => Some(Algorithm::Qda),
            "tree" | "c4.5" | "c45" => Some(Algorithm::DecisionTree),
            "forest" | "rf" => Some(Algorithm::RandomForest),
            "mlp" | "ann" => Some(Algorithm::Mlp),
        _ => None,
        }
    }

    /// Whether fitting draws random numbers (and therefore needs a seed).
    pub fn is_stochastic(self) -> bool {
        matches!(self, Algorithm::RandomForest | Algorithm::Mlp)
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Labeled rows ready for a binary learner: y entries are -1 or +1.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<i8>,
    pub column_names: Vec<String>,
}

impl TrainingSet {
    pub fn new(
        x: Vec<Vec<f64>>,
        y: Vec<i8>,
        column_names: Vec<String>,
    ) -> Result<TrainingSet, LearnerError> {
        if x.len() != y.len() {
            return Err(LearnerError::InvalidTraining(format!(
                "{} rows but {} labels",
                x.len(),
                y.len()
            )));
        }
        let d = column_names.len();
        for (i, row) in x.iter().enumerate() {
            if row.len() != d {
                return Err(LearnerError::InvalidTraining(format!(
                    "row {i} has {} features, expected {d}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(LearnerError::InvalidTraining(format!(
                    "row {i} contains a non-finite value"
                )));
            }
        }
        if let Some(i) = y.iter().position(|&l| l != -1 && l != 1) {
            return Err(LearnerError::InvalidTraining(format!(
                "label at row {i} is {}, expected -1 or +1",
                y[i]
            )));
        }
        Ok(TrainingSet { x, y, column_names })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.column_names.len()
    }
}

/// Hyperparameters plus the mandatory seed for the stochastic learners.
/// Defaults mirror the values recorded in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LearnerConfig {
    pub seed: u64,
    /// Random forest size.
    pub tree_count: usize,
    /// MLP hidden layer width.
    pub mlp_hidden: usize,
    pub mlp_learning_rate: f64,
    pub mlp_momentum: f64,
    pub mlp_epochs: usize,
}

impl Default for LearnerConfig {
    fn default() -> LearnerConfig {
        LearnerConfig {
            seed: 0,
            tree_count: 100,
            mlp_hidden: 20,
            mlp_learning_rate: 0.3,
            mlp_momentum: 0.2,
            mlp_epochs: 500,
        }
    }
}

impl LearnerConfig {
    pub fn with_seed(seed: u64) -> LearnerConfig {
        LearnerConfig {
            seed,
            ..LearnerConfig::default()
        }
    }
}

/// Per-column affine map to zero mean, unit deviation. Columns with zero
/// spread keep scale 1 so they pass through unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub scales: Vec<f64>,
}

impl Standardizer {
    fn fit(x: &[Vec<f64>]) -> Standardizer {
        let n = x.len() as f64;
        let d = x.first().map_or(0, Vec::len);
        let mut means = vec![0.0; d];
        for row in x {
            for (m, v) in means.iter_mut().zip(row.iter()) {
                *m += v;
            }
        }
        for m in means.iter_mut() {
            *m /= n;
        }
        let mut scales = vec![0.0; d];
        for row in x {
            for j in 0..d {
                scales[j] += (row[j] - means[j]).powi(2);
            }
        }
        for s in scales.iter_mut() {
            *s = (*s / n).sqrt();
            if *s == 0.0 {
                *s = 1.0;
            }
        }
        Standardizer { means, scales }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.means.iter().zip(self.scales.iter()))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    fn apply_all(&self, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        x.iter().map(|row| self.apply(row)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum ModelParams {
    Knn(knn::KnnModel),
    Lda(discriminant::LdaModel),
    Qda(discriminant::QdaModel),
    Tree(tree::TreeModel),
    Forest(forest::ForestModel),
    Mlp(MlpModel),
}

/// A trained binary classifier. Immutable; prediction is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryModel {
    /// Schema version of the serialized form.
    pub format_version: u32,
    pub algorithm: Algorithm,
    /// Hyperparameters the model was trained with.
    pub config: LearnerConfig,
    pub standardizer: Standardizer,
    params: ModelParams,
}

/// Version tag written into serialized models.
pub const MODEL_FORMAT_VERSION: u32 = 1;

impl BinaryModel {
    /// Trains `algorithm` on the given set. Standardization parameters come
    /// from this data alone and are applied inside `predict`.
    pub fn fit(
        algorithm: Algorithm,
        train: &TrainingSet,
        cfg: &LearnerConfig,
    ) -> Result<BinaryModel, LearnerError> {
        if train.len() < 2 {
            return Err(LearnerError::InvalidTraining(format!(
                "need at least 2 training rows, found {}",
                train.len()
            )));
        }
        if !train.y.contains(&1) || !train.y.contains(&-1) {
            return Err(LearnerError::InvalidTraining(
                "training set must contain both classes".into(),
            ));
        }
        let standardizer = Standardizer::fit(&train.x);
        let z = standardizer.apply_all(&train.x);
        let params = match algorithm {
            Algorithm::NearestNeighbor => ModelParams::Knn(knn::fit(&z, &train.y)),
            Algorithm::Lda => ModelParams::Lda(discriminant::fit_lda(&z, &train.y)?),
            Algorithm::Qda => ModelParams::Qda(discriminant::fit_qda(&z, &train.y)?),
            Algorithm::DecisionTree => ModelParams::Tree(tree::fit(&z, &train.y)),
            Algorithm::RandomForest => {
                ModelParams::Forest(forest::fit(&z, &train.y, cfg.tree_count, cfg.seed))
            }
            Algorithm::Mlp => ModelParams::Mlp(mlp::fit(&z, &train.y, cfg)),
        };
        Ok(BinaryModel {
            format_version: MODEL_FORMAT_VERSION,
            algorithm,
            config: cfg.clone(),
            standardizer,
            params,
        })
    }

    pub fn dim(&self) -> usize {
        self.standardizer.means.len()
    }

    fn check_dim(&self, x: &[f64]) -> Result<(), LearnerError> {
        if x.len() != self.dim() {
            return Err(LearnerError::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Predicted label, -1 or +1.
    pub fn predict(&self, x: &[f64]) -> Result<i8, LearnerError> {
        self.check_dim(x)?;
        let z = self.standardizer.apply(x);
        Ok(match &self.params {
            ModelParams::Knn(m) => knn::predict(m, &z),
            ModelParams::Tree(m) => tree::predict(m, &z),
            ModelParams::Forest(m) => forest::predict(m, &z),
            ModelParams::Lda(_) | ModelParams::Qda(_) | ModelParams::Mlp(_) => {
                let score = self.raw_score(&z);
                if score >= 0.0 {
                    1
                } else {
                    -1
                }
            }
        })
    }

    /// Real-valued confidence; positive means +1, and a score of exactly 0
    /// falls to the algorithm's tie rule inside `predict`.
    pub fn decision_score(&self, x: &[f64]) -> Result<f64, LearnerError> {
        self.check_dim(x)?;
        let z = self.standardizer.apply(x);
        Ok(self.raw_score(&z))
    }

    fn raw_score(&self, z: &[f64]) -> f64 {
        match &self.params {
            ModelParams::Knn(m) => knn::score(m, z),
            ModelParams::Lda(m) => discriminant::lda_score(m, z),
            ModelParams::Qda(m) => discriminant::qda_score(m, z),
            ModelParams::Tree(m) => tree::score(m, z),
            ModelParams::Forest(m) => forest::score(m, z),
            ModelParams::Mlp(m) => mlp::score(m, z),
        }
    }

    /// For MLP models, whether the final epoch's mean squared error dropped
    /// below the convergence threshold. None for other algorithms.
    pub fn mlp_converged(&self) -> Option<bool> {
        match &self.params {
            ModelParams::Mlp(m) => Some(m.converged),
            _ => None,
        }
    }

    pub fn to_json<W: std::io::Write>(&self, w: W) -> Result<(), LearnerError> {
        serde_json::to_writer_pretty(w, self).map_err(|e| LearnerError::Serialization(e.to_string()))
    }

    pub fn from_json<R: std::io::Read>(r: R) -> Result<BinaryModel, LearnerError> {
        let model: BinaryModel =
            serde_json::from_reader(r).map_err(|e| LearnerError::Serialization(e.to_string()))?;
        if model.format_version != MODEL_FORMAT_VERSION {
            return Err(LearnerError::Serialization(format!(
                "unsupported model format version {}",
                model.format_version
            )));
        }
        Ok(model)
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Standard normal draws via Box-Muller.
    pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
        let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.random_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Two well-separated spherical Gaussian clouds, n points per class.
    pub fn gaussian_clouds(n: usize, d: usize, separation: f64, seed: u64) -> TrainingSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = Vec::with_capacity(2 * n);
        let mut y = Vec::with_capacity(2 * n);
        for &label in &[-1i8, 1] {
            let offset = if label == 1 { separation } else { -separation };
            for _ in 0..n {
                x.push((0..d).map(|_| gaussian(&mut rng) + offset).collect());
                y.push(label);
            }
        }
        let names = (0..d).map(|j| format!("f{j}")).collect();
        TrainingSet::new(x, y, names).unwrap()
    }

    /// Radially separable data: +1 inside the unit circle, -1 on an annulus
    /// around it. Linearly inseparable by construction.
    pub fn ring_data(n: usize, seed: u64) -> TrainingSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = Vec::with_capacity(2 * n);
        let mut y = Vec::with_capacity(2 * n);
        for i in 0..2 * n {
            let inside = i % 2 == 0;
            let radius = if inside {
                rng.random_range(0.0..0.8)
            } else {
                rng.random_range(1.5..2.5)
            };
            let angle = rng.random_range(0.0..2.0 * std::f64::consts::PI);
            x.push(vec![radius * angle.cos(), radius * angle.sin()]);
            y.push(if inside { 1 } else { -1 });
        }
        TrainingSet::new(x, y, vec!["x".into(), "y".into()]).unwrap()
    }

    pub fn training_accuracy(model: &BinaryModel, set: &TrainingSet) -> f64 {
        let correct = set
            .x
            .iter()
            .zip(set.y.iter())
            .filter(|(row, &label)| model.predict(row).unwrap() == label)
            .count();
        correct as f64 / set.len() as f64
    }
}
