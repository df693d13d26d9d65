//! Single-hidden-layer perceptron trained by backpropagation.
//!
//! Architecture d -> hidden -> 1 with logistic activations throughout and a
//! squared-error loss against targets 0 (label -1) and 1 (label +1).
//! Training runs a fixed number of epochs of per-sample updates in training
//! order with a constant learning rate and momentum; weights start uniform
//! in (-0.5, 0.5) drawn in a fixed order from the seed. These match the
//! long-standing defaults of classic neural-net toolkits, which is the
//! point: the learner is a faithful baseline, not a tuned one.
//!
//! The batch loss and batch gradient are exposed so tests can check the
//! backprop math against finite differences.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::LearnerConfig;

/// Final-epoch mean squared error below this marks the fit as converged.
/// 0.125 is the loss of a network stuck at the 0.5 midpoint output.
const CONVERGENCE_MSE: f64 = 0.125;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    /// Hidden weights, one row of length d per hidden unit.
    pub(crate) w1: Vec<Vec<f64>>,
    pub(crate) b1: Vec<f64>,
    /// Output weights, one per hidden unit.
    pub(crate) w2: Vec<f64>,
    pub(crate) b2: f64,
    /// Whether the final epoch's mean squared error fell below threshold.
    pub(crate) converged: bool,
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl MlpModel {
    fn zeroed(d: usize, hidden: usize) -> MlpModel {
        MlpModel {
            w1: vec![vec![0.0; d]; hidden],
            b1: vec![0.0; hidden],
            w2: vec![0.0; hidden],
            b2: 0.0,
            converged: false,
        }
    }

    fn forward(&self, z: &[f64]) -> (Vec<f64>, f64) {
        let hidden: Vec<f64> = self
            .w1
            .iter()
            .zip(self.b1.iter())
            .map(|(row, b)| {
                logistic(row.iter().zip(z.iter()).map(|(w, v)| w * v).sum::<f64>() + b)
            })
            .collect();
        let net: f64 = self
            .w2
            .iter()
            .zip(hidden.iter())
            .map(|(w, h)| w * h)
            .sum::<f64>()
            + self.b2;
        (hidden, logistic(net))
    }

    pub fn output(&self, z: &[f64]) -> f64 {
        self.forward(z).1
    }

    fn param_count(&self) -> usize {
        let d = self.w1.first().map_or(0, Vec::len);
        self.w1.len() * d + self.b1.len() + self.w2.len() + 1
    }

    /// All parameters in one vector: w1 rows, then b1, then w2, then b2.
    pub fn flat_params(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(self.param_count());
        for row in &self.w1 {
            flat.extend_from_slice(row);
        }
        flat.extend_from_slice(&self.b1);
        flat.extend_from_slice(&self.w2);
        flat.push(self.b2);
        flat
    }

    /// Random model with all weights uniform in (-0.5, 0.5), the same
    /// initialization `fit` starts from. Exposed so external checks can
    /// probe the loss surface at a reproducible point.
    pub fn seeded(d: usize, hidden: usize, seed: u64) -> MlpModel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = MlpModel::zeroed(d, hidden);
        let init: Vec<f64> = model
            .flat_params()
            .iter()
            .map(|_| rng.random_range(-0.5..0.5))
            .collect();
        model.with_flat_params(&init)
    }

    /// Inverse of `flat_params`, keeping this model's shape.
    pub fn with_flat_params(&self, flat: &[f64]) -> MlpModel {
        assert_eq!(flat.len(), self.param_count());
        let mut model = self.clone();
        let mut it = flat.iter().copied();
        for row in model.w1.iter_mut() {
            for w in row.iter_mut() {
                *w = it.next().unwrap();
            }
        }
        for b in model.b1.iter_mut() {
            *b = it.next().unwrap();
        }
        for w in model.w2.iter_mut() {
            *w = it.next().unwrap();
        }
        model.b2 = it.next().unwrap();
        model
    }
}

fn target(label: i8) -> f64 {
    if label == 1 {
        1.0
    } else {
        0.0
    }
}

/// Gradient of the per-sample loss 0.5*(o - t)^2 in flat parameter order,
/// accumulated into `grad`. Returns the squared-error loss of the sample.
fn accumulate_gradient(model: &MlpModel, z: &[f64], t: f64, grad: &mut [f64]) -> f64 {
    let (hidden, o) = model.forward(z);
    let d = z.len();
    let delta_out = (o - t) * o * (1.0 - o);
    let mut k = 0;
    for (j, row) in model.w1.iter().enumerate() {
        let delta_hidden = delta_out * model.w2[j] * hidden[j] * (1.0 - hidden[j]);
        for i in 0..row.len() {
            grad[k + i] += delta_hidden * z[i];
        }
        k += d;
    }
    let hidden_base = model.w1.len() * d;
    for (j, h) in hidden.iter().enumerate() {
        let delta_hidden = delta_out * model.w2[j] * h * (1.0 - h);
        grad[hidden_base + j] += delta_hidden;
        grad[hidden_base + model.b1.len() + j] += delta_out * h;
    }
    grad[hidden_base + model.b1.len() + model.w2.len()] += delta_out;
    0.5 * (o - t) * (o - t)
}

/// Mean of the per-sample losses 0.5*(output - target)^2.
pub fn mlp_batch_loss(model: &MlpModel, x: &[Vec<f64>], y: &[i8]) -> f64 {
    let total: f64 = x
        .iter()
        .zip(y.iter())
        .map(|(row, &label)| {
            let o = model.output(row);
            let t = target(label);
            0.5 * (o - t) * (o - t)
        })
        .sum();
    total / x.len() as f64
}

/// Gradient of `mlp_batch_loss` with respect to the flat parameter vector.
pub fn mlp_batch_gradient(model: &MlpModel, x: &[Vec<f64>], y: &[i8]) -> Vec<f64> {
    let mut grad = vec![0.0; model.param_count()];
    for (row, &label) in x.iter().zip(y.iter()) {
        accumulate_gradient(model, row, target(label), &mut grad);
    }
    for g in grad.iter_mut() {
        *g /= x.len() as f64;
    }
    grad
}

pub fn fit(z: &[Vec<f64>], y: &[i8], cfg: &LearnerConfig) -> MlpModel {
    let d = z[0].len();
    let mut model = MlpModel::seeded(d, cfg.mlp_hidden, cfg.seed);

    let mut velocity = vec![0.0; model.param_count()];
    let mut grad = vec![0.0; model.param_count()];
    let mut epoch_loss = 0.0;
    for _ in 0..cfg.mlp_epochs {
        epoch_loss = 0.0;
        for (row, &label) in z.iter().zip(y.iter()) {
            grad.iter_mut().for_each(|g| *g = 0.0);
            epoch_loss += accumulate_gradient(&model, row, target(label), &mut grad);
            // In-place momentum step over the same flat parameter order.
            let mut k = 0;
            let mut step = |p: &mut f64| {
                velocity[k] = cfg.mlp_momentum * velocity[k] - cfg.mlp_learning_rate * grad[k];
                *p += velocity[k];
                k += 1;
            };
            for w_row in model.w1.iter_mut() {
                w_row.iter_mut().for_each(&mut step);
            }
            model.b1.iter_mut().for_each(&mut step);
            model.w2.iter_mut().for_each(&mut step);
            step(&mut model.b2);
        }
    }
    model.converged = epoch_loss / (z.len() as f64) < CONVERGENCE_MSE;
    model
}

/// Output shifted so the decision threshold sits at zero.
pub fn score(model: &MlpModel, z: &[f64]) -> f64 {
    model.output(z) - 0.5
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_model(seed: u64, d: usize, hidden: usize) -> MlpModel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = MlpModel::zeroed(d, hidden);
        let flat: Vec<f64> = (0..model.param_count())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        model.with_flat_params(&flat)
    }

    #[test]
    fn zero_weights_sit_exactly_on_the_tie() {
        let model = MlpModel::zeroed(3, 4);
        assert_eq!(model.output(&[1.0, -2.0, 0.5]), 0.5);
        assert_eq!(score(&model, &[1.0, -2.0, 0.5]), 0.0);
    }

    #[test]
    fn flat_params_round_trip() {
        let model = toy_model(5, 3, 4);
        let rebuilt = model.with_flat_params(&model.flat_params());
        assert_eq!(model, rebuilt);
        assert_eq!(model.flat_params().len(), 4 * 3 + 4 + 4 + 1);
    }

    #[test]
    fn backprop_matches_central_differences() {
        let model = toy_model(11, 3, 5);
        let x = vec![
            vec![0.2, -1.0, 0.7],
            vec![1.3, 0.4, -0.2],
            vec![-0.5, 0.9, 1.1],
            vec![0.0, -0.3, 0.25],
            vec![0.8, 0.8, -1.4],
        ];
        let y = vec![1, -1, 1, -1, 1];
        let analytic = mlp_batch_gradient(&model, &x, &y);
        let flat = model.flat_params();
        let eps = 1e-5;
        let mut numeric = vec![0.0; flat.len()];
        for k in 0..flat.len() {
            let mut plus = flat.clone();
            plus[k] += eps;
            let mut minus = flat.clone();
            minus[k] -= eps;
            numeric[k] = (mlp_batch_loss(&model.with_flat_params(&plus), &x, &y)
                - mlp_batch_loss(&model.with_flat_params(&minus), &x, &y))
                / (2.0 * eps);
        }
        let diff: f64 = analytic
            .iter()
            .zip(numeric.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let scale: f64 = numeric.iter().map(|g| g * g).sum::<f64>().sqrt();
        assert!(
            diff / scale < 1e-6,
            "gradient mismatch: relative error {}",
            diff / scale
        );
    }

    #[test]
    fn learns_a_linear_boundary_and_reports_convergence() {
        let z: Vec<Vec<f64>> = (0..20)
            .map(|i| vec![if i < 10 { -1.0 } else { 1.0 } + 0.01 * i as f64])
            .collect();
        let y: Vec<i8> = (0..20).map(|i| if i < 10 { -1 } else { 1 }).collect();
        let model = fit(&z, &y, &LearnerConfig::with_seed(2));
        assert!(model.converged);
        for (row, &label) in z.iter().zip(y.iter()) {
            let predicted = if score(&model, row) >= 0.0 { 1 } else { -1 };
            assert_eq!(predicted, label);
        }
    }

    #[test]
    fn learns_xor() {
        let z = vec![
            vec![-1.0, -1.0],
            vec![-1.0, 1.0],
            vec![1.0, -1.0],
            vec![1.0, 1.0],
        ];
        let y = vec![-1, 1, 1, -1];
        let model = fit(&z, &y, &LearnerConfig::with_seed(3));
        assert!(model.converged);
        for (row, &label) in z.iter().zip(y.iter()) {
            let predicted = if score(&model, row) >= 0.0 { 1 } else { -1 };
            assert_eq!(predicted, label, "at {row:?}");
        }
    }

    #[test]
    fn contradictory_labels_cannot_converge() {
        // One repeated input with both labels: the mean loss is bounded
        // below by the threshold itself.
        let z = vec![vec![0.3, 0.3], vec![0.3, 0.3]];
        let model = fit(&z, &[-1, 1], &LearnerConfig::with_seed(1));
        assert!(!model.converged);
    }
}
