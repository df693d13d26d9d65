//! Linear and quadratic discriminant analysis.
//!
//! LDA pools the class covariances (unbiased, divisor N-2) into one matrix
//! and yields an affine decision score; QDA keeps per-class covariances
//! (divisor n_c - 1) and yields the Gaussian log-posterior ratio. Both add
//! the same diagonal ridge, 1e-6 * trace / d, before factorization; if the
//! matrix is still not positive definite the fit fails.

use serde::{Deserialize, Serialize};

use super::linalg::{cholesky, log_det, solve_lower, solve_spd};
use super::LearnerError;

const RIDGE_FACTOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    weights: Vec<f64>,
    bias: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QdaModel {
    pos: ClassDensity,
    neg: ClassDensity,
}

/// One class's Gaussian in factored form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ClassDensity {
    mean: Vec<f64>,
    /// Lower Cholesky factor of the ridged covariance.
    chol: Vec<Vec<f64>>,
    log_det: f64,
    log_prior: f64,
}

fn class_rows<'a>(z: &'a [Vec<f64>], y: &[i8], label: i8) -> Vec<&'a [f64]> {
    z.iter()
        .zip(y.iter())
        .filter(|(_, &l)| l == label)
        .map(|(row, _)| row.as_slice())
        .collect()
}

fn mean_of(rows: &[&[f64]], d: usize) -> Vec<f64> {
    let mut mean = vec![0.0; d];
    for row in rows {
        for (m, v) in mean.iter_mut().zip(row.iter()) {
            *m += v;
        }
    }
    for m in mean.iter_mut() {
        *m /= rows.len() as f64;
    }
    mean
}

/// Sum of outer products of (row - mean), the unnormalized scatter.
fn scatter(rows: &[&[f64]], mean: &[f64], d: usize) -> Vec<Vec<f64>> {
    let mut s = vec![vec![0.0; d]; d];
    for row in rows {
        for i in 0..d {
            let di = row[i] - mean[i];
            for j in 0..=i {
                s[i][j] += di * (row[j] - mean[j]);
            }
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            s[i][j] = s[j][i];
        }
    }
    s
}

fn add_ridge(cov: &mut [Vec<f64>]) {
    let d = cov.len();
    let trace: f64 = (0..d).map(|i| cov[i][i]).sum();
    let ridge = RIDGE_FACTOR * trace / d as f64;
    for i in 0..d {
        cov[i][i] += ridge;
    }
}

pub fn fit_lda(z: &[Vec<f64>], y: &[i8]) -> Result<LdaModel, LearnerError> {
    let d = z[0].len();
    let pos = class_rows(z, y, 1);
    let neg = class_rows(z, y, -1);
    let n = z.len();
    if n < 3 {
        // Pooled covariance divides by N - 2.
        return Err(LearnerError::InvalidTraining(
            "LDA needs at least 3 rows for a pooled covariance".into(),
        ));
    }
    let mean_pos = mean_of(&pos, d);
    let mean_neg = mean_of(&neg, d);
    let mut cov = scatter(&pos, &mean_pos, d);
    let sn = scatter(&neg, &mean_neg, d);
    for i in 0..d {
        for j in 0..d {
            cov[i][j] = (cov[i][j] + sn[i][j]) / (n - 2) as f64;
        }
    }
    add_ridge(&mut cov);
    let chol = cholesky(&cov).ok_or_else(|| {
        LearnerError::SingularCovariance("pooled covariance is not positive definite".into())
    })?;

    let diff: Vec<f64> = mean_pos
        .iter()
        .zip(mean_neg.iter())
        .map(|(p, q)| p - q)
        .collect();
    let weights = solve_spd(&chol, &diff);
    // Threshold halfway between the projected class means, shifted by the
    // log prior ratio.
    let proj_pos: f64 = weights.iter().zip(mean_pos.iter()).map(|(w, m)| w * m).sum();
    let proj_neg: f64 = weights.iter().zip(mean_neg.iter()).map(|(w, m)| w * m).sum();
    let log_prior = (pos.len() as f64 / n as f64).ln() - (neg.len() as f64 / n as f64).ln();
    let bias = -(proj_pos + proj_neg) / 2.0 + log_prior;
    Ok(LdaModel { weights, bias })
}

/// Affine decision score: positive predicts +1.
pub fn lda_score(model: &LdaModel, z: &[f64]) -> f64 {
    model
        .weights
        .iter()
        .zip(z.iter())
        .map(|(w, v)| w * v)
        .sum::<f64>()
        + model.bias
}

fn fit_density(rows: &[&[f64]], n_total: usize, d: usize) -> Result<ClassDensity, LearnerError> {
    if rows.len() < 2 {
        return Err(LearnerError::SingularCovariance(format!(
            "class with {} sample(s) has no covariance",
            rows.len()
        )));
    }
    let mean = mean_of(rows, d);
    let mut cov = scatter(rows, &mean, d);
    for row in cov.iter_mut() {
        for v in row.iter_mut() {
            *v /= (rows.len() - 1) as f64;
        }
    }
    add_ridge(&mut cov);
    let chol = cholesky(&cov).ok_or_else(|| {
        LearnerError::SingularCovariance("class covariance is not positive definite".into())
    })?;
    let log_det = log_det(&chol);
    Ok(ClassDensity {
        mean,
        chol,
        log_det,
        log_prior: (rows.len() as f64 / n_total as f64).ln(),
    })
}

pub fn fit_qda(z: &[Vec<f64>], y: &[i8]) -> Result<QdaModel, LearnerError> {
    let d = z[0].len();
    let n = z.len();
    Ok(QdaModel {
        pos: fit_density(&class_rows(z, y, 1), n, d)?,
        neg: fit_density(&class_rows(z, y, -1), n, d)?,
    })
}

fn log_density(density: &ClassDensity, z: &[f64]) -> f64 {
    let centered: Vec<f64> = z
        .iter()
        .zip(density.mean.iter())
        .map(|(v, m)| v - m)
        .collect();
    // Mahalanobis term through the triangular solve: ||L^-1 (z-mu)||^2.
    let w = solve_lower(&density.chol, &centered);
    let mahalanobis: f64 = w.iter().map(|v| v * v).sum();
    -0.5 * (mahalanobis + density.log_det) + density.log_prior
}

/// Gaussian log-posterior ratio: positive predicts +1.
pub fn qda_score(model: &QdaModel, z: &[f64]) -> f64 {
    log_density(&model.pos, z) - log_density(&model.neg, z)
}
