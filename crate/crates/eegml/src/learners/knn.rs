//! 1-nearest-neighbor on standardized features with Euclidean distance.
//! Distance ties go to the lower training-row index, which makes
//! prediction fully deterministic even on degenerate data.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    /// Standardized training rows, in original order.
    points: Vec<Vec<f64>>,
    labels: Vec<i8>,
}

pub fn fit(z: &[Vec<f64>], y: &[i8]) -> KnnModel {
    KnnModel {
        points: z.to_vec(),
        labels: y.to_vec(),
    }
}

fn distance_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(p, q)| (p - q).powi(2)).sum()
}

pub fn predict(model: &KnnModel, z: &[f64]) -> i8 {
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (i, point) in model.points.iter().enumerate() {
        let d = distance_sq(point, z);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    model.labels[best]
}

/// Distance to the nearest -1 example minus distance to the nearest +1
/// example: positive when the positive class is closer.
pub fn score(model: &KnnModel, z: &[f64]) -> f64 {
    let mut near_pos = f64::INFINITY;
    let mut near_neg = f64::INFINITY;
    for (point, &label) in model.points.iter().zip(model.labels.iter()) {
        let d = distance_sq(point, z);
        if label == 1 {
            near_pos = near_pos.min(d);
        } else {
            near_neg = near_neg.min(d);
        }
    }
    near_neg.sqrt() - near_pos.sqrt()
}
